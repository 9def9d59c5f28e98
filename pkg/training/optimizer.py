import logging

import numpy as np

from numerics.checkpoint import round_to_storage
from utils.exceptions import NonFiniteGradient

SQ_PREFIX = "adadelta.sq."
ACC_PREFIX = "adadelta.acc."


class AdadeltaState:
    """Parametre başına E[g^2] ve E[Δ^2] biriktiricileri"""

    def __init__(self, params=None):
        self.square_avg = {}
        self.acc_delta = {}
        if params is not None:
            for name, tensor in params.items():
                self.square_avg[name] = np.zeros_like(tensor.data)
                self.acc_delta[name] = np.zeros_like(tensor.data)

    def to_arrays(self):
        arrays = {}
        for name in sorted(self.square_avg):
            arrays[SQ_PREFIX + name] = self.square_avg[name]
            arrays[ACC_PREFIX + name] = self.acc_delta[name]
        return arrays

    @classmethod
    def from_arrays(cls, params, arrays):
        state = cls(params)
        for name in state.square_avg:
            if SQ_PREFIX + name in arrays:
                state.square_avg[name] = np.asarray(arrays[SQ_PREFIX + name], dtype=np.float64).copy()
                state.acc_delta[name] = np.asarray(arrays[ACC_PREFIX + name], dtype=np.float64).copy()
        return state


def global_norm(grads):
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def adadelta_step(params, grads, state, lr, rho=0.95, eps=1e-6, clip_norm=None):
    """Standart Adadelta güncellemesi, isim sırasıyla yerinde.

    E[Δ²] ölçeklenmemiş Δ ile birikir; lr yalnızca parametre adımına uygulanır (PyTorch biçimi).
    Gradyanlardan biri sonlu değilse hiçbir şey değişmeden NonFiniteGradient atılır.
    """
    logger = logging.getLogger('optimizer')
    for name in params.names():
        if not np.all(np.isfinite(grads[name])):
            logger.warning(f"sonlu olmayan gradyan: {name}, adım atlandı")
            raise NonFiniteGradient(f"sonlu olmayan gradyan: {name}")

    scale = 1.0
    if clip_norm is not None:
        norm = global_norm(grads)
        if norm > clip_norm:
            scale = clip_norm / norm
            logger.debug(f"gradyan kırpıldı: norm {norm:.4f} -> {clip_norm}")

    for name, tensor in params.items():
        grad = grads[name] * scale
        square_avg = rho * state.square_avg[name] + (1.0 - rho) * grad * grad
        delta = np.sqrt(state.acc_delta[name] + eps) / np.sqrt(square_avg + eps) * grad
        acc_delta = rho * state.acc_delta[name] + (1.0 - rho) * delta * delta
        tensor.data = round_to_storage(tensor.data - lr * delta)
        state.square_avg[name] = round_to_storage(square_avg)
        state.acc_delta[name] = round_to_storage(acc_delta)
    return state
