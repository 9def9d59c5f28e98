from collections import OrderedDict

import numpy as np

from numerics.checkpoint import round_to_storage
from numerics.tensor import Tensor
from utils.exceptions import NumericsError


class ParameterSet:
    """İsim -> Tensor eşlemesi; isimler benzersiz, şekiller sabit"""

    def __init__(self, tensors=None):
        self._tensors = OrderedDict()
        for name, value in (tensors or {}).items():
            self.register(name, value)

    def register(self, name, value):
        if name in self._tensors:
            raise NumericsError(f"parametre adı tekrar ediyor: {name}")
        tensor = value if isinstance(value, Tensor) else Tensor(value)
        tensor.requires_grad = True
        tensor.name = name
        self._tensors[name] = tensor
        return tensor

    def add_weight(self, name, shape, fan_in, rng):
        """U(-1/sqrt(fan_in), +1/sqrt(fan_in)) ile başlatılmış ağırlık"""
        bound = 1.0 / np.sqrt(fan_in)
        return self.register(name, round_to_storage(rng.uniform(-bound, bound, size=shape)))

    def add_bias(self, name, shape):
        return self.register(name, np.zeros(shape))

    def __getitem__(self, name):
        return self._tensors[name]

    def __contains__(self, name):
        return name in self._tensors

    def __len__(self):
        return len(self._tensors)

    def names(self):
        return sorted(self._tensors)

    def items(self):
        """İsim sırasına göre (deterministik)"""
        return [(name, self._tensors[name]) for name in self.names()]

    def shapes(self):
        return {name: tuple(tensor.shape) for name, tensor in self.items()}

    def count(self):
        return int(sum(tensor.data.size for _, tensor in self.items()))

    def snapshot(self):
        return {name: tensor.data.copy() for name, tensor in self.items()}

    def load(self, arrays, strict=True):
        """Dizileri yerinde yükle; şekiller değişemez"""
        for name, tensor in self.items():
            if name not in arrays:
                if strict:
                    raise NumericsError(f"checkpoint'te parametre eksik: {name}")
                continue
            value = np.asarray(arrays[name], dtype=np.float64)
            if value.shape != tensor.shape:
                raise NumericsError(f"{name}: şekil {value.shape} != {tensor.shape}")
            tensor.data = value.copy()
