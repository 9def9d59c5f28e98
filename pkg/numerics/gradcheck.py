import logging

import numpy as np

from numerics.tensor import Tape, backward

logger = logging.getLogger('gradcheck')


def grad_check(loss_fn, params, eps=1e-4, sample_size=200, seed=0):
    """Merkezi sonlu farklarla ters mod gradyanlarını karşılaştır.

    loss_fn parametresiz çağrılır ve skaler bir Tensor döndürür; params
    yerinde bozulur ve geri yüklenir. Büyük tensörlerde sabit tohumlu
    `sample_size` bileşenlik örnek kullanılır. Dönen değer en büyük
    |g_ad - g_fd| / max(1e-8, |g_ad| + |g_fd|) oranıdır.
    """
    with Tape() as tape:
        loss = loss_fn()
    analytic = backward(tape, loss, params)
    rng = np.random.default_rng(seed)

    worst = 0.0
    for name, tensor in params.items():
        size = tensor.data.size
        if size <= sample_size:
            indices = np.arange(size)
        else:
            indices = np.sort(rng.choice(size, size=sample_size, replace=False))
        g_ad = analytic[name].reshape(-1)
        param_worst = 0.0
        for i in indices:
            position = np.unravel_index(i, tensor.shape)
            original = tensor.data[position]
            tensor.data[position] = original + eps
            plus = loss_fn().item()
            tensor.data[position] = original - eps
            minus = loss_fn().item()
            tensor.data[position] = original
            g_fd = (plus - minus) / (2.0 * eps)
            error = abs(g_ad[i] - g_fd) / max(1e-8, abs(g_ad[i]) + abs(g_fd))
            param_worst = max(param_worst, error)
        logger.debug(f"{name}: {len(indices)} bileşen, en büyük göreli hata {param_worst:.3e}")
        worst = max(worst, param_worst)
    return worst
