"""Primitive katalogu: her op bir (forward, backward) çifti.

forward(arrays, **attrs) -> ndarray
backward(grad, arrays, out, **attrs) -> girdi başına gradyan listesi (None = türevsiz)
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _unbroadcast(grad, shape):
    """Broadcast edilmiş gradyanı girdinin şekline indir"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# --- element-wise ---

def _add_forward(arrays):
    a, b = arrays
    return a + b


def _add_backward(grad, arrays, out):
    a, b = arrays
    return [_unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)]


def _sub_forward(arrays):
    a, b = arrays
    return a - b


def _sub_backward(grad, arrays, out):
    a, b = arrays
    return [_unbroadcast(grad, a.shape), _unbroadcast(-grad, b.shape)]


def _mul_forward(arrays):
    a, b = arrays
    return a * b


def _mul_backward(grad, arrays, out):
    a, b = arrays
    return [_unbroadcast(grad * b, a.shape), _unbroadcast(grad * a, b.shape)]


def _scale_forward(arrays, factor):
    return arrays[0] * factor


def _scale_backward(grad, arrays, out, factor):
    return [grad * factor]


def _tanh_forward(arrays):
    return np.tanh(arrays[0])


def _tanh_backward(grad, arrays, out):
    return [grad * (1.0 - out * out)]


def _sigmoid_forward(arrays):
    # 0.5 * (1 + tanh(x/2)) taşma üretmez
    return 0.5 * (1.0 + np.tanh(0.5 * arrays[0]))


def _sigmoid_backward(grad, arrays, out):
    return [grad * out * (1.0 - out)]


# --- linear algebra ---

def _matmul_forward(arrays):
    a, b = arrays
    if a.ndim not in (1, 2) or b.ndim not in (1, 2):
        raise ValueError("matmul yalnızca 1-D/2-D girdileri destekler")
    return np.matmul(a, b)


def _matmul_backward(grad, arrays, out):
    a, b = arrays
    a2 = a if a.ndim == 2 else a[None, :]
    b2 = b if b.ndim == 2 else b[:, None]
    g2 = np.reshape(grad, (a2.shape[0], b2.shape[1]))
    grad_a = (g2 @ b2.T).reshape(a.shape)
    grad_b = (a2.T @ g2).reshape(b.shape)
    return [grad_a, grad_b]


def _softmax_forward(arrays, axis=-1):
    x = arrays[0]
    shifted = x - np.max(x, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


def _softmax_backward(grad, arrays, out, axis=-1):
    return [out * (grad - np.sum(grad * out, axis=axis, keepdims=True))]


# --- convolution (same padding) ---

def _conv2d_forward(arrays, stride=1):
    x, w, b = arrays
    out_channels, in_channels, kh, kw = w.shape
    if x.ndim != 3 or x.shape[0] != in_channels or kh != kw or kh % 2 == 0 or b.shape != (out_channels,):
        raise ValueError("conv2d şekilleri uyumsuz")
    pad = kh // 2
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad)))
    windows = sliding_window_view(xp, (kh, kw), axis=(1, 2))[:, ::stride, ::stride]
    out = np.tensordot(windows, w, axes=([0, 3, 4], [1, 2, 3]))
    return np.transpose(out, (2, 0, 1)) + b[:, None, None]


def _conv2d_backward(grad, arrays, out, stride=1):
    x, w, b = arrays
    k = w.shape[-1]
    pad = k // 2
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad)))
    windows = sliding_window_view(xp, (k, k), axis=(1, 2))[:, ::stride, ::stride]
    grad_w = np.tensordot(grad, windows, axes=([1, 2], [1, 2]))
    grad_b = grad.sum(axis=(1, 2))
    grad_windows = np.transpose(np.tensordot(grad, w, axes=([0], [0])), (2, 0, 1, 3, 4))
    grad_xp = np.zeros_like(xp)
    out_h, out_w = grad.shape[1:]
    for i in range(k):
        for j in range(k):
            grad_xp[:, i:i + stride * (out_h - 1) + 1:stride,
                    j:j + stride * (out_w - 1) + 1:stride] += grad_windows[:, :, :, i, j]
    grad_x = grad_xp[:, pad:pad + x.shape[1], pad:pad + x.shape[2]]
    return [grad_x, grad_w, grad_b]


def _conv1d_forward(arrays):
    x, w, b = arrays
    out_channels, in_channels, k = w.shape
    if x.ndim != 2 or x.shape[0] != in_channels or k % 2 == 0 or b.shape != (out_channels,):
        raise ValueError("conv1d şekilleri uyumsuz")
    pad = k // 2
    xp = np.pad(x, ((0, 0), (pad, pad)))
    windows = sliding_window_view(xp, k, axis=1)
    return np.tensordot(windows, w, axes=([0, 2], [1, 2])).T + b[:, None]


def _conv1d_backward(grad, arrays, out):
    x, w, b = arrays
    k = w.shape[-1]
    pad = k // 2
    xp = np.pad(x, ((0, 0), (pad, pad)))
    windows = sliding_window_view(xp, k, axis=1)
    grad_w = np.tensordot(grad, windows, axes=([1], [1]))
    grad_b = grad.sum(axis=1)
    grad_windows = np.transpose(np.tensordot(grad, w, axes=([0], [0])), (1, 0, 2))
    grad_xp = np.zeros_like(xp)
    length = x.shape[1]
    for i in range(k):
        grad_xp[:, i:i + length] += grad_windows[:, :, i]
    return [grad_xp[:, pad:pad + length], grad_w, grad_b]


# --- lookup / pooling / shape ---

def _embedding_forward(arrays, ids):
    table = arrays[0]
    ids = np.asarray(ids, dtype=np.int64)
    if np.any(ids < 0) or np.any(ids >= table.shape[0]):
        raise IndexError("embedding id aralık dışında")
    return table[ids]


def _embedding_backward(grad, arrays, out, ids):
    grad_table = np.zeros_like(arrays[0])
    np.add.at(grad_table, np.asarray(ids, dtype=np.int64), grad)
    return [grad_table]


def _maxout_forward(arrays):
    x = arrays[0]
    if x.shape[-1] % 2 != 0:
        raise ValueError("maxout_pool2 çift boyut gerektirir")
    return x.reshape(x.shape[:-1] + (x.shape[-1] // 2, 2)).max(axis=-1)


def _maxout_backward(grad, arrays, out):
    x = arrays[0]
    pairs = x.reshape(x.shape[:-1] + (x.shape[-1] // 2, 2))
    winner = np.argmax(pairs, axis=-1)
    mask = np.stack([winner == 0, winner == 1], axis=-1)
    return [(mask * grad[..., None]).reshape(x.shape)]


def _concat_forward(arrays, axis=0):
    return np.concatenate(arrays, axis=axis)


def _concat_backward(grad, arrays, out, axis=0):
    bounds = np.cumsum([a.shape[axis] for a in arrays])[:-1]
    return list(np.split(grad, bounds, axis=axis))


def _stack_forward(arrays, axis=0):
    return np.stack(arrays, axis=axis)


def _stack_backward(grad, arrays, out, axis=0):
    return [np.take(grad, i, axis=axis) for i in range(len(arrays))]


def _sum_forward(arrays, axis=None):
    return np.asarray(np.sum(arrays[0], axis=axis))


def _sum_backward(grad, arrays, out, axis=None):
    x = arrays[0]
    if axis is not None:
        grad = np.expand_dims(grad, axis)
    return [np.broadcast_to(grad, x.shape).copy()]


def _reshape_forward(arrays, shape):
    return arrays[0].reshape(shape)


def _reshape_backward(grad, arrays, out, shape):
    return [grad.reshape(arrays[0].shape)]


def _transpose_forward(arrays, axes=None):
    return np.transpose(arrays[0], axes)


def _transpose_backward(grad, arrays, out, axes=None):
    inverse = None if axes is None else np.argsort(axes)
    return [np.transpose(grad, inverse)]


def _index_forward(arrays, index):
    return arrays[0][index]


def _index_backward(grad, arrays, out, index):
    full = np.zeros_like(arrays[0])
    full[index] = grad
    return [full]


# --- loss ---

def _masked_ce_forward(arrays, targets, mask):
    logits = arrays[0]
    targets = np.asarray(targets, dtype=np.int64)
    mask = np.asarray(mask, dtype=np.float64)
    if logits.ndim != 2 or targets.shape != (logits.shape[0],) or mask.shape != targets.shape:
        raise ValueError("masked_cross_entropy şekilleri uyumsuz")
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_probs = shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))
    picked = log_probs[np.arange(len(targets)), targets]
    denom = max(float(mask.sum()), 1.0)
    return np.asarray(-np.sum(mask * picked) / denom)


def _masked_ce_backward(grad, arrays, out, targets, mask):
    logits = arrays[0]
    targets = np.asarray(targets, dtype=np.int64)
    mask = np.asarray(mask, dtype=np.float64)
    probs = _softmax_forward([logits], axis=1)
    probs[np.arange(len(targets)), targets] -= 1.0
    denom = max(float(mask.sum()), 1.0)
    return [grad * probs * mask[:, None] / denom]


OPS = {
    'add': (_add_forward, _add_backward),
    'sub': (_sub_forward, _sub_backward),
    'mul': (_mul_forward, _mul_backward),
    'scale': (_scale_forward, _scale_backward),
    'tanh': (_tanh_forward, _tanh_backward),
    'sigmoid': (_sigmoid_forward, _sigmoid_backward),
    'matmul': (_matmul_forward, _matmul_backward),
    'softmax': (_softmax_forward, _softmax_backward),
    'conv2d': (_conv2d_forward, _conv2d_backward),
    'conv1d': (_conv1d_forward, _conv1d_backward),
    'embedding_lookup': (_embedding_forward, _embedding_backward),
    'maxout_pool2': (_maxout_forward, _maxout_backward),
    'concat': (_concat_forward, _concat_backward),
    'stack': (_stack_forward, _stack_backward),
    'sum': (_sum_forward, _sum_backward),
    'reshape': (_reshape_forward, _reshape_backward),
    'transpose': (_transpose_forward, _transpose_backward),
    'index': (_index_forward, _index_backward),
    'masked_cross_entropy': (_masked_ce_forward, _masked_ce_backward),
}
