import threading
from collections import namedtuple

import numpy as np

from numerics.ops import OPS
from utils.exceptions import DetachedLoss, NonFiniteResult, NumericsError, ShapeMismatch

Record = namedtuple('Record', ['op_name', 'inputs', 'output', 'attrs'])

_local = threading.local()


def _tape_stack():
    if not hasattr(_local, 'stack'):
        _local.stack = []
    return _local.stack


def active_tape():
    stack = _tape_stack()
    return stack[-1] if stack else None


class Tensor:
    """64-bit yoğun dizi + gradyan bayrağı"""

    __slots__ = ('data', 'requires_grad', 'name')

    def __init__(self, data, requires_grad=False, name=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self):
        return float(self.data)

    def numpy(self):
        return self.data.copy()

    def __repr__(self):
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    def __add__(self, other):
        return primitive('add', [self, as_tensor(other)])

    def __sub__(self, other):
        return primitive('sub', [self, as_tensor(other)])

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return primitive('scale', [self], factor=float(other))
        return primitive('mul', [self, as_tensor(other)])

    def __matmul__(self, other):
        return primitive('matmul', [self, as_tensor(other)])


def as_tensor(value):
    return value if isinstance(value, Tensor) else Tensor(value)


class Tape:
    """Kaydedilen primitive uygulamalarının topolojik listesi (tek thread)"""

    def __init__(self):
        self.records = []
        self._output_ids = set()

    def __enter__(self):
        _tape_stack().append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        stack = _tape_stack()
        if stack and stack[-1] is self:
            stack.pop()
        return False

    def __len__(self):
        return len(self.records)

    def record(self, op_name, inputs, output, attrs):
        self.records.append(Record(op_name, tuple(inputs), output, attrs))
        self._output_ids.add(id(output))

    def contains(self, tensor):
        return id(tensor) in self._output_ids

    def clear(self):
        self.records = []
        self._output_ids = set()


def primitive(op_name, inputs, **attrs):
    """Primitive uygula; girdilerden biri gradyan istiyorsa aktif tape'e kaydet"""
    if op_name not in OPS:
        raise NumericsError(f"bilinmeyen primitive: {op_name}")
    forward_fn, _ = OPS[op_name]
    arrays = [t.data for t in inputs]
    try:
        out = forward_fn(arrays, **attrs)
    except (ValueError, IndexError) as e:
        raise ShapeMismatch(op_name, [a.shape for a in arrays]) from e
    if not np.all(np.isfinite(out)):
        raise NonFiniteResult(op_name)
    requires_grad = any(t.requires_grad for t in inputs)
    result = Tensor(out, requires_grad=requires_grad)
    tape = active_tape()
    if requires_grad and tape is not None:
        tape.record(op_name, inputs, result, attrs)
    return result


def backward(tape, loss, params):
    """Ters mod gradyanlar; params içindeki her isim için bir dizi döner"""
    if loss.data.size != 1:
        raise ShapeMismatch('backward', [loss.shape])
    if not tape.contains(loss):
        raise DetachedLoss("loss bu tape üzerinde kaydedilmemiş")

    grads = {id(loss): np.ones_like(loss.data)}
    for record in reversed(tape.records):
        grad = grads.get(id(record.output))
        if grad is None:
            continue
        _, backward_fn = OPS[record.op_name]
        input_grads = backward_fn(grad, [t.data for t in record.inputs], record.output.data, **record.attrs)
        for tensor, input_grad in zip(record.inputs, input_grads):
            if input_grad is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if key in grads:
                grads[key] = grads[key] + input_grad
            else:
                grads[key] = input_grad

    return {name: np.array(grads.get(id(tensor), np.zeros_like(tensor.data)), dtype=np.float64)
            for name, tensor in params.items()}


# --- ince sarmalayıcılar ---

def matmul(a, b):
    return primitive('matmul', [a, b])


def add(a, b):
    return primitive('add', [a, b])


def sub(a, b):
    return primitive('sub', [a, b])


def mul(a, b):
    return primitive('mul', [a, b])


def scale(a, factor):
    return primitive('scale', [a], factor=float(factor))


def tanh(a):
    return primitive('tanh', [a])


def sigmoid(a):
    return primitive('sigmoid', [a])


def softmax(a, axis=-1):
    return primitive('softmax', [a], axis=axis)


def conv2d(x, w, b, stride=1):
    return primitive('conv2d', [x, w, b], stride=stride)


def conv1d(x, w, b):
    return primitive('conv1d', [x, w, b])


def embedding_lookup(table, ids):
    return primitive('embedding_lookup', [table], ids=ids)


def maxout_pool2(a):
    return primitive('maxout_pool2', [a])


def concat(tensors, axis=0):
    return primitive('concat', list(tensors), axis=axis)


def stack(tensors, axis=0):
    return primitive('stack', list(tensors), axis=axis)


def reduce_sum(a, axis=None):
    return primitive('sum', [a], axis=axis)


def reshape(a, shape):
    return primitive('reshape', [a], shape=tuple(shape))


def transpose(a, axes=None):
    return primitive('transpose', [a], axes=None if axes is None else tuple(axes))


def index(a, i):
    return primitive('index', [a], index=i)


def masked_cross_entropy(logits, targets, mask):
    return primitive('masked_cross_entropy', [logits],
                     targets=np.asarray(targets, dtype=np.int64),
                     mask=np.asarray(mask, dtype=np.float64))
