import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from numerics import tensor as T
from numerics.checkpoint import load_checkpoint, round_to_storage, save_checkpoint
from numerics.gradcheck import grad_check
from numerics.parameters import ParameterSet
from numerics.tensor import Tape, Tensor, backward
from utils.exceptions import (CheckpointCorrupt, DetachedLoss, NonFiniteResult, NumericsError,
                              ShapeMismatch)


def test_softmax_uniform():
    out = T.softmax(Tensor([0.0, 0.0, 0.0]))
    assert_allclose(out.data, [1 / 3, 1 / 3, 1 / 3])


def test_softmax_large_inputs_stay_finite():
    out = T.softmax(Tensor([1000.0, 0.0]))
    assert_allclose(out.data, [1.0, 0.0], atol=1e-12)


def test_maxout_pairs():
    assert_array_equal(T.maxout_pool2(Tensor([1.0, 5.0, 2.0, 2.0])).data, [5.0, 2.0])


def test_cross_entropy_uniform_is_log_k():
    loss = T.masked_cross_entropy(Tensor(np.zeros((3, 4))), [0, 1, 2], [1, 1, 1])
    assert loss.item() == pytest.approx(np.log(4))


def test_cross_entropy_mask_ignores_rows():
    logits = Tensor([[0.0, 0.0], [50.0, -50.0]])
    loss = T.masked_cross_entropy(logits, [0, 1], [1, 0])
    assert loss.item() == pytest.approx(np.log(2))


def test_sum_gradient_is_ones():
    params = ParameterSet({'w': np.array([1.0, -2.0, 3.0])})
    with Tape() as tape:
        loss = T.reduce_sum(params['w'])
    grads = backward(tape, loss, params)
    assert_array_equal(grads['w'], np.ones(3))


def test_square_sum_gradient():
    w = np.array([[1.0, -2.0], [0.5, 3.0]])
    params = ParameterSet({'w': w})
    with Tape() as tape:
        loss = T.reduce_sum(params['w'] * params['w'])
    assert_allclose(backward(tape, loss, params)['w'], 2 * w)


def test_unused_parameter_gets_zero_gradient():
    params = ParameterSet({'a': np.ones(2), 'b': np.ones(3)})
    with Tape() as tape:
        loss = T.reduce_sum(params['a'])
    assert_array_equal(backward(tape, loss, params)['b'], np.zeros(3))


def test_detached_loss():
    params = ParameterSet({'w': np.ones(2)})
    loss = T.reduce_sum(params['w'])
    with Tape() as tape:
        pass
    with pytest.raises(DetachedLoss):
        backward(tape, loss, params)


def test_non_scalar_loss():
    params = ParameterSet({'w': np.ones(2)})
    with Tape() as tape:
        out = params['w'] * 2.0
    with pytest.raises(ShapeMismatch):
        backward(tape, out, params)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch) as info:
        T.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
    assert info.value.op_name == 'matmul'


def test_non_finite_result():
    with pytest.raises(NonFiniteResult):
        Tensor([np.inf]) + Tensor([1.0])


def test_constants_are_not_recorded():
    with Tape() as tape:
        T.tanh(Tensor([1.0, 2.0]))
    assert len(tape) == 0


def test_conv_shapes():
    x = Tensor(np.ones((1, 8, 10)))
    out = T.conv2d(x, Tensor(np.ones((3, 1, 3, 3))), Tensor(np.zeros(3)), stride=2)
    assert out.shape == (3, 4, 5)
    seq = T.conv1d(Tensor(np.ones((1, 6))), Tensor(np.ones((2, 1, 3))), Tensor(np.zeros(2)))
    assert seq.shape == (2, 6)
    # sıfır dolgu: kenarlarda 2 komşu
    assert_array_equal(seq.data[0], [2, 3, 3, 3, 3, 2])


def _weighted(out, seed=3):
    """Rastgele ağırlıklı toplam: skaler loss, O(1) gradyan"""
    weights = np.random.default_rng(seed).normal(size=out.shape)
    return T.reduce_sum(out * Tensor(weights))


PRIMITIVE_CASES = {
    'add': ({'a': (2, 3), 'b': (3,)}, lambda p: p['a'] + p['b']),
    'sub': ({'a': (2, 3), 'b': (2, 3)}, lambda p: p['a'] - p['b']),
    'mul': ({'a': (2, 3), 'b': (2, 3)}, lambda p: p['a'] * p['b']),
    'scale': ({'a': (4,)}, lambda p: p['a'] * 2.5),
    'tanh': ({'a': (5,)}, lambda p: T.tanh(p['a'])),
    'sigmoid': ({'a': (5,)}, lambda p: T.sigmoid(p['a'])),
    'matmul': ({'a': (2, 3), 'b': (3, 4)}, lambda p: T.matmul(p['a'], p['b'])),
    'matvec': ({'a': (3,), 'b': (3, 4)}, lambda p: T.matmul(p['a'], p['b'])),
    'softmax': ({'a': (2, 4)}, lambda p: T.softmax(p['a'], axis=1)),
    'conv2d': ({'x': (2, 5, 6), 'w': (3, 2, 3, 3), 'b': (3,)},
               lambda p: T.conv2d(p['x'], p['w'], p['b'], stride=2)),
    'conv1d': ({'x': (2, 7), 'w': (3, 2, 5), 'b': (3,)}, lambda p: T.conv1d(p['x'], p['w'], p['b'])),
    'embedding_lookup': ({'E': (5, 3)}, lambda p: T.embedding_lookup(p['E'], [1, 4, 1])),
    'concat': ({'a': (2, 3), 'b': (1, 3)}, lambda p: T.concat([p['a'], p['b']], axis=0)),
    'stack': ({'a': (3,), 'b': (3,)}, lambda p: T.stack([p['a'], p['b']], axis=1)),
    'sum': ({'a': (3, 4)}, lambda p: T.reduce_sum(p['a'], axis=0)),
    'reshape': ({'a': (3, 4)}, lambda p: T.reshape(p['a'], (2, 6))),
    'transpose': ({'a': (2, 3, 4)}, lambda p: T.transpose(p['a'], (2, 0, 1))),
    'index': ({'a': (4, 3)}, lambda p: T.index(p['a'], 2)),
    'masked_cross_entropy': ({'a': (3, 5)}, lambda p: T.masked_cross_entropy(p['a'], [0, 4, 2], [1, 1, 0])),
}


@pytest.mark.parametrize("case", sorted(PRIMITIVE_CASES))
def test_primitive_gradients(case):
    shapes, fn = PRIMITIVE_CASES[case]
    rng = np.random.default_rng(0)
    params = ParameterSet({name: rng.normal(size=shape) for name, shape in shapes.items()})
    assert grad_check(lambda: _weighted(fn(params)), params) <= 1e-6


def test_grad_check_maxout_away_from_ties():
    params = ParameterSet({'a': np.array([[1.0, 3.0, -2.0, 0.5], [0.0, -1.0, 4.0, 2.0]])})
    assert grad_check(lambda: _weighted(T.maxout_pool2(params['a'])), params) <= 1e-6


def test_grad_check_quadratic_is_exact():
    params = ParameterSet({'w': np.array([0.5, -1.5, 2.0])})
    target = Tensor([1.0, 1.0, 1.0])

    def loss_fn():
        diff = params['w'] - target
        return T.reduce_sum(diff * diff)

    assert grad_check(loss_fn, params) <= 1e-8


def test_grad_check_composite():
    rng = np.random.default_rng(0)
    params = ParameterSet({
        'x': rng.normal(size=(2, 6, 6)),
        'w': rng.normal(size=(3, 2, 3, 3)) * 0.3,
        'b': rng.normal(size=3),
        'v': rng.normal(size=(2, 1, 3)) * 0.3,
        'c': rng.normal(size=2),
        'E': rng.normal(size=(5, 4)),
        'M': rng.normal(size=(4, 4)),
    })

    def loss_fn():
        h = T.tanh(T.conv2d(params['x'], params['w'], params['b'], stride=2))
        flat = T.reshape(h, (3, 9))
        seq = T.conv1d(T.index(flat, slice(0, 1)), params['v'], params['c'])
        emb = T.embedding_lookup(params['E'], [1, 3, 3])
        attn = T.softmax(T.reduce_sum(T.sigmoid(T.matmul(emb, params['M'])), axis=1))
        joined = T.concat([T.reshape(seq, (18,)), attn])
        scores = T.stack([T.reduce_sum(joined), T.reduce_sum(T.tanh(joined))])
        return T.masked_cross_entropy(T.reshape(scores, (1, 2)), [1], [1])

    assert grad_check(loss_fn, params, sample_size=20) <= 1e-3


def test_parameter_registry():
    params = ParameterSet()
    rng = np.random.default_rng(1)
    w = params.add_weight('layer.W', (4, 3), fan_in=4, rng=rng)
    params.add_bias('layer.b', (3,))
    assert np.all(np.abs(w.data) <= 0.5)
    assert_array_equal(w.data, round_to_storage(w.data))
    assert params.names() == ['layer.W', 'layer.b']
    assert params.count() == 15
    with pytest.raises(NumericsError):
        params.add_bias('layer.b', (3,))
    with pytest.raises(NumericsError):
        params.load({'layer.W': np.zeros((3, 4)), 'layer.b': np.zeros(3)})


def test_checkpoint_roundtrip(tmp_path):
    arrays = {'b': np.array([1.5, -0.25]), 'a': np.arange(6, dtype=np.float64).reshape(2, 3),
              'scalar': np.array(2.0)}
    path = tmp_path / "model.mtck"
    save_checkpoint(path, arrays)
    loaded = load_checkpoint(path)
    assert list(loaded) == ['b', 'a', 'scalar']
    for name, value in arrays.items():
        assert_array_equal(loaded[name], value)
        assert loaded[name].shape == value.shape


def test_checkpoint_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.mtck"
    path.write_bytes(b"NOPE\x01\x00")
    with pytest.raises(CheckpointCorrupt):
        load_checkpoint(path)


def test_checkpoint_rejects_truncated_payload(tmp_path):
    path = tmp_path / "model.mtck"
    save_checkpoint(path, {'w': np.ones((4, 4))})
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(CheckpointCorrupt):
        load_checkpoint(path)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backward_is_linear(seed):
    rng = np.random.default_rng(seed)
    params = ParameterSet({'w': rng.normal(size=(3, 4)), 'v': rng.normal(size=4)})
    x = Tensor(rng.normal(size=(2, 3)))
    a, b = rng.normal(size=2)

    def first():
        return T.reduce_sum(T.tanh(x @ params['w']) @ params['v'])

    def second():
        return T.reduce_sum(T.sigmoid(params['w']) * params['w']) + T.reduce_sum(params['v'] * params['v'])

    grads = []
    for loss_fn in (first, second, lambda: T.scale(first(), a) + T.scale(second(), b)):
        with Tape() as tape:
            loss = loss_fn()
        grads.append(backward(tape, loss, params))
    for name in ('w', 'v'):
        assert_allclose(grads[2][name], a * grads[0][name] + b * grads[1][name], rtol=0, atol=1e-12)
