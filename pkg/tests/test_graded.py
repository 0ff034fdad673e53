"""Shift backbone and finitely supported vector arithmetic."""

import numpy as np
import pytest

from liftlab.errors import ShapeMismatchError
from liftlab.graded import (
    GradedVector,
    LiftedSpaceShape,
    embed_fiber,
    embed_tail,
    from_window,
    inner_product,
    shift_adjoint_apply,
    shift_apply,
    to_window,
    window_dim,
)


def _rng(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _random_vector(rng, shape, max_grade=10):
    fibers = {}
    for g in rng.integers(0, max_grade + 1, size=4):
        fibers[int(g)] = rng.standard_normal(shape.fiber_dim) + 1j * rng.standard_normal(
            shape.fiber_dim
        )
    tails = [
        rng.standard_normal(t) + 1j * rng.standard_normal(t) for t in shape.tails
    ]
    return GradedVector(shape, fibers, tails)


SHAPE = LiftedSpaceShape(3, (2, 4))


def test_shift_moves_one_grade():
    v = embed_fiber(SHAPE, [1.0, 2.0, 3.0], 0)
    w = shift_apply(v)
    assert w.max_grade() == 1
    np.testing.assert_allclose(w.fiber(1), [1.0, 2.0, 3.0])
    assert not np.any(w.fiber(0))


def test_shift_adjoint_is_left_inverse():
    rng = _rng(0)
    for seed in range(50):
        v = _random_vector(_rng(seed), SHAPE)
        w = shift_adjoint_apply(shift_apply(v))
        assert (w - v).norm() <= 1e-15 * max(v.norm(), 1.0)


def test_shift_shift_adjoint_drops_grade_zero():
    for seed in range(50):
        v = _random_vector(_rng(100 + seed), SHAPE)
        w = shift_apply(shift_adjoint_apply(v))
        expected = v - GradedVector(SHAPE, {0: v.fiber(0)})
        assert (w - expected).norm() <= 1e-15 * max(v.norm(), 1.0)


def test_shift_is_fiber_isometry():
    for seed in range(100):
        v = _random_vector(_rng(200 + seed), SHAPE)
        w = shift_apply(v)
        assert abs(w.fiber_norm() - v.fiber_norm()) <= 1e-14 * max(v.norm(), 1.0)


def test_shift_adjoint_pairing():
    for seed in range(1000):
        rng = _rng(300 + seed)
        u = _random_vector(rng, SHAPE)
        v = _random_vector(rng, SHAPE)
        lhs = inner_product(shift_apply(u), v)
        rhs = inner_product(u, shift_adjoint_apply(v))
        # tails pass through on both sides, so the pairing is exact
        assert abs(lhs - rhs) <= 1e-12 * max(u.norm() * v.norm(), 1.0)


def test_inner_product_conventions():
    x = embed_fiber(SHAPE, [1.0, 0.0, 0.0], 0)
    y = embed_fiber(SHAPE, [1.0, 0.0, 0.0], 1)
    assert inner_product(x, y) == 0
    v = _random_vector(_rng(5), SHAPE)
    self_ip = inner_product(v, v)
    assert self_ip.imag == pytest.approx(0.0, abs=1e-14)
    assert self_ip.real >= 0
    # conjugate-linear in the first argument
    assert inner_product(2j * v, v) == pytest.approx(-2j * self_ip, rel=1e-12)


def test_embed_then_shift_matches_higher_embed():
    x = [1.0, 2.0, 3.0]
    v = embed_fiber(SHAPE, x, 0)
    for _ in range(4):
        v = shift_apply(v)
    w = embed_fiber(SHAPE, x, 4)
    assert (v - w).norm() == 0.0


def test_canonical_form_drops_zero_blocks():
    v = embed_fiber(SHAPE, [1.0, 0.0, 0.0], 2)
    w = v - v
    assert w.fibers == {}
    u = 0.0 * v
    assert u.fibers == {}
    s = v + (-1.0) * v + embed_tail(SHAPE, 0, [1.0, 0.0])
    assert s.fibers == {}
    assert np.any(s.tails[0])


def test_zero_fiber_shape_rejects_shift():
    flat = LiftedSpaceShape(0, (3,))
    v = embed_tail(flat, 0, [1.0, 2.0, 3.0])
    with pytest.raises(ShapeMismatchError):
        shift_apply(v)


def test_window_round_trip():
    v = _random_vector(_rng(17), SHAPE, max_grade=5)
    x = to_window(v, 5)
    assert x.shape[0] == window_dim(SHAPE, 5)
    w = from_window(SHAPE, x, 5)
    assert (v - w).norm() <= 1e-15 * v.norm()
    with pytest.raises(ShapeMismatchError):
        to_window(embed_fiber(SHAPE, [1, 0, 0], 7), 5)
    # non-strict mode projects
    p = to_window(embed_fiber(SHAPE, [1, 0, 0], 7), 5, strict=False)
    assert not np.any(p)
