"""Wire formats: exact round trips and malformed-input rejection."""

import numpy as np
import pytest

from liftlab import jsonio
from liftlab.errors import InputFormatError
from liftlab.graded import GradedVector, LiftedSpaceShape
from liftlab.liftings import (
    build_left_invertible_lifting,
    build_natural_lifting,
    build_quasi_isometric_lifting,
    build_quasicontraction_lifting,
    normalize_certificate,
)
from liftlab.operators import apply
from liftlab.sampler import gen_shifted_host, gen_strict_similarity
from liftlab.verify import swap_similarity_operator, verify_lifting_suite


def test_matrix_round_trip_exact():
    rng = np.random.Generator(np.random.Philox(0))
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    obj = jsonio.matrix_to_obj(m)
    back = jsonio.matrix_from_obj(obj)
    assert np.array_equal(m, back)
    assert jsonio.dumps(obj) == jsonio.dumps(jsonio.matrix_to_obj(back))


def test_matrix_rejects_nan_inf_and_shape_lies():
    with pytest.raises(InputFormatError):
        jsonio.matrix_from_obj({"rows": 1, "cols": 1, "data": [[float("nan"), 0.0]]})
    with pytest.raises(InputFormatError):
        jsonio.matrix_from_obj({"rows": 1, "cols": 1, "data": [[float("inf"), 0.0]]})
    with pytest.raises(InputFormatError):
        jsonio.matrix_from_obj({"rows": 2, "cols": 2, "data": [[0.0, 0.0]]})
    with pytest.raises(InputFormatError):
        jsonio.parse_matrix_text("not json")


def test_graded_vector_round_trip():
    shape = LiftedSpaceShape(2, (3,))
    v = GradedVector(
        shape,
        {0: [1.0 + 2j, 0.5], 4: [0.0, -1.5j]},
        [np.array([1.0, 0.0, 3.0 - 1j])],
    )
    obj = jsonio.graded_to_obj(v)
    back = jsonio.graded_from_obj(shape, obj)
    assert (v - back).norm() == 0.0
    assert jsonio.dumps(obj) == jsonio.dumps(jsonio.graded_to_obj(back))


def _operators_for_round_trip():
    t, cert = gen_strict_similarity(3, 0.6, seed=8)
    yield build_natural_lifting(t, cert.matrix)
    yield build_quasicontraction_lifting(np.array([[0.0, 2.0], [0.0, 0.0]]))
    yield build_left_invertible_lifting(np.array([[1.0, 1.0], [0.0, 0.0]]))
    host = gen_shifted_host(1.0, 2, seed=9)
    yield build_left_invertible_lifting(host)
    ts = swap_similarity_operator(1)
    a = normalize_certificate(ts, np.eye(2) + ts.conj().T @ ts)
    yield build_left_invertible_lifting(build_quasi_isometric_lifting(ts, a))


def test_operator_round_trips_bit_identically():
    for op in _operators_for_round_trip():
        obj = jsonio.operator_to_obj(op)
        text = jsonio.dumps(obj)
        back = jsonio.operator_from_obj(obj)
        assert jsonio.dumps(jsonio.operator_to_obj(back)) == text


def test_operator_round_trip_preserves_action_and_verdicts():
    for op in _operators_for_round_trip():
        back = jsonio.operator_from_obj(jsonio.operator_to_obj(op))
        v = GradedVector(
            op.shape,
            {0: np.ones(op.shape.fiber_dim)} if op.shape.fiber_dim else {},
            [np.ones(t) for t in op.shape.tails],
        )
        assert (apply(op, v) - apply(back, v)).norm() <= 1e-15 * max(v.norm(), 1.0)
        r1 = verify_lifting_suite(op, probes=6, probe_grade=4, seed=3)
        r2 = verify_lifting_suite(back, probes=6, probe_grade=4, seed=3)
        assert r1.to_obj() == r2.to_obj()


def test_operator_rejects_malformed():
    with pytest.raises(InputFormatError):
        jsonio.operator_from_obj({"format": "nope"})
    with pytest.raises(InputFormatError):
        jsonio.operator_from_obj({"format": "lifting-operator/1", "kind": "NATURAL_21"})
