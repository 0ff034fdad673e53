"""Lazy, exact vectors in spaces with one shift backbone plus finite tails.

A lifted space has the form  l2_+(E) (+) F_1 (+) ... (+) F_k: one forward-shift
fiber column of dimension ``fiber_dim`` graded over n >= 0, and finitely many
tail blocks.  Finitely supported vectors are stored block-sparse, so every
operator with one-grade propagation acts on them without truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatchError

__all__ = [
    "GradedVector",
    "LiftedSpaceShape",
    "embed_fiber",
    "embed_tail",
    "from_window",
    "inner_product",
    "shift_adjoint_apply",
    "shift_apply",
    "to_window",
    "window_dim",
]


@dataclass(frozen=True)
class LiftedSpaceShape:
    """Fiber dimension of the shift backbone plus the tail block dimensions."""

    fiber_dim: int
    tails: tuple[int, ...]

    def __post_init__(self):
        if self.fiber_dim < 0 or any(t < 0 for t in self.tails):
            raise ShapeMismatchError("dimensions must be nonnegative")
        object.__setattr__(self, "tails", tuple(int(t) for t in self.tails))

    @property
    def tail_total(self) -> int:
        return sum(self.tails)


def _as_block(x, dim: int) -> np.ndarray:
    b = np.asarray(x, dtype=np.complex128).reshape(-1)
    if b.shape[0] != dim:
        raise ShapeMismatchError(f"block length {b.shape[0]} != {dim}")
    return b


class GradedVector:
    """Finitely supported element of a lifted space; canonical form stores no
    zero fiber blocks."""

    __slots__ = ("shape", "fibers", "tails")

    def __init__(self, shape: LiftedSpaceShape, fibers=None, tails=None):
        self.shape = shape
        fb: dict[int, np.ndarray] = {}
        for grade, block in (fibers or {}).items():
            g = int(grade)
            if g < 0:
                raise ShapeMismatchError("grades are nonnegative")
            b = _as_block(block, shape.fiber_dim)
            if np.any(b):
                fb[g] = b
        self.fibers = fb
        if tails is None:
            self.tails = tuple(
                np.zeros(t, dtype=np.complex128) for t in shape.tails
            )
        else:
            if len(tails) != len(shape.tails):
                raise ShapeMismatchError("tail block count mismatch")
            self.tails = tuple(
                _as_block(b, t) for b, t in zip(tails, shape.tails)
            )

    @classmethod
    def zero(cls, shape: LiftedSpaceShape) -> "GradedVector":
        return cls(shape)

    def max_grade(self) -> int:
        return max(self.fibers) if self.fibers else -1

    def fiber(self, grade: int) -> np.ndarray:
        return self.fibers.get(grade, np.zeros(self.shape.fiber_dim, np.complex128))

    def norm(self) -> float:
        s = sum(float(np.vdot(b, b).real) for b in self.fibers.values())
        s += sum(float(np.vdot(t, t).real) for t in self.tails)
        return float(np.sqrt(s))

    def fiber_norm(self) -> float:
        s = sum(float(np.vdot(b, b).real) for b in self.fibers.values())
        return float(np.sqrt(s))

    def __add__(self, other: "GradedVector") -> "GradedVector":
        self._check(other)
        fibers = {g: b.copy() for g, b in self.fibers.items()}
        for g, b in other.fibers.items():
            fibers[g] = fibers.get(g, 0) + b
        tails = [a + b for a, b in zip(self.tails, other.tails)]
        return GradedVector(self.shape, fibers, tails)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "GradedVector":
        c = complex(scalar)
        fibers = {g: c * b for g, b in self.fibers.items()}
        tails = [c * t for t in self.tails]
        return GradedVector(self.shape, fibers, tails)

    def _check(self, other: "GradedVector"):
        if self.shape != other.shape:
            raise ShapeMismatchError("graded vectors live in different spaces")


def inner_product(u: GradedVector, v: GradedVector) -> complex:
    """Scalar product, conjugate-linear in the first argument."""
    u._check(v)
    acc = 0.0 + 0.0j
    for g, b in u.fibers.items():
        if g in v.fibers:
            acc += np.vdot(b, v.fibers[g])
    for a, b in zip(u.tails, v.tails):
        acc += np.vdot(a, b)
    return complex(acc)


def shift_apply(v: GradedVector) -> GradedVector:
    """Forward shift on the fiber column (grade n -> n+1); identity on tails."""
    if v.shape.fiber_dim == 0:
        raise ShapeMismatchError("shift needs a nontrivial fiber")
    fibers = {g + 1: b for g, b in v.fibers.items()}
    return GradedVector(v.shape, fibers, v.tails)


def shift_adjoint_apply(v: GradedVector) -> GradedVector:
    """Backward shift (grade n+1 -> n, grade 0 annihilated); identity on tails."""
    if v.shape.fiber_dim == 0:
        raise ShapeMismatchError("shift needs a nontrivial fiber")
    fibers = {g - 1: b for g, b in v.fibers.items() if g > 0}
    return GradedVector(v.shape, fibers, v.tails)


def embed_fiber(shape: LiftedSpaceShape, x, grade: int) -> GradedVector:
    """Place a fiber-sized vector at the requested grade."""
    return GradedVector(shape, {int(grade): _as_block(x, shape.fiber_dim)})

def embed_tail(shape: LiftedSpaceShape, index: int, x) -> GradedVector:
    """Place a vector into tail block ``index``."""
    tails = [np.zeros(t, dtype=np.complex128) for t in shape.tails]
    tails[index] = _as_block(x, shape.tails[index])
    return GradedVector(shape, {}, tails)


def window_dim(shape: LiftedSpaceShape, max_grade: int) -> int:
    """Dimension of the window subspace: grades 0..max_grade plus all tails."""
    return (max_grade + 1) * shape.fiber_dim + shape.tail_total


def to_window(v: GradedVector, max_grade: int, strict: bool = True) -> np.ndarray:
    """Coordinates of v on the window (grades 0..max_grade, then tails).

    With ``strict`` the vector must be supported inside the window, so the
    coordinates are exact; otherwise higher grades are dropped (projection).
    """
    if strict and v.max_grade() > max_grade:
        raise ShapeMismatchError(
            f"support up to grade {v.max_grade()} exceeds window {max_grade}"
        )
    d = v.shape.fiber_dim
    out = np.zeros(window_dim(v.shape, max_grade), dtype=np.complex128)
    for g, b in v.fibers.items():
        if g <= max_grade:
            out[g * d : (g + 1) * d] = b
    off = (max_grade + 1) * d
    for t in v.tails:
        out[off : off + t.shape[0]] = t
        off += t.shape[0]
    return out


def from_window(shape: LiftedSpaceShape, x, max_grade: int) -> GradedVector:
    """Inverse of :func:`to_window` on the window subspace."""
    arr = np.asarray(x, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != window_dim(shape, max_grade):
        raise ShapeMismatchError("window coordinate length mismatch")
    d = shape.fiber_dim
    fibers = {
        g: arr[g * d : (g + 1) * d] for g in range(max_grade + 1)
    }
    off = (max_grade + 1) * d
    tails = []
    for t in shape.tails:
        tails.append(arr[off : off + t])
        off += t
    return GradedVector(shape, fibers, tails)
