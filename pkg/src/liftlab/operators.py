"""Structured operators on lifted spaces.

Every constructed lifting (and the shifted-host family itself) is a
shift-coupled operator: a forward shift on the fiber column whose first step
may carry a weight block, plus finite couplings from the tails and the grade-0
fiber into grade 0, plus a finite map on the tails.  Such operators raise the
maximum grade of a finitely supported vector by at most one, so applications,
adjoints, and window matrices are all exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatchError
from .graded import (
    GradedVector,
    LiftedSpaceShape,
    from_window,
    to_window,
    window_dim,
)
from . import linalg

__all__ = [
    "KINDS",
    "BaseSpace",
    "GramBlocks",
    "LiftingOperator",
    "adjoint_apply",
    "apply",
    "gram_blocks",
    "minimal_restriction",
    "window_matrix",
]

KINDS = ("NATURAL_21", "QUASICONTRACTION_25", "LEFTINV_31", "SHIFTED_HOST_37")


@dataclass(frozen=True)
class BaseSpace:
    """Embedding of the lifted operator's base space H into the lifted space.

    ``kind`` is "matrix" (H is a finite block, living in the tail blocks of
    ``tail_indices``) or "host" (H is itself a shift-backed space occupying
    the fiber channels [channel[0], channel[1]) plus the tails).
    """

    kind: str
    matrix: np.ndarray | None = None
    host_a: float | None = None
    host_t0: np.ndarray | None = None
    channel: tuple[int, int] | None = None
    tail_indices: tuple[int, ...] = ()

    def project(self, v: GradedVector) -> GradedVector:
        """Orthogonal projection of v onto the embedded copy of H."""
        shape = v.shape
        fibers = {}
        if self.channel is not None:
            lo, hi = self.channel
            for g, b in v.fibers.items():
                nb = np.zeros(shape.fiber_dim, dtype=np.complex128)
                nb[lo:hi] = b[lo:hi]
                fibers[g] = nb
        tails = [
            v.tails[i] if i in self.tail_indices
            else np.zeros(shape.tails[i], dtype=np.complex128)
            for i in range(len(shape.tails))
        ]
        return GradedVector(shape, fibers, tails)

    def off_part(self, v: GradedVector) -> GradedVector:
        return v - self.project(v)

    def basis(self, shape: LiftedSpaceShape, max_grade: int) -> list[GradedVector]:
        """Orthonormal basis of the embedded H restricted to the window."""
        out = []
        if self.channel is not None:
            lo, hi = self.channel
            for g in range(max_grade + 1):
                for c in range(lo, hi):
                    b = np.zeros(shape.fiber_dim, dtype=np.complex128)
                    b[c] = 1.0
                    out.append(GradedVector(shape, {g: b}))
        for i in self.tail_indices:
            for c in range(shape.tails[i]):
                tails = [np.zeros(t, dtype=np.complex128) for t in shape.tails]
                tails[i][c] = 1.0
                out.append(GradedVector(shape, {}, tails))
        return out

    def apply_base(self, v: GradedVector) -> GradedVector:
        """Action of the base operator T on an H-supported vector, embedded."""
        shape = v.shape
        if self.kind == "matrix":
            idx = self.tail_indices[0]
            tails = [np.zeros(t, dtype=np.complex128) for t in shape.tails]
            tails[idx] = self.matrix @ v.tails[idx]
            return GradedVector(shape, {}, tails)
        lo, hi = self.channel
        idx = self.tail_indices[0]
        fibers: dict[int, np.ndarray] = {}
        for g, b in v.fibers.items():
            nb = np.zeros(shape.fiber_dim, dtype=np.complex128)
            nb[lo:hi] = (self.host_a if g == 0 else 1.0) * b[lo:hi]
            if np.any(nb):
                fibers[g + 1] = fibers.get(g + 1, 0) + nb
        t0_part = self.host_t0 @ v.tails[idx]
        g0 = np.zeros(shape.fiber_dim, dtype=np.complex128)
        g0[lo:hi] = t0_part
        if np.any(g0):
            fibers[0] = fibers.get(0, 0) + g0
        tails = [np.zeros(t, dtype=np.complex128) for t in shape.tails]
        return GradedVector(shape, fibers, tails)

    def shifted(self, offset: int) -> "BaseSpace":
        """Same base space after the fiber column gained ``offset`` new channels
        in front (tail indices are unchanged)."""
        channel = None
        if self.channel is not None:
            channel = (self.channel[0] + offset, self.channel[1] + offset)
        return BaseSpace(
            self.kind, self.matrix, self.host_a, self.host_t0,
            channel, self.tail_indices,
        )


@dataclass
class LiftingOperator:
    """Shift backbone plus finite coupling blocks.

    Action on (fibers, tails): grade n goes to n+1 (through ``f0`` when n = 0),
    grade 0 additionally receives ``c00`` applied to the old grade-0 block and
    ``ct0`` applied to the concatenated tails, and the tails map through ``mt``.
    """

    kind: str
    shape: LiftedSpaceShape
    f0: np.ndarray
    c00: np.ndarray
    ct0: np.ndarray
    mt: np.ndarray
    blocks: dict = field(default_factory=dict)
    base: BaseSpace | None = None
    parent: "LiftingOperator | None" = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.shape.fiber_dim
        t = self.shape.tail_total
        if self.f0.shape != (d, d) or self.c00.shape != (d, d):
            raise ShapeMismatchError("fiber blocks must be fiber_dim square")
        if self.ct0.shape != (d, t) or self.mt.shape != (t, t):
            raise ShapeMismatchError("tail blocks inconsistent with shape")

    # -- tail block helpers -------------------------------------------------
    def _tail_concat(self, v: GradedVector) -> np.ndarray:
        if not v.tails:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate(v.tails)

    def _tail_split(self, x: np.ndarray) -> list[np.ndarray]:
        out, off = [], 0
        for t in self.shape.tails:
            out.append(x[off : off + t])
            off += t
        return out

    def claims(self) -> tuple[str, ...]:
        return tuple(self.meta.get("claims", ()))


def apply(op: LiftingOperator, v: GradedVector) -> GradedVector:
    """Exact application on a finitely supported vector."""
    if v.shape != op.shape:
        raise ShapeMismatchError("vector does not live in the operator's space")
    d = op.shape.fiber_dim
    fibers: dict[int, np.ndarray] = {}
    for g, b in v.fibers.items():
        fibers[g + 1] = (op.f0 @ b) if g == 0 else b.copy()
    g0 = np.zeros(d, dtype=np.complex128)
    if 0 in v.fibers:
        g0 = g0 + op.c00 @ v.fibers[0]
    tails = op._tail_concat(v)
    if tails.size or d == 0:
        g0 = g0 + op.ct0 @ tails
    if d > 0 and np.any(g0):
        fibers[0] = fibers.get(0, np.zeros(d, np.complex128)) + g0
    new_tails = op._tail_split(op.mt @ tails)
    return GradedVector(op.shape, fibers, new_tails)


def adjoint_apply(op: LiftingOperator, v: GradedVector) -> GradedVector:
    """Exact application of the adjoint (true adjoint for the graded product)."""
    if v.shape != op.shape:
        raise ShapeMismatchError("vector does not live in the operator's space")
    d = op.shape.fiber_dim
    fibers: dict[int, np.ndarray] = {}
    for g, b in v.fibers.items():
        if g >= 1:
            fibers[g - 1] = (op.f0.conj().T @ b) if g == 1 else b.copy()
    v0 = v.fibers.get(0)
    if v0 is not None and d > 0:
        extra = op.c00.conj().T @ v0
        if np.any(extra):
            fibers[0] = fibers.get(0, np.zeros(d, np.complex128)) + extra
    tails = op.mt.conj().T @ op._tail_concat(v)
    if v0 is not None:
        tails = tails + op.ct0.conj().T @ v0
    return GradedVector(op.shape, fibers, op._tail_split(tails))


def window_matrix(op: LiftingOperator, max_grade: int) -> np.ndarray:
    """Exact matrix of the operator from window(max_grade) into window(max_grade+1)."""
    cols = []
    n_in = window_dim(op.shape, max_grade)
    eye = np.eye(n_in, dtype=np.complex128)
    for j in range(n_in):
        e = from_window(op.shape, eye[:, j], max_grade)
        cols.append(to_window(apply(op, e), max_grade + 1))
    if not cols:
        return np.zeros((window_dim(op.shape, max_grade + 1), 0), np.complex128)
    return np.column_stack(cols)


def embed_window(op_shape: LiftedSpaceShape, x: np.ndarray, g_from: int, g_to: int) -> np.ndarray:
    """Zero-pad window coordinates from window(g_from) into window(g_to)."""
    if g_to < g_from:
        raise ShapeMismatchError("target window smaller than source")
    if x.ndim == 1:
        v = from_window(op_shape, x, g_from)
        return to_window(v, g_to)
    return np.column_stack(
        [to_window(from_window(op_shape, x[:, j], g_from), g_to) for j in range(x.shape[1])]
    ) if x.shape[1] else np.zeros((window_dim(op_shape, g_to), 0), np.complex128)


@dataclass(frozen=True)
class GramBlocks:
    """Finite core of S*S on (grade-0 fiber, tails); identity elsewhere.

    ``labels`` names the core coordinate ranges; the assembled minimum
    eigenvalue is the left-invertibility margin of S.
    """

    labels: tuple[tuple[str, int], ...]
    core: np.ndarray
    min_eigenvalue: float
    identity_background: bool

    def block(self, name: str) -> np.ndarray:
        off = 0
        for label, dim in self.labels:
            if label == name:
                return self.core[off : off + dim, off : off + dim]
            off += dim
        raise KeyError(name)


def gram_core_matrix(op: LiftingOperator) -> np.ndarray:
    fh = op.f0.conj().T @ op.f0 + op.c00.conj().T @ op.c00
    cross = op.c00.conj().T @ op.ct0
    tt = op.mt.conj().T @ op.mt + op.ct0.conj().T @ op.ct0
    core = np.block([[fh, cross], [cross.conj().T, tt]])
    return 0.5 * (core + core.conj().T)


def gram_blocks(op: LiftingOperator) -> GramBlocks:
    """Closed-form diagonal core of S*S plus the left-invertibility margin."""
    core = gram_core_matrix(op)
    labels = [("fiber0", op.shape.fiber_dim)]
    tail_labels = op.meta.get("tail_labels") or [
        f"tail{i}" for i in range(len(op.shape.tails))
    ]
    labels.extend(zip(tail_labels, op.shape.tails))
    if core.shape[0]:
        w, _ = linalg.hermitian_eig(core, symmetrize=True)
        margin = float(w[0])
    else:
        margin = 1.0
    background = op.shape.fiber_dim > 0
    if background:
        margin = min(margin, 1.0)
    return GramBlocks(tuple(labels), core, margin, background)


def minimal_restriction(
    op: LiftingOperator, max_grade: int, tol: float = 1e-10
) -> tuple[np.ndarray, bool]:
    """Window basis of span{S^n H} and whether it fills the whole window.

    Images are projected onto grades <= max_grade; the span of projections
    equals the projection of the span, so the dimension comparison is exact.
    """
    if max_grade < 1:
        raise ValueError("max_grade must be >= 1")
    if op.base is None:
        raise ShapeMismatchError("operator has no designated base space")
    wd = window_dim(op.shape, max_grade)
    basis_cols: list[np.ndarray] = []

    def absorb(x: np.ndarray):
        r = x.copy()
        for col in basis_cols:
            r -= np.vdot(col, r) * col
        for col in basis_cols:
            r -= np.vdot(col, r) * col
        nr = float(np.linalg.norm(r))
        if nr > tol * max(float(np.linalg.norm(x)), 1.0):
            basis_cols.append(r / nr)

    current = op.base.basis(op.shape, max_grade)
    steps = max_grade + len(op.shape.tails) + 2
    for _ in range(steps + 1):
        for v in current:
            absorb(to_window(v, max_grade, strict=False))
        current = [apply(op, v) for v in current]
    span = (
        np.column_stack(basis_cols)
        if basis_cols
        else np.zeros((wd, 0), dtype=np.complex128)
    )
    return span, span.shape[1] == wd
