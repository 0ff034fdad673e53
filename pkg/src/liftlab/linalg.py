"""Dense complex linear algebra with explicit tolerances.

Everything downstream (lifting constructors, theorem checkers, samplers) sits
on the primitives in this module: a cyclic Jacobi eigensolver for Hermitian
matrices, the PSD calculus built on it, and SVD-based subspace computations
with recorded rank tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    NonSquareError,
    NotHermitianError,
    NotPsdError,
    RangeNotIncludedError,
    ShapeMismatchError,
)

__all__ = [
    "PsdCompare",
    "RangeComparison",
    "SubspaceBasis",
    "TrichotomyResult",
    "as_matrix",
    "douglas_solve",
    "hermitian_eig",
    "kernel_basis",
    "pinv",
    "polar_decompose",
    "principal_angle_gap",
    "psd_compare",
    "psd_sqrt",
    "range_and_cokernel",
    "range_basis",
    "ranges_equal",
    "spectral_norm",
    "spectral_radius_trichotomy",
]

_EIG_OFFDIAG_FACTOR = 1e-13   # convergence: off-diagonal Frobenius vs ||M||
_HERMITIAN_GATE = 1e-10       # max tolerated asymmetry without symmetrize
_MAX_SWEEPS = 64


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex128 array (copying, so inputs stay immutable)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ShapeMismatchError(f"expected a matrix, got ndim={a.ndim}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value; 0 for empty matrices."""
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _offdiag_frobenius(a: np.ndarray) -> float:
    d = np.diag(np.diag(a))
    return float(np.linalg.norm(a - d))


def hermitian_eig(m, symmetrize: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Returns (eigenvalues ascending, unitary eigenvector matrix V) with
    M @ V = V @ diag(w).  With ``symmetrize`` the input is replaced by its
    Hermitian part first; otherwise asymmetry beyond 1e-10 * ||M|| raises.
    """
    a = as_matrix(m)
    n, nc = a.shape
    if n != nc:
        raise NonSquareError(f"matrix is {n}x{nc}")
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)

    scale = frobenius(a)
    asym = frobenius(a - adjoint(a))
    if symmetrize:
        a = 0.5 * (a + adjoint(a))
    elif asym > _HERMITIAN_GATE * max(scale, 1e-300):
        raise NotHermitianError(
            f"asymmetry {asym:.3e} exceeds {_HERMITIAN_GATE:.0e} * ||M||"
        )
    else:
        a = 0.5 * (a + adjoint(a))

    v = np.eye(n, dtype=np.complex128)
    if n == 1 or scale == 0.0:
        return np.diag(a).real.copy(), v

    threshold = _EIG_OFFDIAG_FACTOR * scale
    skip = 1e-3 * threshold / n

    converged = False
    for _ in range(_MAX_SWEEPS):
        if _offdiag_frobenius(a) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                ab = abs(b)
                if ab <= skip:
                    continue
                # Unitary 2x2 rotation: phase removal then a real Jacobi step.
                u = b / ab
                tau = (a[q, q].real - a[p, p].real) / (2.0 * ab)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cu = c * u
                su = s * u
                # rows p, q  (left multiply by J^H)
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = np.conj(cu) * rp - s * rq
                a[q, :] = np.conj(su) * rp + c * rq
                # columns p, q  (right multiply by J)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = cu * cp - s * cq
                a[:, q] = su * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = cu * vp - s * vq
                v[:, q] = su * vp + c * vq
    else:
        converged = _offdiag_frobenius(a) <= threshold
    if not converged:
        raise ConvergenceError("Jacobi sweeps exhausted before convergence")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def default_rank_tol(m: np.ndarray) -> float:
    """Rank cut: max(rows, cols) * ||M||_2 * 1e-12."""
    if m.size == 0:
        return 0.0
    return max(m.shape) * spectral_norm(m) * 1e-12


def psd_sqrt(m, tol: float | None = None) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in [-tol * ||M||, 0] are clamped to zero (PSD inputs arrive
    contaminated by prior arithmetic); anything below that raises NotPsdError.
    """
    a = as_matrix(m)
    w, v = hermitian_eig(a)
    if w.size == 0:
        return a
    nrm = max(abs(w[0]), abs(w[-1]))
    if tol is None:
        tol = max(a.shape) * 1e-12
    floor = -tol * max(nrm, 1e-300)
    if w[0] < floor:
        raise NotPsdError(f"eigenvalue {w[0]:.3e} below PSD tolerance {floor:.3e}")
    # Noise-level eigenvalues (either sign) go to zero; a bare clip would let
    # sqrt inflate them past the rank cut and change the range.
    w = np.where(w <= -floor, 0.0, w)
    s = (v * np.sqrt(w)) @ adjoint(v)
    return 0.5 * (s + adjoint(s))


def polar_decompose(m) -> tuple[np.ndarray, np.ndarray]:
    """Polar factors (J, P) with M = J P, P = (M^H M)^(1/2), J a partial isometry.

    J is isometric on range(P) and zero on its orthogonal complement; the zero
    matrix yields J = 0.
    """
    a = as_matrix(m)
    if a.size == 0:
        return a.copy(), np.zeros((a.shape[1], a.shape[1]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    tol = default_rank_tol(a)
    r = int(np.sum(s > tol))
    j = u[:, :r] @ vh[:r, :]
    p = adjoint(vh) @ (s[:, None] * vh)
    p = 0.5 * (p + adjoint(p))
    return j, p


_PSD_VERDICTS = ("LEQ", "GEQ", "EQUAL", "INCOMPARABLE")


@dataclass(frozen=True)
class PsdCompare:
    """Outcome of comparing Hermitian A against B in the PSD order."""

    verdict: str
    min_eigenvalue_of_difference: float
    tol: float

    @property
    def leq(self) -> bool:
        return self.verdict in ("LEQ", "EQUAL")

    @property
    def geq(self) -> bool:
        return self.verdict in ("GEQ", "EQUAL")


def psd_compare(a, b, tol: float | None = None) -> PsdCompare:
    """Compare Hermitian matrices: verdict on A <= B / A >= B within tol.

    The verdict comes from the eigenvalue signs of B - A: all >= -tol gives
    LEQ, all <= tol gives GEQ, both give EQUAL, neither INCOMPARABLE.
    """
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape != bm.shape:
        raise ShapeMismatchError(f"shapes {am.shape} vs {bm.shape}")
    if tol is None:
        tol = 1e-9 * max(spectral_norm(am), spectral_norm(bm), 1.0)
    w, _ = hermitian_eig(bm - am, symmetrize=True)
    lo = float(w[0]) if w.size else 0.0
    hi = float(w[-1]) if w.size else 0.0
    leq = lo >= -tol
    geq = hi <= tol
    if leq and geq:
        verdict = "EQUAL"
    elif leq:
        verdict = "LEQ"
    elif geq:
        verdict = "GEQ"
    else:
        verdict = "INCOMPARABLE"
    return PsdCompare(verdict, lo, tol)


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis columns plus the rank tolerance that defined them."""

    ambient_dim: int
    basis: np.ndarray
    tol: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ adjoint(self.basis)


def range_basis(m, tol: float | None = None) -> SubspaceBasis:
    """Orthonormal basis of the column space (singular vectors with sigma > tol)."""
    a = as_matrix(m)
    if tol is None:
        tol = default_rank_tol(a)
    if a.size == 0:
        return SubspaceBasis(a.shape[0], np.zeros((a.shape[0], 0), np.complex128), tol)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > tol))
    return SubspaceBasis(a.shape[0], u[:, :r].copy(), tol)


def kernel_basis(m, tol: float | None = None) -> SubspaceBasis:
    """Orthonormal basis of the null space; dim(range) + dim(kernel) = cols."""
    a = as_matrix(m)
    if tol is None:
        tol = default_rank_tol(a)
    n = a.shape[1]
    if a.size == 0:
        return SubspaceBasis(n, np.eye(n, dtype=np.complex128), tol)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > tol))
    return SubspaceBasis(n, adjoint(vh)[:, r:].copy(), tol)


def range_and_cokernel(m, tol: float | None = None) -> tuple[SubspaceBasis, SubspaceBasis]:
    """One SVD giving orthonormal bases of R(M) and of N(M^H) = R(M)-perp."""
    a = as_matrix(m)
    if tol is None:
        tol = default_rank_tol(a)
    u, s, _ = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > tol))
    return (
        SubspaceBasis(a.shape[0], u[:, :r].copy(), tol),
        SubspaceBasis(a.shape[0], u[:, r:].copy(), tol),
    )


def complement_basis(basis: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis columns)."""
    if basis.shape[1] == 0:
        return np.eye(ambient_dim, dtype=np.complex128)
    return kernel_basis(adjoint(basis), tol=1e-10).basis


def principal_angle_gap(b1: np.ndarray, b2: np.ndarray) -> float:
    """Sine of the largest principal angle between two orthonormal column spans.

    Symmetric in its arguments; for spans of different dimension this is the
    larger of the two one-sided projection distances (and equals 1 when one
    span has a direction orthogonal to the whole other span).
    """
    b1 = np.asarray(b1, dtype=np.complex128)
    b2 = np.asarray(b2, dtype=np.complex128)
    if b1.shape[1] == 0 and b2.shape[1] == 0:
        return 0.0
    if b1.shape[1] == 0 or b2.shape[1] == 0:
        return 1.0
    g1 = spectral_norm(b1 - b2 @ (adjoint(b2) @ b1))
    g2 = spectral_norm(b2 - b1 @ (adjoint(b1) @ b2))
    return max(g1, g2)


@dataclass(frozen=True)
class RangeComparison:
    equal: bool
    sin_gap: float
    dim_left: int
    dim_right: int
    tol: float


def ranges_equal(m, n, tol: float = 1e-8) -> RangeComparison:
    """Decide R(M) = R(N) via dimensions and principal angles.

    For Hermitian PSD inputs R(P^(1/2)) = R(P), so callers comparing square
    roots may equivalently compare the operators themselves (tested).
    """
    am = as_matrix(m)
    an = as_matrix(n)
    if am.shape[0] != an.shape[0]:
        raise ShapeMismatchError(f"row counts {am.shape[0]} vs {an.shape[0]}")
    bm = range_basis(am)
    bn = range_basis(an)
    gap = principal_angle_gap(bm.basis, bn.basis)
    equal = bm.dim == bn.dim and gap <= tol
    return RangeComparison(equal, gap, bm.dim, bn.dim, tol)


def pinv(m, tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the package rank cut."""
    a = as_matrix(m)
    if a.size == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if tol is None:
        tol = default_rank_tol(a)
    inv = np.where(s > tol, 1.0 / np.where(s > tol, s, 1.0), 0.0)
    return adjoint(vh) @ (inv[:, None] * adjoint(u))


def douglas_solve(b, c, tol: float = 1e-8) -> np.ndarray:
    """Solve X B = C given the range inclusion R(C^H) <= R(B^H).

    B and C share their domain; the inclusion of the adjoint ranges is the
    solvability condition, and for the Hermitian pairs this package feeds in
    it coincides with R(C) <= R(B).  X is computed as C pinv(B), hence
    vanishes on the orthogonal complement of range(B).  A failed inclusion
    raises RangeNotIncludedError carrying the principal-angle gap; that
    refusal is itself a meaningful verdict.
    """
    bm = as_matrix(b)
    cm = as_matrix(c)
    if bm.shape[1] != cm.shape[1]:
        raise ShapeMismatchError("B and C must share their domain")
    rb = range_basis(adjoint(bm))
    rc = range_basis(adjoint(cm))
    if rc.dim > 0:
        leak = spectral_norm(rc.basis - rb.basis @ (adjoint(rb.basis) @ rc.basis))
        if leak > tol:
            raise RangeNotIncludedError(
                f"range inclusion R(C*) <= R(B*) fails (gap {leak:.3e})", gap=leak
            )
    x = cm @ pinv(bm)
    resid = spectral_norm(x @ bm - cm)
    scale = spectral_norm(bm) + spectral_norm(cm)
    if resid > tol * max(scale, 1.0):
        raise RangeNotIncludedError(
            f"factorization residual {resid:.3e} exceeds tolerance", gap=resid
        )
    return x


@dataclass(frozen=True)
class TrichotomyResult:
    """Verdict of the power-series stability probe, with certificate when < 1."""

    verdict: str  # LT_ONE | GE_ONE | INCONCLUSIVE
    certificate: np.ndarray | None
    terms_used: int
    residual: float


def spectral_radius_trichotomy(
    t, max_terms: int = 500, blow_up: float = 1e8
) -> TrichotomyResult:
    """Classify r(T) against 1 via partial sums A_N = sum_k T*^k T^k.

    Convergence (increments below 1e-12 * ||A_N||) certifies r(T) < 1 and
    returns A with A - T*AT = I up to the series tail; norm blow-up beyond
    ``blow_up`` certifies r(T) >= 1; otherwise the probe is inconclusive.
    """
    tm = as_matrix(t)
    n, nc = tm.shape
    if n != nc:
        raise NonSquareError(f"matrix is {n}x{nc}")
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    if blow_up <= 1.0:
        raise ValueError("blow_up must exceed 1")
    th = adjoint(tm)
    acc = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    ratio = 1.0
    for k in range(1, max_terms + 1):
        term = th @ term @ tm
        acc = acc + term
        norm_acc = spectral_norm(acc)
        ratio = spectral_norm(term) / max(norm_acc, 1e-300)
        if norm_acc > blow_up:
            return TrichotomyResult("GE_ONE", None, k, ratio)
        if ratio <= 1e-12:
            a = 0.5 * (acc + adjoint(acc))
            residual = spectral_norm(a - th @ a @ tm - np.eye(n)) / max(norm_acc, 1.0)
            if residual > 1e-8:
                return TrichotomyResult("INCONCLUSIVE", None, k, residual)
            return TrichotomyResult("LT_ONE", a, k, residual)
    return TrichotomyResult("INCONCLUSIVE", None, max_terms, ratio)
