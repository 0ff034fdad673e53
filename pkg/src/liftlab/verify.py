"""Theorem-level predicates and equivalence tests on concrete instances.

Each checker evaluates both sides of its equivalence independently and reports
co-occurrence; nothing is inferred from one side.  All verdicts come back as
ConditionReports with residual magnitudes and the tolerances used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    HypothesesFailed,
    KernelConditionFailed,
    ShapeMismatchError,
    WrongKindError,
)
from .graded import GradedVector, window_dim
from .hosts import ShiftedHostOperator
from .liftings import Certificate
from .operators import (
    LiftingOperator,
    apply,
    adjoint_apply,
    gram_blocks,
    minimal_restriction,
    window_matrix,
)
from .report import ConditionReport
from . import linalg

__all__ = [
    "KernelGapResult",
    "check_null_space_alignment",
    "check_range_invariance",
    "check_restricted_norms",
    "is_quasi_isometry",
    "is_quasicontraction",
    "kernel_gap",
    "quasi_isometry_residual",
    "refute_symmetry_similarity_class",
    "swap_similarity_operator",
    "verify_lifting_suite",
]

_MARGIN_THRESHOLD = 1e-6  # absolute floor on the gram minimum eigenvalue


def _rng(*seed_parts) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([int(p) for p in seed_parts]))
    )


def _cmat(rng, rows, cols) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


# ---------------------------------------------------------------------------
# class predicates
# ---------------------------------------------------------------------------

def quasi_isometry_residual(t) -> float:
    tm = linalg.as_matrix(t)
    tt = tm.conj().T @ tm
    t2 = tm @ tm
    diff = linalg.spectral_norm(t2.conj().T @ t2 - tt)
    return diff / max(linalg.spectral_norm(tt), 1e-300)


def is_quasi_isometry(t, tol: float = 1e-9) -> bool:
    """T*^2 T^2 = T*T within tol * ||T*T||."""
    tm = linalg.as_matrix(t)
    if not np.any(tm):
        return True
    return quasi_isometry_residual(tm) <= tol


def is_quasicontraction(t, tol: float = 1e-9) -> bool:
    """T*^2 T^2 <= T*T in the PSD order, within tolerance."""
    tm = linalg.as_matrix(t)
    tt = tm.conj().T @ tm
    t2 = tm @ tm
    scale = max(linalg.spectral_norm(tt), 1.0)
    return linalg.psd_compare(t2.conj().T @ t2, tt, tol * scale).leq


# ---------------------------------------------------------------------------
# range invariance of S*S (the k1 = (S*S - I)S h criterion)
# ---------------------------------------------------------------------------

def check_range_invariance(s: LiftingOperator, tol: float = 1e-9) -> ConditionReport:
    """Both sides of: S*S R(S) <= R(S)  iff  R(T) <= N(A - I).

    The left side is probed through the closed form for the defect of S*S on
    S h; the right side is the norm of (A - I)T.  When both sides hold the
    downstream consequences (T is a quasicontraction, the restriction of S to
    the complement of H has identity gram) are asserted as well.
    """
    if s.kind != "NATURAL_21":
        raise WrongKindError("range-invariance check applies to natural liftings")
    x0 = s.blocks["X0"]
    xgram = x0.conj().T @ x0 - np.eye(x0.shape[0])
    if s.base.kind == "matrix":
        tmat = s.base.matrix
        amat = s.blocks["A"]
        dcoef = s.blocks["DT"]
        k1_top = xgram @ dcoef
        k2 = (amat - np.eye(amat.shape[0])) @ tmat
        stacked = np.vstack([k1_top, k2])
        scale = max(1.0, linalg.spectral_norm(amat))
        quasicontraction = is_quasicontraction(tmat, tol)
    else:
        a = s.meta["host_a"]
        c = s.meta["cert_c"]
        host = ShiftedHostOperator(a, s.blocks["T0"])
        g = 2
        rect = host.t_rect(g)
        wd_in = rect.shape[1]
        k2 = (host.a_diag(g + 1, c) - np.eye(rect.shape[0])) @ rect
        k1_tail = xgram @ s.blocks["DT"]
        k1_top = np.zeros((host.m, wd_in), dtype=np.complex128)
        k1_top[:, wd_in - host.m :] = k1_tail
        stacked = np.vstack([k1_top, k2])
        scale = max(1.0, c ** 2, a ** 2)
        tw = rect
        tt = tw.conj().T @ tw
        t2 = host.t_rect(g + 1) @ tw
        quasicontraction = linalg.psd_compare(
            t2.conj().T @ t2, tt, tol * scale
        ).leq

    l_side = float(np.max(np.linalg.norm(stacked, axis=0))) if stacked.size else 0.0
    r_side = linalg.spectral_norm(k2)
    pass_l = l_side <= tol * scale
    pass_r = r_side <= tol * scale

    rep = ConditionReport()
    rep.add("k1_vanishes", pass_l, l_side / scale, tol, "(S*S - I) S h = 0 on H")
    rep.add("range_in_fixed_space", pass_r, r_side / scale, tol, "(A - I) T = 0")
    rep.add(
        "equivalence",
        pass_l == pass_r,
        0.0 if pass_l == pass_r else 1.0,
        0.0,
        "S*S R(S) in R(S)  iff  R(T) in N(A - I)",
    )
    if pass_l and pass_r:
        rep.add(
            "downstream_quasicontraction",
            quasicontraction,
            0.0 if quasicontraction else 1.0,
            tol,
            "T*^2 T^2 <= T*T",
        )
        fib = linalg.spectral_norm(xgram)
        rep.add(
            "fiber_gram_identity", fib <= tol * scale, fib / scale, tol,
            "W*W = I on the complement of H",
        )
    rep.meta["l_side"] = l_side
    rep.meta["r_side"] = r_side
    return rep


# ---------------------------------------------------------------------------
# invariant null-space alignment (N0 versus N1, matrix form, and the norm test)
# ---------------------------------------------------------------------------

class _AlignmentContext:
    """Exact window materializations, level L meaning window(g + L).

    For finite instances every level returns the same square matrices; for
    shifted hosts the operators are rectangular one level up, which keeps all
    quadratic expressions exact despite the infinite backbone.
    """

    def __init__(self, t, a, probe_grade: int):
        if isinstance(t, ShiftedHostOperator):
            if not isinstance(a, Certificate) or a.kind != "host":
                raise ShapeMismatchError("host instance needs a host certificate")
            self.host = t
            self.c = a.c
            self.g = probe_grade
            self.finite = False
        else:
            self.tmat = linalg.as_matrix(t)
            self.amat = a.matrix if isinstance(a, Certificate) else linalg.as_matrix(a)
            if self.tmat.shape != self.amat.shape:
                raise ShapeMismatchError("T and A must share their space")
            self.finite = True
            self._apow_cache: dict[float, np.ndarray] = {}

    def t_op(self, lvl: int) -> np.ndarray:
        return self.tmat if self.finite else self.host.t_rect(self.g + lvl)

    def a_op(self, lvl: int) -> np.ndarray:
        return self.amat if self.finite else self.host.a_diag(self.g + lvl, self.c)

    def a_pow(self, lvl: int, p: float) -> np.ndarray:
        if self.finite:
            if p not in self._apow_cache:
                w, v = linalg.hermitian_eig(self.amat)
                if w[0] <= 0.0:
                    raise HypothesesFailed("A invertible")
                self._apow_cache[p] = (v * (w ** p)) @ v.conj().T
            return self._apow_cache[p]
        return self.host.a_power(self.g + lvl, self.c, p)

    def m_tt(self, lvl: int) -> np.ndarray:
        if self.finite:
            return self.amat - self.tmat.conj().T @ self.tmat
        return self.host.amtt(self.g + lvl, self.c)

    def m_tat(self, lvl: int) -> np.ndarray:
        if self.finite:
            return self.amat - self.tmat.conj().T @ self.amat @ self.tmat
        return self.host.amtat(self.g + lvl, self.c)

    def dim(self, lvl: int) -> int:
        return self.tmat.shape[0] if self.finite else window_dim(
            self.host.shape, self.g + lvl
        )

    def that(self, lvl: int) -> np.ndarray:
        return self.a_pow(lvl + 1, 0.5) @ self.t_op(lvl) @ self.a_pow(lvl, -0.5)


def _gate_sandwich(ctx: _AlignmentContext, tol: float):
    tw = ctx.t_op(0)
    tt = tw.conj().T @ tw
    tat = tw.conj().T @ ctx.a_op(1) @ tw
    scale = max(linalg.spectral_norm(ctx.a_op(0)), 1.0)
    if not linalg.psd_compare(tt, tat, tol * scale).leq:
        raise HypothesesFailed("T*T <= T*AT")
    if not linalg.psd_compare(tat, ctx.a_op(0), tol * scale).leq:
        raise HypothesesFailed("T*AT <= A")
    return scale


def _invariance_residual(op: np.ndarray, basis_in: np.ndarray,
                         basis_out: np.ndarray) -> float:
    if basis_in.shape[1] == 0:
        return 0.0
    img = op @ basis_in
    proj = basis_out @ (basis_out.conj().T @ img)
    return linalg.spectral_norm(img - proj)


def check_null_space_alignment(
    t, a, tol: float = 1e-9, probe_grade: int = 6
) -> ConditionReport:
    """Alignment of N0 = N(A - T*AT) with N1 = N(I - That* That).

    Requires T*T <= T*AT <= A with A invertible.  When N0 is invariant the
    checker asserts N0 = N1 and A-invariance, and evaluates the block form of
    T on N0 + complement: gram of the corner equals A restricted to N0, the
    coupling lands in the corner's cokernel, and the scaled two-row stack is a
    strict contraction.  The subspace statement and the block statement are
    evaluated independently and compared.
    """
    ctx = _AlignmentContext(t, a, probe_grade)
    scale = _gate_sandwich(ctx, tol)
    rep = ConditionReport()

    n0_in = linalg.kernel_basis(ctx.m_tat(0)).basis
    n0_out = linalg.kernel_basis(ctx.m_tat(1)).basis
    tw = ctx.t_op(0)
    that = ctx.that(0)
    n1_in = linalg.kernel_basis(
        np.eye(ctx.dim(0)) - that.conj().T @ that
    ).basis
    n1_out = linalg.kernel_basis(
        np.eye(ctx.dim(1)) - ctx.that(1).conj().T @ ctx.that(1)
    ).basis

    tscale = max(linalg.spectral_norm(tw), 1.0)
    inv0 = _invariance_residual(tw, n0_in, n0_out)
    inv1 = _invariance_residual(that, n1_in, n1_out)
    t_inv = inv0 <= tol * tscale
    that_inv = inv1 <= tol * tscale
    rep.add("n0_invariant", t_inv, inv0 / tscale, tol, "T N0 in N0")
    rep.add("n1_invariant", that_inv, inv1 / tscale, tol, "That N1 in N1")
    if not (t_inv and that_inv):
        return rep

    gap = linalg.principal_angle_gap(n0_in, n1_in)
    rep.add(
        "null_spaces_align",
        n0_in.shape[1] == n1_in.shape[1] and gap <= 1e-8,
        gap,
        1e-8,
        "N(A - T*AT) = N(I - That* That)",
    )
    inva = _invariance_residual(ctx.a_op(0), n0_in, n0_in)
    rep.add("a_invariant", inva <= tol * scale, inva / scale, tol, "A N0 in N0")

    # block statement (ii)
    bn, bc = n0_in, linalg.complement_basis(n0_in, ctx.dim(0))
    bn1, bc1 = n0_out, linalg.complement_basis(n0_out, ctx.dim(1))
    wblk = bn1.conj().T @ tw @ bn
    a0 = bn.conj().T @ ctx.a_op(0) @ bn
    a0_out = bn1.conj().T @ ctx.a_op(1) @ bn1
    gram_res = linalg.spectral_norm(wblk.conj().T @ wblk - a0)
    pass_gram = gram_res <= tol * scale
    rep.add("corner_gram_matches", pass_gram, gram_res / scale, tol, "W*W = A0")

    t0b = bn1.conj().T @ tw @ bc
    t1b = bc1.conj().T @ tw @ bc
    coker = linalg.spectral_norm(wblk.conj().T @ t0b)
    pass_coker = coker <= tol * scale
    rep.add(
        "coupling_in_cokernel", pass_coker, coker / scale, tol, "R(T0) in N(W*)"
    )

    a1 = bc.conj().T @ ctx.a_op(0) @ bc
    a1_out = bc1.conj().T @ ctx.a_op(1) @ bc1
    w1, v1 = linalg.hermitian_eig(a1)
    if w1.size and w1[0] <= 0.0:
        raise HypothesesFailed("A invertible")
    a1_ih = (v1 * (w1 ** -0.5)) @ v1.conj().T if w1.size else a1
    stack = np.vstack(
        [linalg.psd_sqrt(a0_out) @ t0b @ a1_ih, linalg.psd_sqrt(a1_out) @ t1b @ a1_ih]
    )
    stack_norm = linalg.spectral_norm(stack)
    pass_norm = stack_norm < 1.0
    rep.add(
        "scaled_stack_contractive", pass_norm, stack_norm, 1.0,
        "||(A0^(1/2) T0 A1^(-1/2); A1^(1/2) T1 A1^(-1/2))|| < 1",
    )

    rc = linalg.ranges_equal(ctx.m_tat(0), ctx.m_tt(0), tol=1e-8)
    rep.add(
        "ranges_coincide", rc.equal, rc.sin_gap, 1e-8,
        "R(A - T*AT) = R(A - T*T), closed",
    )
    pass_ii = pass_gram and pass_coker and pass_norm
    rep.add(
        "statements_agree",
        rc.equal == pass_ii,
        0.0 if rc.equal == pass_ii else 1.0,
        0.0,
        "subspace statement iff block statement",
    )
    rep.meta["n0_dim"] = int(n0_in.shape[1])
    rep.meta["stack_norm"] = stack_norm
    return rep


def check_restricted_norms(
    t, a, tol: float = 1e-9, probe_grade: int = 6
) -> ConditionReport:
    """Norm diagnostics on the complement of N0.

    Reports ||That restricted|| (equivalently the scaled coupling norm of the
    similarity certificate) and ||T A^(-1/2) restricted||; in this finite
    representation the corresponding ranges are automatically closed, so both
    norms must sit strictly below 1 whenever the hypotheses hold.
    """
    ctx = _AlignmentContext(t, a, probe_grade)
    scale = _gate_sandwich(ctx, tol)
    n0_in = linalg.kernel_basis(ctx.m_tat(0)).basis
    n0_out = linalg.kernel_basis(ctx.m_tat(1)).basis
    tw = ctx.t_op(0)
    inv0 = _invariance_residual(tw, n0_in, n0_out)
    if inv0 > tol * max(linalg.spectral_norm(tw), 1.0):
        raise HypothesesFailed("T N0 in N0")

    rep = ConditionReport()
    bc = linalg.complement_basis(n0_in, ctx.dim(0))
    if bc.shape[1] == 0:
        rep.add("restricted_contraction_norm", True, 0.0, 1.0,
                "||That on complement of N0|| < 1 (vacuous)")
        rep.add("restricted_similarity_norm", True, 0.0, 1.0,
                "||T A^(-1/2) on complement of N0|| < 1 (vacuous)")
        return rep

    n_that = linalg.spectral_norm(ctx.that(0) @ bc)
    rep.add(
        "restricted_contraction_norm", n_that < 1.0, n_that, 1.0,
        "||That on complement of N0|| < 1",
    )
    ker_tt = linalg.kernel_basis(ctx.m_tt(0)).basis
    same_kernel = (
        ker_tt.shape[1] == n0_in.shape[1]
        and linalg.principal_angle_gap(ker_tt, n0_in) <= 1e-8
    )
    n_tai = linalg.spectral_norm(tw @ ctx.a_pow(0, -0.5) @ bc)
    rep.add(
        "restricted_similarity_norm",
        (n_tai < 1.0) if same_kernel else None,
        n_tai,
        1.0,
        "||T A^(-1/2) on complement of N0|| < 1",
    )
    rep.meta["kernels_match"] = bool(same_kernel)
    return rep


# ---------------------------------------------------------------------------
# the kernel gap N(S*) minus N(Q*), two independent formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelGapResult:
    basis_a: np.ndarray
    basis_b: np.ndarray
    agreement: bool
    sin_gap: float
    window_grade: int


def _orth_cols(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if mat.size == 0 or mat.shape[1] == 0:
        return np.zeros((mat.shape[0], 0), dtype=np.complex128)
    return linalg.range_basis(mat, tol=tol * max(linalg.spectral_norm(mat), 1.0)).basis


def _subtract(space: np.ndarray, sub: np.ndarray) -> np.ndarray:
    if space.shape[1] == 0:
        return space
    if sub.shape[1] == 0:
        return space
    resid = space - sub @ (sub.conj().T @ space)
    return _orth_cols(resid, tol=1e-8)


def kernel_gap(s: LiftingOperator, probe_grade: int = 6) -> KernelGapResult:
    """N(S*) minus N(Q*) by its two characterizations, compared.

    Formula (a) assembles l + m with l in N(V*), m in N(V1*) and
    G0* l + G1* m = 0; formula (b) takes the kernel of the row [G0* G1*]
    on L + closure R(Q) and removes R(V) + N(G1*).  Requires the kernel
    condition Q*Q N(Q*) <= N(Q*) for the lifted operator.
    """
    kappa = int(s.meta.get("new_channel_dim", 0))
    shape = s.shape
    gg = probe_grade
    if kappa == 0 or s.meta.get("degenerate"):
        empty = np.zeros((window_dim(shape, gg + 2), 0), dtype=np.complex128)
        return KernelGapResult(empty, empty, True, 0.0, gg)
    dval = float(s.meta["d_scale"])
    d = shape.fiber_dim

    def m_mask(level: int) -> np.ndarray:
        idx = []
        for g in range(level + 1):
            idx.extend(range(g * d + kappa, (g + 1) * d))
        base = (level + 1) * d
        idx.extend(range(base, base + shape.tail_total))
        return np.array(idx, dtype=int)

    def new_grade0_cols(level: int) -> np.ndarray:
        out = np.zeros((window_dim(shape, level), kappa), dtype=np.complex128)
        out[:kappa, :] = np.eye(kappa)
        return out

    def q_window(level: int) -> np.ndarray:
        sw = window_matrix(s, level)
        return sw[np.ix_(m_mask(level + 1), m_mask(level))]

    def m_embed(x: np.ndarray, lvl_from: int, lvl_to: int) -> np.ndarray:
        out = np.zeros((m_mask(lvl_to).shape[0], x.shape[1]), dtype=np.complex128)
        out[: x.shape[0] - shape.tail_total, :] = x[: x.shape[0] - shape.tail_total]
        if shape.tail_total:
            out[-shape.tail_total :, :] = x[-shape.tail_total :, :]
        return out

    qw0 = q_window(gg)
    qw1 = q_window(gg + 1)
    nq = linalg.kernel_basis(qw0.conj().T, tol=1e-10).basis  # in M(gg+1)
    if nq.shape[1] != kappa:
        raise ShapeMismatchError(
            f"adjoint kernel dimension {nq.shape[1]} != recorded {kappa}"
        )

    # kernel condition for Q
    img = qw1.conj().T @ (qw1 @ nq)
    leak = linalg.spectral_norm(img - nq @ (nq.conj().T @ img))
    if leak > 1e-8 * max(linalg.spectral_norm(img), 1.0):
        raise KernelConditionFailed(
            f"Q*Q N(Q*) leaks out of N(Q*) by {leak:.3e}"
        )

    brq = linalg.range_basis(qw0).basis                    # in M(gg+1)
    qrq = linalg.range_basis(qw1 @ brq).basis              # in M(gg+2)
    brq2 = m_embed(brq, gg + 1, gg + 2)
    bv1 = _subtract(brq2, qrq)                             # N(V1*) within M(gg+2)
    g1_img = qw1 @ nq                                      # G1 columns in M(gg+2)

    # full-window embeddings at level gg+2
    wd2 = window_dim(shape, gg + 2)
    mm2 = m_mask(gg + 2)

    def into_full(m_part: np.ndarray) -> np.ndarray:
        out = np.zeros((wd2, m_part.shape[1]), dtype=np.complex128)
        out[mm2, :] = m_part
        return out

    # formula (a)
    coeff = -(1.0 / dval) * (g1_img.conj().T @ bv1)        # kappa x dim(bv1)
    l_part = new_grade0_cols(gg + 2) @ coeff
    gap_a = _orth_cols(l_part + into_full(bv1), tol=1e-9)

    # formula (b): domain L + closure R(Q)
    l_cols = []
    for g in range(gg + 3):
        for chan in range(kappa):
            col = np.zeros(wd2, dtype=np.complex128)
            col[g * d + chan] = 1.0
            l_cols.append(col)
    l_basis = np.column_stack(l_cols)
    dom = np.hstack([l_basis, into_full(brq2)])
    row = np.zeros((kappa, wd2), dtype=np.complex128)
    row[:, :kappa] = dval * np.eye(kappa)
    row_m = np.zeros((kappa, wd2), dtype=np.complex128)
    row_m[:, mm2] = g1_img.conj().T
    row = row + row_m
    ker_coeff = linalg.kernel_basis(row @ dom, tol=1e-10).basis
    kern = _orth_cols(dom @ ker_coeff, tol=1e-9)
    rv = l_basis[:, kappa:]                                 # R(V): grades >= 1
    ng1_coeff = linalg.kernel_basis(g1_img.conj().T @ brq2, tol=1e-10).basis
    ng1 = _orth_cols(into_full(brq2 @ ng1_coeff), tol=1e-9)
    sub = _orth_cols(np.hstack([rv, ng1]), tol=1e-10)
    gap_b = _subtract(kern, sub)

    sin_gap = linalg.principal_angle_gap(gap_a, gap_b)
    agreement = gap_a.shape[1] == gap_b.shape[1] and sin_gap <= 1e-8
    return KernelGapResult(gap_a, gap_b, agreement, sin_gap, gg)


# ---------------------------------------------------------------------------
# refutation on the contractive-symmetry similarity class
# ---------------------------------------------------------------------------

def swap_similarity_operator(dim_half: int) -> np.ndarray:
    """The similarity image of the block swap: [[0, 2I], [I/2, 0]]."""
    if dim_half < 1:
        raise ValueError("dim_half must be >= 1")
    h = dim_half
    t = np.zeros((2 * h, 2 * h), dtype=np.complex128)
    t[:h, h:] = 2.0 * np.eye(h)
    t[h:, :h] = 0.5 * np.eye(h)
    return t


def refute_symmetry_similarity_class(
    dim_half: int, samples: int, seed: int
) -> ConditionReport:
    """Certify that no sampled feasible certificate satisfies the range clause.

    The averaging map A = B + T*BT (B random positive) lands exactly in the
    fixed-point set of X -> T*XT because T^2 = I; after scaling so A >= T*T,
    every sample must keep A - T*AT = 0 while A - T*T != 0, so the range
    equality fails for each one.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t = swap_similarity_operator(dim_half)
    n = 2 * dim_half
    th = t.conj().T
    rep = ConditionReport()

    t2_res = linalg.spectral_norm(t @ t - np.eye(n))
    rep.add("involution", t2_res <= 1e-12, t2_res, 1e-12, "T^2 = I")
    norm_res = abs(linalg.spectral_norm(t) - 2.0)
    rep.add("operator_norm_two", norm_res <= 1e-12, norm_res, 1e-12, "||T|| = 2 > 1")

    worst_fix = 0.0
    worst_psd = 0.0
    a_differs = True
    refuted = 0
    for i in range(samples):
        rng = _rng(seed, i)
        gmat = _cmat(rng, n, n)
        b = gmat @ gmat.conj().T + 0.05 * np.eye(n)
        a0 = b + th @ b @ t
        # scale so that A >= T*T with margin
        w, v = linalg.hermitian_eig(a0)
        a_ih = (v * (w ** -0.5)) @ v.conj().T
        mu = linalg.spectral_norm(a_ih @ (th @ t) @ a_ih) * (1.0 + 1e-6)
        a = mu * a0
        na = linalg.spectral_norm(a)
        worst_fix = max(
            worst_fix, linalg.spectral_norm(a - th @ a @ t) / na
        )
        cmp_tt = linalg.psd_compare(th @ t, a, 1e-9 * na)
        worst_psd = max(worst_psd, max(0.0, -cmp_tt.min_eigenvalue_of_difference) / na)
        if linalg.spectral_norm(a - th @ t) <= 1e-8 * na:
            a_differs = False
        if not linalg.ranges_equal(a - th @ t, a - th @ a @ t).equal:
            refuted += 1

    rep.add("fixed_point", worst_fix <= 1e-10, worst_fix, 1e-10,
            "T*AT = A on the sampled feasible set")
    rep.add("certificates_dominate", worst_psd <= 1e-9, worst_psd, 1e-9,
            "A >= T*T after scaling")
    rep.add("certificates_differ_from_gram", a_differs,
            0.0 if a_differs else 1.0, 1e-8, "A != T*T")
    rep.add(
        "range_condition_refuted",
        refuted == samples,
        float(samples - refuted),
        0.0,
        "R(A - T*T) != R(A - T*AT) for every sample",
    )
    rep.meta.update(
        {"dim_half": dim_half, "samples": samples, "refuted": refuted, "seed": seed}
    )
    return rep


# ---------------------------------------------------------------------------
# the full per-operator verification suite
# ---------------------------------------------------------------------------

def _random_graded(rng, shape, max_grade, channels=None) -> GradedVector:
    d = shape.fiber_dim
    fibers = {}
    if d:
        lo, hi = (0, d) if channels is None else channels
        for g in rng.integers(0, max_grade + 1, size=3):
            block = np.zeros(d, dtype=np.complex128)
            block[lo:hi] = (
                rng.standard_normal(hi - lo) + 1j * rng.standard_normal(hi - lo)
            )
            fibers[int(g)] = fibers.get(int(g), 0) + block
    tails = None
    if channels is None:
        tails = [
            rng.standard_normal(t) + 1j * rng.standard_normal(t)
            for t in shape.tails
        ]
    return GradedVector(shape, fibers, tails)


def verify_lifting_suite(
    s: LiftingOperator,
    probes: int = 40,
    probe_grade: int = 8,
    seed: int = 0,
    tol: float = 1e-9,
) -> ConditionReport:
    """Run every property the operator's kind claims, with seeded probes.

    Always checked: adjoint pairing, the quasi-isometry identity on the full
    window Gram, the lifting identity, and invariance of H under S*S (the
    latter verdict is informative for the left-invertible extension kind,
    where it can legitimately fail).  Claim-dependent: the left-invertibility
    margin, isometry of the added backbone, minimality up to the probe grade.
    """
    claims = set(s.claims())
    rep = ConditionReport()
    rep.meta["config"] = {
        "probes": int(probes),
        "probe_grade": int(probe_grade),
        "seed": int(seed),
        "tol": float(tol),
        "kind": s.kind,
    }

    # adjoint pairing on seeded probes
    from .graded import inner_product

    worst = 0.0
    for k in range(probes):
        rng = _rng(seed, k)
        u = _random_graded(rng, s.shape, probe_grade)
        v = _random_graded(rng, s.shape, probe_grade)
        lhs = inner_product(apply(s, u), v)
        rhs = inner_product(u, adjoint_apply(s, v))
        worst = max(worst, abs(lhs - rhs) / max(u.norm() * v.norm(), 1.0))
    rep.add("adjoint_pairing", worst <= 1e-11, worst, 1e-11, "<Su, v> = <u, S*v>")

    # quasi-isometry on the whole window Gram
    w1 = window_matrix(s, probe_grade)
    w2 = window_matrix(s, probe_grade + 1) @ w1
    g1 = w1.conj().T @ w1
    qi = linalg.spectral_norm(w2.conj().T @ w2 - g1) / max(
        linalg.spectral_norm(g1), 1.0
    )
    rep.add("quasi_isometry", qi <= tol, qi, tol, "S*^2 S^2 = S*S")

    if s.base is not None:
        # lifting identity over the whole window basis
        wd = window_dim(s.shape, probe_grade - 1)
        worst_lift = 0.0
        eye = np.eye(wd, dtype=np.complex128)
        from .graded import from_window

        for j in range(wd):
            x = from_window(s.shape, eye[:, j], probe_grade - 1)
            lhs = s.base.project(apply(s, x))
            rhs = s.base.apply_base(s.base.project(x))
            worst_lift = max(worst_lift, (lhs - rhs).norm())
        rep.add(
            "lifting_identity", worst_lift <= 1e-12, worst_lift, 1e-12,
            "P_H S = T P_H",
        )

        worst_inv = 0.0
        for h in s.base.basis(s.shape, probe_grade - 1):
            w = adjoint_apply(s, apply(s, h))
            worst_inv = max(worst_inv, s.base.off_part(w).norm())
        rep.add(
            "ssh_invariance", worst_inv <= 1e-10, worst_inv, 1e-10, "S*S H in H"
        )

    if "left_invertible" in claims:
        margin = gram_blocks(s).min_eigenvalue
        rep.add(
            "left_invertibility", margin >= _MARGIN_THRESHOLD, margin,
            _MARGIN_THRESHOLD, "S*S >= c I with c > 0",
        )
        rep.meta["gram_margin"] = margin

    if "fiber_isometry" in claims and s.shape.fiber_dim:
        channels = tuple(s.meta.get("isometric_channels", (0, s.shape.fiber_dim)))
        worst_fib = 0.0
        if channels[1] > channels[0]:
            for k in range(probes):
                rng = _rng(seed, 10_000 + k)
                v = _random_graded(rng, s.shape, probe_grade, channels=channels)
                if v.norm() == 0.0:
                    continue
                worst_fib = max(
                    worst_fib, abs(apply(s, v).norm() - v.norm()) / v.norm()
                )
        rep.add(
            "fiber_isometry", worst_fib <= 1e-12, worst_fib, 1e-12,
            "||S v|| = ||v|| on the added backbone",
        )

    if "minimal" in claims and s.base is not None:
        span, minimal = minimal_restriction(s, probe_grade)
        defect = window_dim(s.shape, probe_grade) - span.shape[1]
        rep.add(
            "minimality", minimal, float(defect), 0.0,
            "window of closed span of S^n H fills the window",
        )
    return rep
