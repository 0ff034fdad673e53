"""Deterministic generators for the operator classes under study.

All randomness flows through the counter-based Philox generator keyed by
SeedSequence([seed, index]); identical seeds reproduce identical instances
byte for byte.  The search harness runs selected checkers over seeded batches
and records replayable violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ExhaustedError, UnknownClassError
from .hosts import ShiftedHostOperator
from .liftings import (
    Certificate,
    build_expansive_host_certificate,
    build_left_invertible_lifting,
    build_natural_lifting,
    build_quasicontraction_lifting,
    check_certificate_conditions,
    normalize_certificate,
)
from . import linalg

__all__ = [
    "SearchOutcome",
    "derived_rng",
    "gen_quasi_isometry",
    "gen_quasicontraction",
    "gen_shifted_host",
    "gen_strict_similarity",
    "search",
]

CLASSES = (
    "quasi_isometry",
    "quasicontraction",
    "strict_similarity",
    "symmetry_similarity",
    "shifted_host",
)


def derived_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream number ``index`` of the root seed."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([int(seed), int(index)]))
    )


def _cmat(rng, rows, cols) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def _unitary(rng, n) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q, r = np.linalg.qr(_cmat(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _pick_dim(rng, dim_range) -> int:
    if isinstance(dim_range, int):
        return dim_range
    lo, hi = dim_range
    return int(rng.integers(lo, hi + 1))


def gen_quasi_isometry(dim_range, kernel_dim: int, seed: int) -> np.ndarray:
    """Quasi-isometry with the prescribed kernel dimension.

    Built as [V G; 0 0] on a random orthonormal splitting with V unitary, so
    T*^2 T^2 = T*T holds by block algebra.
    """
    if kernel_dim < 1:
        raise ValueError("kernel_dim must be >= 1 (trivial kernels force unitaries)")
    rng = derived_rng(seed)
    n = max(_pick_dim(rng, dim_range), kernel_dim + 1)
    p = n - kernel_dim
    v = _unitary(rng, p)
    g = _cmat(rng, p, kernel_dim)
    block = np.zeros((n, n), dtype=np.complex128)
    block[:p, :p] = v
    block[:p, p:] = g
    u = _unitary(rng, n)
    return u @ block @ u.conj().T


def gen_quasicontraction(dim_range, seed: int, max_rejects: int = 64) -> np.ndarray:
    """Rejection-sampled quasicontraction over block proposals.

    Mixes nilpotent specials (T^2 = 0), scaled contractions, and triangular
    [C G; 0 0] proposals accepted when T*^2 T^2 <= T*T holds.
    """
    if max_rejects < 1:
        raise ValueError("max_rejects must be >= 1")
    from .verify import is_quasicontraction

    rng = derived_rng(seed)
    n = _pick_dim(rng, dim_range)
    for _ in range(max_rejects):
        kind = int(rng.integers(0, 4))
        if kind == 0 and n >= 2:
            # nilpotent special: upper block only
            p = int(rng.integers(1, n))
            t = np.zeros((n, n), dtype=np.complex128)
            t[:p, p:] = 2.0 * _cmat(rng, p, n - p)
            u = _unitary(rng, n)
            return u @ t @ u.conj().T
        if kind == 1:
            c = _cmat(rng, n, n)
            t = c / (linalg.spectral_norm(c) + 0.1)
            return t
        p = int(rng.integers(1, n)) if n >= 2 else 1
        c = _cmat(rng, p, p)
        c = c / (linalg.spectral_norm(c) + 0.05)
        g = 1.5 * _cmat(rng, p, n - p)
        t = np.zeros((n, n), dtype=np.complex128)
        t[:p, :p] = c
        t[:p, p:] = g
        u = _unitary(rng, n)
        t = u @ t @ u.conj().T
        if is_quasicontraction(t):
            return t
    raise ExhaustedError("quasicontraction rejection budget exhausted")


def gen_strict_similarity(
    dim: int, target_norm: float, seed: int
) -> tuple[np.ndarray, Certificate]:
    """Operator similar to a strict contraction, with its similarity certificate.

    T = R^-1 C R with ||C|| = target_norm < 1 and R well conditioned; the
    certificate is R*R scaled so that T*T <= T*AT <= A.
    """
    if not 0.0 < target_norm < 1.0:
        raise ValueError("target_norm must sit strictly between 0 and 1")
    rng = derived_rng(seed)
    c = _cmat(rng, dim, dim)
    c = (target_norm / max(linalg.spectral_norm(c), 1e-300)) * c
    q1 = _unitary(rng, dim)
    q2 = _unitary(rng, dim)
    sigma = rng.uniform(0.8, 1.6, size=dim)
    r = q1 @ np.diag(sigma).astype(np.complex128) @ q2
    r_inv = q2.conj().T @ np.diag(1.0 / sigma).astype(np.complex128) @ q1.conj().T
    t = r_inv @ c @ r
    a = normalize_certificate(t, r.conj().T @ r)
    return t, Certificate("matrix", matrix=a, provenance="USER")


def gen_shifted_host(a: float, m: int, seed: int, t0_norm: float = 1.5) -> ShiftedHostOperator:
    """Shifted-host instance with a random nonzero coupling of prescribed norm."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = derived_rng(seed)
    t0 = _cmat(rng, 1, m)
    while not np.any(t0):
        t0 = _cmat(rng, 1, m)
    t0 = (t0_norm / linalg.spectral_norm(t0)) * t0
    return ShiftedHostOperator(a, t0)


@dataclass
class SearchOutcome:
    """Batch result with replayable violations (seed, instance, check name)."""

    class_name: str
    trials: int
    violations: list = field(default_factory=list)
    telemetry: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "class": self.class_name,
            "trials": self.trials,
            "violations": [
                {"seed": int(s), "instance": inst, "check": name}
                for (s, inst, name) in self.violations
            ],
            "telemetry": self.telemetry,
        }


_DEFAULT_CHECKS = {
    "quasi_isometry": ("predicate", "suite"),
    "quasicontraction": ("predicate", "suite"),
    "strict_similarity": ("trichotomy", "certificate", "suite"),
    "symmetry_similarity": ("refutation",),
    "shifted_host": ("certificate", "suite"),
}


def _matrix_json(m: np.ndarray) -> dict:
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def search(
    class_name: str,
    dims,
    trials: int,
    seed: int,
    checks: tuple[str, ...] | None = None,
) -> SearchOutcome:
    """Generate ``trials`` seeded instances of a class and run the checkers.

    A violation is any check whose guaranteed verdict fails (for the symmetry
    class the guaranteed verdict is the refutation itself).  Deterministic in
    (class, dims, trials, seed, checks).
    """
    from .verify import (
        is_quasicontraction,
        is_quasi_isometry,
        quasi_isometry_residual,
        refute_symmetry_similarity_class,
        verify_lifting_suite,
    )

    if class_name not in CLASSES:
        raise UnknownClassError(f"unknown class {class_name!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    checks = tuple(checks) if checks else _DEFAULT_CHECKS[class_name]
    if isinstance(dims, int):
        dim_lo, dim_hi = dims, dims
    else:
        dim_lo, dim_hi = int(dims[0]), int(dims[1])
    if dim_lo < 2 and class_name != "symmetry_similarity":
        dim_lo = 2
    outcome = SearchOutcome(class_name, trials)
    accepted_rate: dict[int, int] = {}

    for i in range(trials):
        rng = derived_rng(seed, i)
        instance_json: dict = {}
        try:
            if class_name == "quasi_isometry":
                n = int(rng.integers(dim_lo, dim_hi + 1))
                t = gen_quasi_isometry(n, int(rng.integers(1, n)), seed * 100003 + i)
                instance_json = _matrix_json(t)
                if "predicate" in checks and not is_quasi_isometry(t, 1e-12):
                    outcome.violations.append((i, instance_json, "predicate"))
                if "suite" in checks:
                    q = build_quasicontraction_lifting(t)
                    rep = verify_lifting_suite(q, probes=8, probe_grade=4, seed=i)
                    if not rep.passed:
                        outcome.violations.append((i, instance_json, "suite"))
            elif class_name == "quasicontraction":
                n = int(rng.integers(dim_lo, dim_hi + 1))
                t = gen_quasicontraction(n, seed * 100003 + i)
                instance_json = _matrix_json(t)
                accepted_rate[n] = accepted_rate.get(n, 0) + 1
                if "predicate" in checks and not is_quasicontraction(t):
                    outcome.violations.append((i, instance_json, "predicate"))
                if "suite" in checks:
                    q = build_quasicontraction_lifting(t)
                    rep = verify_lifting_suite(q, probes=8, probe_grade=4, seed=i)
                    if not rep.passed:
                        outcome.violations.append((i, instance_json, "suite"))
            elif class_name == "strict_similarity":
                n = int(rng.integers(dim_lo, dim_hi + 1))
                t, cert = gen_strict_similarity(n, float(rng.uniform(0.3, 0.9)),
                                                seed * 100003 + i)
                instance_json = _matrix_json(t)
                if "trichotomy" in checks:
                    res = linalg.spectral_radius_trichotomy(t)
                    if res.verdict != "LT_ONE":
                        outcome.violations.append((i, instance_json, "trichotomy"))
                if "certificate" in checks:
                    rep = check_certificate_conditions(t, cert.matrix)
                    if not rep.passed:
                        outcome.violations.append((i, instance_json, "certificate"))
                if "suite" in checks:
                    s = build_natural_lifting(t, cert.matrix)
                    rep = verify_lifting_suite(s, probes=8, probe_grade=4, seed=i)
                    if not rep.passed:
                        outcome.violations.append((i, instance_json, "suite"))
            elif class_name == "symmetry_similarity":
                half_hi = max(1, dim_hi // 2)
                dim_half = int(rng.integers(1, half_hi + 1))
                rep = refute_symmetry_similarity_class(dim_half, 1, seed * 100003 + i)
                instance_json = {"dim_half": dim_half}
                if "refutation" in checks and not rep.passed:
                    outcome.violations.append((i, instance_json, "refutation"))
            else:  # shifted_host
                a = 1.0 if i % 2 == 0 else float(rng.uniform(1.1, 2.5))
                m = int(rng.integers(1, min(3, dim_hi) + 1))
                host = gen_shifted_host(a, m, seed * 100003 + i)
                instance_json = {"a": a, "T0": _matrix_json(host.t0)}
                cert = build_expansive_host_certificate(host)
                if "certificate" in checks:
                    rc = linalg.ranges_equal(
                        host.amtt(2, cert.c), host.amtat(2, cert.c)
                    )
                    if not rc.equal:
                        outcome.violations.append((i, instance_json, "certificate"))
                if "suite" in checks:
                    s = build_natural_lifting(host, cert)
                    rep = verify_lifting_suite(s, probes=8, probe_grade=4, seed=i)
                    if not rep.passed:
                        outcome.violations.append((i, instance_json, "suite"))
        except Exception as exc:  # noqa: BLE001 - recorded, then surfaced in counts
            outcome.violations.append(
                (i, instance_json or {"error": repr(exc)}, f"exception:{type(exc).__name__}")
            )
    if accepted_rate:
        outcome.telemetry["accepted_by_dim"] = {
            str(k): v for k, v in sorted(accepted_rate.items())
        }
    outcome.telemetry["checks"] = list(checks)
    return outcome
