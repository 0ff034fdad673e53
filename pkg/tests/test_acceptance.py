"""Acceptance suite: the eight release criteria, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every criterion pins its tolerance here, nothing is calibrated later.
"""

import json

import numpy as np

from liftlab import jsonio, linalg
from liftlab.cli import main as cli_main
from liftlab.graded import GradedVector
from liftlab.hosts import host_norm_wt0
from liftlab.liftings import (
    apply,
    build_expansive_host_certificate,
    build_left_invertible_lifting,
    build_natural_lifting,
    build_quasicontraction_lifting,
    gram_blocks,
)
from liftlab.sampler import (
    derived_rng,
    gen_quasicontraction,
    gen_shifted_host,
    gen_strict_similarity,
)
from liftlab.verify import (
    check_null_space_alignment,
    check_range_invariance,
    check_restricted_norms,
    kernel_gap,
    refute_symmetry_similarity_class,
    swap_similarity_operator,
    verify_lifting_suite,
)


def _conclude(name: str, failures: list):
    ok = not failures
    print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, f"{name}: {failures[:5]}"


def test_criterion_1_swap_class_refutation():
    failures = []
    t = swap_similarity_operator(1)
    if linalg.spectral_norm(t @ t - np.eye(2)) > 1e-12:
        failures.append("T^2 != I")
    if abs(linalg.spectral_norm(t) - 2.0) > 1e-12:
        failures.append("||T|| != 2")
    rep = refute_symmetry_similarity_class(1, 100, seed=7)
    if rep.check("fixed_point").residual > 1e-10:
        failures.append(f"fixed-point residual {rep.check('fixed_point').residual}")
    if rep.meta["refuted"] != 100:
        failures.append(f"only {rep.meta['refuted']}/100 refuted")
    if not rep.check("certificates_differ_from_gram").verdict == "PASS":
        failures.append("some certificate collapsed onto T*T")
    if not rep.passed:
        failures.append("overall refutation report failed")
    _conclude("criterion 1: swap-similarity class refutation", failures)


def test_criterion_2_natural_lifting_round_trip():
    failures = []
    for i in range(50):
        rng = derived_rng(200, i)
        dim = int(rng.integers(2, 7))
        target = float(rng.uniform(0.3, 0.9))
        t, cert = gen_strict_similarity(dim, target, seed=1000 + i)
        s = build_natural_lifting(t, cert.matrix)
        rep = verify_lifting_suite(s, probes=10, probe_grade=6, seed=i)
        if rep.check("quasi_isometry").residual > 1e-9:
            failures.append((i, "quasi-isometry", rep.check("quasi_isometry").residual))
        if rep.check("lifting_identity").residual > 1e-12:
            failures.append((i, "lifting", rep.check("lifting_identity").residual))
        if rep.meta["gram_margin"] < 1e-6:
            failures.append((i, "margin", rep.meta["gram_margin"]))
        if rep.check("ssh_invariance").residual > 1e-10:
            failures.append((i, "ssh", rep.check("ssh_invariance").residual))
        if not rep.passed:
            failures.append((i, "overall", rep.overall))
    _conclude("criterion 2: natural lifting round trip on 50 instances", failures)


def test_criterion_3_quasicontraction_bound_tightness():
    failures = []
    q0 = build_quasicontraction_lifting(np.array([[1.0, 1.0], [0.0, 0.0]]))
    if abs(q0.meta["d_scale"] - np.sqrt(1.5)) > 1e-13:
        failures.append("scalar D is not sqrt(1.5)")
    w, _ = linalg.hermitian_eig(gram_blocks(q0).block("H"))
    if abs(w[0] - 0.5) > 1e-12 or abs(w[-1] - 3.0) > 1e-12:
        failures.append(f"H-block eigenvalues {w} != (0.5, 3)")

    for i in range(200):
        rng = derived_rng(300, i)
        dim = int(rng.integers(2, 7))
        t = gen_quasicontraction(dim, seed=2000 + i)
        q = build_quasicontraction_lifting(t)
        margin = gram_blocks(q).min_eigenvalue
        if margin < 0.5 - 1e-9:
            failures.append((i, "margin", margin))
        d = q.shape.fiber_dim
        for k in range(3):
            prng = derived_rng(301, i * 10 + k)
            fibers = {
                int(g): prng.standard_normal(d) + 1j * prng.standard_normal(d)
                for g in prng.integers(0, 7, size=3)
            }
            v = GradedVector(q.shape, fibers)
            if v.norm() == 0.0:
                continue
            drift = abs(apply(q, v).norm() - v.norm()) / v.norm()
            if drift > 1e-12:
                failures.append((i, "fiber probe", drift))
    _conclude("criterion 3: quasicontraction bound attained and kept", failures)


def test_criterion_4_range_invariance_biconditional():
    failures = []
    for i in range(50):
        host = gen_shifted_host(1.0, 1 + i % 3, seed=4000 + i)
        s = build_natural_lifting(host, build_expansive_host_certificate(host))
        rep = check_range_invariance(s)
        if rep.check("k1_vanishes").verdict != "PASS":
            failures.append((i, "a=1 lhs"))
        if rep.check("range_in_fixed_space").verdict != "PASS":
            failures.append((i, "a=1 rhs"))
        if rep.check("equivalence").verdict != "PASS":
            failures.append((i, "a=1 disagreement"))
    for i in range(50):
        rng = derived_rng(400, i)
        a = float(rng.uniform(1.1, 2.5))
        host = gen_shifted_host(a, 1 + i % 3, seed=4100 + i)
        s = build_natural_lifting(host, build_expansive_host_certificate(host))
        rep = check_range_invariance(s)
        if rep.check("k1_vanishes").verdict != "FAIL":
            failures.append((i, "a>1 lhs"))
        if rep.check("range_in_fixed_space").verdict != "FAIL":
            failures.append((i, "a>1 rhs"))
        if rep.check("equivalence").verdict != "PASS":
            failures.append((i, "a>1 disagreement"))
    _conclude("criterion 4: range-invariance biconditional, zero disagreements",
              failures)


def test_criterion_5_null_space_alignment():
    failures = []
    for i in range(25):
        rng = derived_rng(500, i)
        a = 1.0 if i % 2 == 0 else float(rng.uniform(1.2, 2.2))
        host = gen_shifted_host(a, 1 + i % 3, seed=5000 + i)
        cert = build_expansive_host_certificate(host)
        rep = check_null_space_alignment(host, cert)
        if rep.check("null_spaces_align").residual > 1e-8:
            failures.append((i, "host angle", rep.check("null_spaces_align").residual))
        if rep.check("statements_agree").verdict != "PASS":
            failures.append((i, "host statements"))
    for i in range(25):
        rng = derived_rng(501, i)
        dim = int(rng.integers(2, 7))
        t, cert = gen_strict_similarity(dim, float(rng.uniform(0.3, 0.9)),
                                        seed=5100 + i)
        rep = check_null_space_alignment(t, cert.matrix)
        if rep.check("null_spaces_align").residual > 1e-8:
            failures.append((i, "similar angle"))
        if rep.check("statements_agree").verdict != "PASS":
            failures.append((i, "similar statements"))
    _conclude("criterion 5: null-space alignment and statement agreement", failures)


def test_criterion_6_kernel_gap_cross_formula():
    failures = []
    for i in range(25):
        host = gen_shifted_host(1.0, 1 + i % 3, seed=6000 + i)
        s = build_left_invertible_lifting(host)
        res = kernel_gap(s, probe_grade=6)
        if not res.agreement:
            failures.append((i, "disagreement", res.sin_gap))
        if res.sin_gap > 1e-8:
            failures.append((i, "angle", res.sin_gap))
    _conclude("criterion 6: kernel-gap formulas agree on 25 instances", failures)


def test_criterion_7_expansive_host_pipeline():
    failures = []
    for i in range(25):
        rng = derived_rng(700, i)
        a = float(rng.uniform(1.0, 2.5))
        host = gen_shifted_host(a, 1 + i % 3, seed=7000 + i)
        cert = build_expansive_host_certificate(host)
        rc = linalg.ranges_equal(host.amtt(2, cert.c), host.amtat(2, cert.c))
        if not rc.equal:
            failures.append((i, "ranges"))
        s = build_natural_lifting(host, cert)
        rep = verify_lifting_suite(s, probes=8, probe_grade=5, seed=i)
        if not rep.passed:
            failures.append((i, "lifting suite"))
        norms = check_restricted_norms(host, cert)
        nu = host_norm_wt0(host)
        got = norms.check("restricted_contraction_norm").residual
        if abs(got - nu / cert.c) > 1e-10:
            failures.append((i, "contraction norm", got, nu / cert.c))
        got2 = norms.check("restricted_similarity_norm").residual
        expected2 = linalg.spectral_norm(host.t0) / cert.c
        if abs(got2 - expected2) > 1e-10:
            failures.append((i, "similarity norm", got2, expected2))
    _conclude("criterion 7: expansive-host certificate pipeline", failures)


def test_criterion_8_determinism_and_serialization(tmp_path):
    failures = []
    # byte-identical CLI reruns
    t_path = tmp_path / "t.json"
    t_path.write_text(
        jsonio.dumps(jsonio.matrix_to_obj(0.5 * np.eye(3, dtype=complex)))
    )
    pairs = [
        (["lift", "natural", "--input", str(t_path), "--seed", "3"], "lift"),
        (["example", "ex35", "--dim-half", "1", "--samples", "25", "--seed", "7"],
         "ex35"),
        (["example", "thm37", "--a", "2", "--m", "1", "--seed", "3"], "thm37"),
        (["search", "--class", "quasicontraction", "--dims", "2,4",
          "--trials", "8", "--seed", "5"], "search"),
    ]
    for argv, label in pairs:
        outs = []
        for run in (0, 1):
            out = tmp_path / f"{label}_{run}.json"
            code = cli_main(argv + ["--out", str(out)])
            if code != 0:
                failures.append((label, "exit", code))
            outs.append(out.read_bytes())
        if outs[0] != outs[1]:
            failures.append((label, "not byte-identical"))

    # operator JSON round trip is exact
    lifted = json.loads((tmp_path / "lift_0.json").read_text())
    op_obj = lifted["operator"]
    text = jsonio.dumps(op_obj)
    back = jsonio.operator_from_obj(op_obj)
    if jsonio.dumps(jsonio.operator_to_obj(back)) != text:
        failures.append(("operator", "round trip not exact"))
    _conclude("criterion 8: determinism and exact serialization", failures)
