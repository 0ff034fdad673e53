"""Command-line front door: lift, verify, search, example, spectral.

Exit codes: 0 construction/verification passed, 1 a checked property failed,
2 input error, 3 hypotheses failed or the probe was inconclusive.  Reports are
deterministic JSON: rerunning with the same flags and seed reproduces them
byte for byte.  LIFTLAB_TOL overrides the default check tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, jsonio, linalg
from .errors import HypothesesFailed, InputFormatError, LiftlabError
from .liftings import (
    build_expansive_host_certificate,
    build_left_invertible_lifting,
    build_natural_lifting,
    build_quasi_isometric_lifting,
    build_quasicontraction_lifting,
    certificate_from_trichotomy,
    check_certificate_conditions,
    normalize_certificate,
)
from .sampler import gen_shifted_host, gen_strict_similarity, search
from .verify import (
    check_null_space_alignment,
    check_range_invariance,
    check_restricted_norms,
    is_quasi_isometry,
    refute_symmetry_similarity_class,
    verify_lifting_suite,
)

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_HYPOTHESES = 3


def _default_tol() -> float:
    raw = os.environ.get("LIFTLAB_TOL")
    if raw is None:
        return 1e-9
    try:
        return float(raw)
    except ValueError as exc:
        raise InputFormatError(f"LIFTLAB_TOL is not a number: {raw!r}") from exc


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _read_matrix(path: str):
    return jsonio.parse_matrix_text(_read_text(path))


def _write_report(path: str | None, obj: dict):
    text = jsonio.dumps(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tool_header(config: dict) -> dict:
    return {"tool": {"name": "liftlab", "version": __version__}, "config": config}


def _cmd_lift(args) -> int:
    tol = _default_tol()
    t = _read_matrix(args.input)
    cert = None
    if args.cert:
        cert = _read_matrix(args.cert)

    if args.kind == "quasicontraction":
        op = build_quasicontraction_lifting(t, d_margin=args.d_margin)
    elif args.kind == "natural":
        if cert is None:
            auto = certificate_from_trichotomy(t)
            if auto is None:
                raise HypothesesFailed(
                    "certificate", "no certificate given and the stability probe "
                    "was inconclusive; pass --cert"
                )
            cert = auto.matrix
        op = build_natural_lifting(t, cert)
    else:  # leftinv
        if is_quasi_isometry(t, tol):
            op = build_left_invertible_lifting(t)
        else:
            if cert is None:
                auto = certificate_from_trichotomy(t)
                if auto is None:
                    raise HypothesesFailed(
                        "certificate", "operator is not quasi-isometric; pass a "
                        "similarity certificate via --cert"
                    )
                cert = auto.matrix
            cert = normalize_certificate(t, cert)
            q = build_quasi_isometric_lifting(t, cert)
            op = build_left_invertible_lifting(q)

    config = {
        "command": "lift",
        "kind": args.kind,
        "probes": args.probes,
        "probe_grade": args.grade,
        "seed": args.seed,
        "tol": tol,
        "d_margin": args.d_margin,
    }
    report = verify_lifting_suite(
        op, probes=args.probes, probe_grade=args.grade, seed=args.seed, tol=tol
    )
    payload = _tool_header(config)
    payload["operator"] = jsonio.operator_to_obj(op)
    payload["report"] = report.to_obj()
    _write_report(args.out, payload)
    print(f"lift {args.kind}: verification {report.overall}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_PROPERTY


def _cmd_verify(args) -> int:
    tol = _default_tol()
    import json

    try:
        obj = json.loads(_read_text(args.operator))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from exc
    embedded_config = None
    if isinstance(obj, dict) and "operator" in obj:
        embedded_config = obj.get("config") or {}
        op_obj = obj["operator"]
    else:
        op_obj = obj
    op = jsonio.operator_from_obj(op_obj)

    probes = args.probes
    grade = args.grade
    seed = args.seed
    if embedded_config and args.use_embedded_config:
        probes = int(embedded_config.get("probes", probes))
        grade = int(embedded_config.get("probe_grade", grade))
        seed = int(embedded_config.get("seed", seed))
        tol = float(embedded_config.get("tol", tol))

    report = verify_lifting_suite(
        op, probes=probes, probe_grade=grade, seed=seed, tol=tol
    )
    config = {
        "command": "verify",
        "probes": probes,
        "probe_grade": grade,
        "seed": seed,
        "tol": tol,
    }
    payload = _tool_header(config)
    payload["report"] = report.to_obj()
    if "range_invariance" in args.checks and op.kind == "NATURAL_21":
        payload["range_invariance"] = check_range_invariance(op, tol).to_obj()
    _write_report(args.out, payload)
    print(f"verify: {report.overall}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_PROPERTY


def _cmd_search(args) -> int:
    dims = tuple(int(x) for x in args.dims.split(","))
    if len(dims) == 1:
        dims = (dims[0], dims[0])
    checks = tuple(args.checks) if args.checks else None
    outcome = search(args.cls, dims, args.trials, args.seed, checks)
    config = {
        "command": "search",
        "class": args.cls,
        "dims": list(dims),
        "trials": args.trials,
        "seed": args.seed,
    }
    payload = _tool_header(config)
    payload["outcome"] = outcome.to_obj()
    _write_report(args.out, payload)
    n_bad = len(outcome.violations)
    print(f"search {args.cls}: {args.trials} trials, {n_bad} violations",
          file=sys.stderr)
    return EXIT_OK if n_bad == 0 else EXIT_PROPERTY


def _cmd_example(args) -> int:
    tol = _default_tol()
    if args.name == "ex35":
        rep = refute_symmetry_similarity_class(args.dim_half, args.samples, args.seed)
        config = {
            "command": "example", "name": "ex35", "dim_half": args.dim_half,
            "samples": args.samples, "seed": args.seed,
        }
        payload = _tool_header(config)
        payload["report"] = rep.to_obj()
        _write_report(args.out, payload)
        print(
            f"ex35: {rep.meta['refuted']}/{rep.meta['samples']} certificates "
            f"refuted, overall {rep.overall}",
            file=sys.stderr,
        )
        return EXIT_OK if rep.passed else EXIT_PROPERTY

    if args.name == "thm37":
        host = gen_shifted_host(args.a, args.m, args.seed)
        c = "auto" if args.c == "auto" else float(args.c)
        cert = build_expansive_host_certificate(host, c)
        s = build_natural_lifting(host, cert)
        suite = verify_lifting_suite(
            s, probes=args.probes, probe_grade=args.grade, seed=args.seed, tol=tol
        )
        inv = check_range_invariance(s, tol)
        norms = check_restricted_norms(host, cert, tol)
        align = check_null_space_alignment(host, cert, tol)
        config = {
            "command": "example", "name": "thm37", "a": args.a, "m": args.m,
            "c": args.c, "seed": args.seed, "probes": args.probes,
            "probe_grade": args.grade,
        }
        payload = _tool_header(config)
        payload["certificate_c"] = cert.c
        payload["operator"] = jsonio.operator_to_obj(s)
        payload["report"] = suite.to_obj()
        payload["range_invariance"] = inv.to_obj()
        payload["restricted_norms"] = norms.to_obj()
        payload["null_space_alignment"] = align.to_obj()
        _write_report(args.out, payload)
        ok = suite.passed and norms.passed and align.passed
        print(f"thm37: suite {suite.overall}", file=sys.stderr)
        return EXIT_OK if ok else EXIT_PROPERTY

    # cor28
    t, cert = gen_strict_similarity(args.dim, args.target_norm, args.seed)
    tri = linalg.spectral_radius_trichotomy(t)
    if tri.verdict == "INCONCLUSIVE":
        return EXIT_HYPOTHESES
    conds = check_certificate_conditions(t, cert.matrix, tol)
    s = build_natural_lifting(t, cert.matrix)
    suite = verify_lifting_suite(
        s, probes=args.probes, probe_grade=args.grade, seed=args.seed, tol=tol
    )
    config = {
        "command": "example", "name": "cor28", "dim": args.dim,
        "target_norm": args.target_norm, "seed": args.seed,
        "probes": args.probes, "probe_grade": args.grade,
    }
    payload = _tool_header(config)
    payload["instance"] = jsonio.matrix_to_obj(t)
    payload["certificate"] = jsonio.matrix_to_obj(cert.matrix)
    payload["trichotomy"] = {
        "verdict": tri.verdict, "terms_used": tri.terms_used,
        "residual": tri.residual,
    }
    payload["conditions"] = conds.to_obj()
    payload["report"] = suite.to_obj()
    _write_report(args.out, payload)
    ok = tri.verdict == "LT_ONE" and conds.passed and suite.passed
    print(f"cor28: trichotomy {tri.verdict}, suite {suite.overall}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_PROPERTY


def _cmd_spectral(args) -> int:
    t = _read_matrix(args.input)
    res = linalg.spectral_radius_trichotomy(t, args.max_terms, args.blow_up)
    config = {
        "command": "spectral", "max_terms": args.max_terms, "blow_up": args.blow_up,
    }
    payload = _tool_header(config)
    payload["result"] = {
        "verdict": res.verdict,
        "terms_used": res.terms_used,
        "residual": res.residual,
        "certificate": (
            jsonio.matrix_to_obj(res.certificate)
            if res.certificate is not None
            else None
        ),
    }
    _write_report(args.out, payload)
    print(f"spectral: {res.verdict}", file=sys.stderr)
    return EXIT_OK if res.verdict != "INCONCLUSIVE" else EXIT_HYPOTHESES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liftlab",
        description="Construct and verify quasi-isometric liftings at desk scale.",
    )
    ap.add_argument("--version", action="version", version=f"liftlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    lift = sub.add_parser("lift", help="construct a lifting and verify it")
    lift.add_argument("kind", choices=["natural", "quasicontraction", "leftinv"])
    lift.add_argument("--input", required=True, help="matrix JSON path or -")
    lift.add_argument("--cert", help="certificate matrix JSON path")
    lift.add_argument("--out", help="output JSON path (default stdout)")
    lift.add_argument("--d-margin", type=float, default=0.0)
    lift.add_argument("--probes", type=int, default=24)
    lift.add_argument("--grade", type=int, default=6)
    lift.add_argument("--seed", type=int, default=0)
    lift.set_defaults(func=_cmd_lift)

    ver = sub.add_parser("verify", help="re-verify a serialized lifting")
    ver.add_argument("operator", help="operator JSON path or -")
    ver.add_argument("--probes", type=int, default=24)
    ver.add_argument("--grade", type=int, default=6)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--checks", nargs="*", default=[])
    ver.add_argument(
        "--use-embedded-config", action="store_true",
        help="reuse the probe configuration stored in a lift output file",
    )
    ver.add_argument("--out", help="output JSON path (default stdout)")
    ver.set_defaults(func=_cmd_verify)

    sr = sub.add_parser("search", help="seeded batch search over an operator class")
    sr.add_argument("--class", dest="cls", required=True)
    sr.add_argument("--dims", default="2,6", help="LO,HI dimension range")
    sr.add_argument("--trials", type=int, required=True)
    sr.add_argument("--seed", type=int, required=True)
    sr.add_argument("--checks", nargs="*", default=[])
    sr.add_argument("--out", help="output JSON path (default stdout)")
    sr.set_defaults(func=_cmd_search)

    ex = sub.add_parser("example", help="reproduce a packaged construction")
    ex.add_argument("name", choices=["ex35", "thm37", "cor28"])
    ex.add_argument("--dim-half", type=int, default=1)
    ex.add_argument("--samples", type=int, default=100)
    ex.add_argument("--a", type=float, default=2.0)
    ex.add_argument("--m", type=int, default=1)
    ex.add_argument("--c", default="auto")
    ex.add_argument("--dim", type=int, default=4)
    ex.add_argument("--target-norm", type=float, default=0.6)
    ex.add_argument("--probes", type=int, default=24)
    ex.add_argument("--grade", type=int, default=6)
    ex.add_argument("--seed", type=int, required=True)
    ex.add_argument("--out", help="output JSON path (default stdout)")
    ex.set_defaults(func=_cmd_example)

    sp = sub.add_parser("spectral", help="spectral-radius trichotomy probe")
    sp.add_argument("--input", required=True, help="matrix JSON path or -")
    sp.add_argument("--max-terms", type=int, default=500)
    sp.add_argument("--blow-up", type=float, default=1e8)
    sp.add_argument("--out", help="output JSON path (default stdout)")
    sp.set_defaults(func=_cmd_spectral)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except HypothesesFailed as exc:
        print(f"hypotheses failed: {exc.clause}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES
    except (InputFormatError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LiftlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
