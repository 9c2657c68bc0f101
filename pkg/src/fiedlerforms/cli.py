"""Command-line entry point.

Exit codes: 0 success, 1 a requested check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from .blockpencil import BlockPencil, format_symbolic, is_block_symmetric
from .congruence import (
    CertificateError,
    brute_force_oracle,
    gfp_congruence,
    main_permutation,
)
from .families import (
    FamilyForm,
    as_condition,
    as_violations,
    build_family,
    linearization_conditions,
    skeleton,
)
from .fiedler import GfprSpec, build_gfpr, gfp_T
from .matpoly import (
    MatrixPolynomial,
    is_hermitian,
    is_symmetric,
    matrix_from_json,
    random_polynomial,
)
from .minbases import is_minimal_basis, recover_Q
from .suite import run_suite
from .tuples import (
    csf,
    format_tuple,
    heads,
    index_type,
    parse_tuple,
    satisfies_sip,
    shift,
)
from .verify import DEFAULT_TOL, SingularPolynomialError, check_strong_linearization

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- I/O ----------------------------------------------------------------------


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_poly(path: str) -> MatrixPolynomial:
    return MatrixPolynomial.from_json_dict(_read_json(path))


def _load_pencil(path: str) -> BlockPencil:
    return BlockPencil.from_json_dict(_read_json(path))


def _load_assignment(path: str | None, count: int, n: int) -> tuple[np.ndarray, ...]:
    """A JSON list of matrices, or identities when no file is given."""
    if path is None:
        return tuple(np.eye(n, dtype=int).astype(object) for _ in range(count))
    data = _read_json(path)
    fld = data.get("field", "rational") if isinstance(data, dict) else "rational"
    mats = data["matrices"] if isinstance(data, dict) else data
    return tuple(matrix_from_json(m, fld) for m in mats)


def _tuple_arg(text: str) -> tuple[int, ...]:
    try:
        return parse_tuple(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text if text is not None else json.dumps(payload, indent=2, sort_keys=True))


# --- commands -----------------------------------------------------------------


def cmd_poly_inspect(args) -> int:
    P = _load_poly(args.file)
    info = {
        "n": P.n,
        "k": P.k,
        "degree": P.degree(),
        "field": P.field,
        "symmetric": is_symmetric(P),
        "hermitian": is_hermitian(P),
    }
    _emit(args, info, "\n".join(f"{key}: {val}" for key, val in info.items()))
    return EXIT_OK


def cmd_poly_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    P = random_polynomial(rng, args.n, args.k, symmetric=args.symmetric)
    print(P.dumps())
    return EXIT_OK


def cmd_pencil_print(args) -> int:
    L = _load_pencil(args.file)
    P = _load_poly(args.poly) if args.poly else None
    info = {"rows": L.rows, "cols": L.cols, "n": L.n, "block_symmetric": L.rows == L.cols and is_block_symmetric(L)}
    _emit(args, {**info, "grid": format_symbolic(L, P)}, format_symbolic(L, P))
    return EXIT_OK


def cmd_tuple(args) -> int:
    t = args.tuple
    op = args.tuple_cmd
    if op == "sip":
        ok = satisfies_sip(t)
        _emit(args, {"tuple": list(t), "sip": ok}, str(ok).lower())
        return EXIT_OK if ok else EXIT_FAILED
    if op == "csf":
        form = csf(t)
        _emit(args, {"tuple": list(t), "csf": list(form), "text": format_tuple(form)}, format_tuple(form))
    elif op == "heads":
        hs = sorted(heads(t), reverse=True)
        _emit(args, {"tuple": list(t), "heads": hs}, "{" + ",".join(map(str, hs)) + "}")
    else:
        kind = index_type(t, args.x)
        _emit(args, {"tuple": list(t), "x": args.x, "type": kind.value}, f"Type {kind.value}")
    return EXIT_OK


def _spec_from_args(args, P: MatrixPolynomial) -> GfprSpec:
    t_v = shift(args.tv, -P.k) if args.tv_shifted else args.tv
    Z_w = _load_assignment(args.zw, len(args.tw), P.n)
    Z_v = _load_assignment(args.zv, len(t_v), P.n)
    spec = GfprSpec(args.h, args.tw, t_v, Z_w, Z_v)
    spec.validate(P.k, P.n)
    return spec


def cmd_gfpr_build(args) -> int:
    P = _load_poly(args.poly)
    L = build_gfpr(P, _spec_from_args(args, P))
    _emit(args, L.to_json_dict(), L.dumps())
    return EXIT_OK


def cmd_gfp_t(args) -> int:
    L = gfp_T(_load_poly(args.poly))
    _emit(args, L.to_json_dict(), L.dumps())
    return EXIT_OK


def cmd_family_skeleton(args) -> int:
    L = skeleton(_load_poly(args.poly), args.tag)
    _emit(args, L.to_json_dict(), L.dumps())
    return EXIT_OK


def cmd_family_build(args) -> int:
    P = _load_poly(args.poly)
    form = FamilyForm.from_json_dict(_read_json(args.form))
    L = build_family(P, form)
    report = linearization_conditions(form, P)
    payload = {"pencil": L.to_json_dict(), "conditions": report.conditions, "linearization_conditions_hold": report.holds}
    _emit(args, payload)
    return EXIT_OK


def cmd_family_check_as(args) -> int:
    M, P = _load_pencil(args.pencil), _load_poly(args.poly)
    ok, _ = as_condition(M, P)
    bad = as_violations(M, P)
    _emit(args, {"as_condition": ok, "violated_s": bad}, "holds" if ok else f"violated at s = {bad}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_minbases_check(args) -> int:
    ok = is_minimal_basis(_load_pencil(args.pencil))
    _emit(args, {"minimal_basis": ok}, str(ok).lower())
    return EXIT_OK if ok else EXIT_FAILED


def cmd_minbases_recover(args) -> int:
    C = _load_pencil(args.pencil)
    body_rows = list(range(1, args.s2 + 2))
    body_cols = list(range(1, args.s1 + 2))
    Q = recover_Q(C, body_rows, body_cols)
    if args.poly:
        P = _load_poly(args.poly)
        match = Q == P
        _emit(args, {"recovered": Q.to_json_dict(), "equals_poly": match})
        return EXIT_OK if match else EXIT_FAILED
    _emit(args, Q.to_json_dict(), Q.dumps())
    return EXIT_OK


def cmd_congruence_reduce(args) -> int:
    P = _load_poly(args.poly)
    cert = main_permutation(P, _spec_from_args(args, P))
    _emit(args, cert.to_json_dict())
    return EXIT_OK


def cmd_congruence_oracle(args) -> int:
    P = _load_poly(args.poly)
    L = _load_pencil(args.pencil) if args.pencil else build_gfpr(P, _spec_from_args(args, P))
    cert = brute_force_oracle(L, P)
    if cert is None:
        _emit(args, {"found": False}, "no permutation places the pencil in a family")
        return EXIT_FAILED
    _emit(args, {"found": True, **cert.to_json_dict()})
    return EXIT_OK


def cmd_congruence_gfp(args) -> int:
    cert = gfp_congruence(_load_poly(args.poly))
    _emit(args, cert.to_json_dict())
    return EXIT_OK


def cmd_verify_linearize(args) -> int:
    L, P = _load_pencil(args.pencil), _load_poly(args.poly)
    report = check_strong_linearization(L, P, args.tol)
    text = f"{'PASS' if report.passed else 'FAIL'} max chordal distance {report.max_distance:.3e} (tol {args.tol:g})"
    _emit(args, report.to_json_dict(), text)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_suite(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_suite(args.seed, only)
    if args.json:
        payload = {"seed": args.seed, "criteria": [r.to_json_dict() for r in results]}
        if not args.timings:
            for item in payload["criteria"]:
                item.pop("elapsed_s")
        payload["passed"] = all(r.ok for r in results)
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


# --- parser -------------------------------------------------------------------


def _add_spec_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--h", type=int, required=required, help="parameter h, 0 <= h < k")
    p.add_argument("--tw", type=_tuple_arg, default=(), help='outer tuple on the w side, e.g. "(0:1,0)"')
    p.add_argument("--tv", type=_tuple_arg, default=(), help="outer tuple on the v side (negative indices)")
    p.add_argument("--tv-shifted", action="store_true", help="read --tv as k + t_v (nonnegative)")
    p.add_argument("--zw", help="JSON file with the matrices assigned to --tw (default: identities)")
    p.add_argument("--zv", help="JSON file with the matrices assigned to --tv (default: identities)")


def build_parser() -> argparse.ArgumentParser:
    top_common = argparse.ArgumentParser(add_help=False)
    top_common.add_argument("--json", action="store_true", help="machine-readable output")
    # SUPPRESS keeps a subcommand from resetting a --json given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="fiedlerforms",
        description="Block-symmetric Fiedler-like linearizations and their block-structure families.",
        parents=[top_common],
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    poly = sub.add_parser("poly", allow_abbrev=False, help="matrix polynomials").add_subparsers(dest="poly_cmd", required=True)
    p = poly.add_parser("inspect", allow_abbrev=False, parents=[common], help="size, grade, degree and symmetry")
    p.add_argument("file")
    p.set_defaults(func=cmd_poly_inspect)
    p = poly.add_parser("random", allow_abbrev=False, parents=[common], help="random integer polynomial as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symmetric", action="store_true")
    p.set_defaults(func=cmd_poly_random)

    pencil = sub.add_parser("pencil", allow_abbrev=False, help="block pencils").add_subparsers(dest="pencil_cmd", required=True)
    p = pencil.add_parser("print", allow_abbrev=False, parents=[common], help="symbolic block grid")
    p.add_argument("file")
    p.add_argument("--poly", help="name blocks after the coefficients of this polynomial")
    p.set_defaults(func=cmd_pencil_print)

    tup = sub.add_parser("tuple", allow_abbrev=False, help="index tuples").add_subparsers(dest="tuple_cmd", required=True)
    for name, helptext in (("sip", "successor infix property"), ("csf", "column standard form"), ("heads", "string ends")):
        p = tup.add_parser(name, allow_abbrev=False, parents=[common], help=helptext)
        p.add_argument("tuple", type=_tuple_arg)
        p.set_defaults(func=cmd_tuple)
    p = tup.add_parser("type", allow_abbrev=False, parents=[common], help="type of an appended index")
    p.add_argument("tuple", type=_tuple_arg)
    p.add_argument("x", type=int)
    p.set_defaults(func=cmd_tuple)

    gfpr = sub.add_parser("gfpr", allow_abbrev=False, help="block-symmetric GFPR").add_subparsers(dest="gfpr_cmd", required=True)
    p = gfpr.add_parser("build", allow_abbrev=False, parents=[common], help="build the pencil")
    p.add_argument("--poly", required=True)
    _add_spec_args(p)
    p.set_defaults(func=cmd_gfpr_build)

    gfp = sub.add_parser("gfp", allow_abbrev=False, help="block-tridiagonal GFP").add_subparsers(dest="gfp_cmd", required=True)
    p = gfp.add_parser("t", allow_abbrev=False, parents=[common], help="build the pencil")
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_gfp_t)

    fam = sub.add_parser("family", allow_abbrev=False, help="structured families").add_subparsers(dest="family_cmd", required=True)
    p = fam.add_parser("skeleton", allow_abbrev=False, parents=[common], help="zero-parameter member")
    p.add_argument("--tag", choices=["O1", "O2", "E1", "E2"], required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_family_skeleton)
    p = fam.add_parser("build", allow_abbrev=False, parents=[common], help="member from a parameter file")
    p.add_argument("--form", required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_family_build)
    p = fam.add_parser("check-as", allow_abbrev=False, parents=[common], help="antidiagonal-sum condition of a body")
    p.add_argument("--pencil", required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_family_check_as)

    mb = sub.add_parser("minbases", allow_abbrev=False, help="minimal bases").add_subparsers(dest="minbases_cmd", required=True)
    p = mb.add_parser("check", allow_abbrev=False, parents=[common], help="exact minimal-basis test of a pencil")
    p.add_argument("--pencil", required=True)
    p.set_defaults(func=cmd_minbases_check)
    p = mb.add_parser("recover", allow_abbrev=False, parents=[common], help="polynomial from a leading-body pencil")
    p.add_argument("--pencil", required=True)
    p.add_argument("--s1", type=int, required=True, help="body has s1 + 1 block columns")
    p.add_argument("--s2", type=int, required=True, help="body has s2 + 1 block rows")
    p.add_argument("--poly", help="compare the result with this polynomial")
    p.set_defaults(func=cmd_minbases_recover)

    cg = sub.add_parser("congruence", allow_abbrev=False, help="block-permutation congruences").add_subparsers(
        dest="congruence_cmd", required=True
    )
    p = cg.add_parser("reduce", allow_abbrev=False, parents=[common], help="certified permutation for a GFPR")
    p.add_argument("--poly", required=True)
    _add_spec_args(p)
    p.set_defaults(func=cmd_congruence_reduce)
    p = cg.add_parser("oracle", allow_abbrev=False, parents=[common], help="exhaustive search (k <= 8)")
    p.add_argument("--poly", required=True)
    p.add_argument("--pencil", help="pencil to search; otherwise built from --h, --tw and --tv")
    _add_spec_args(p, required=False)
    p.set_defaults(func=cmd_congruence_oracle)
    p = cg.add_parser("gfp", allow_abbrev=False, parents=[common], help="permutation for the block-tridiagonal GFP (odd k)")
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_congruence_gfp)

    ver = sub.add_parser("verify", allow_abbrev=False, help="spectral checks").add_subparsers(dest="verify_cmd", required=True)
    p = ver.add_parser("linearize", allow_abbrev=False, parents=[common], help="compare eigenvalues with the companion form")
    p.add_argument("--pencil", required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_verify_linearize)

    p = sub.add_parser("suite", allow_abbrev=False, parents=[common], help="run the acceptance battery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="include run times in JSON output")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    oracle = getattr(args, "command", None) == "congruence" and args.congruence_cmd == "oracle"
    if oracle and args.pencil is None and args.h is None:
        print("error: oracle needs --pencil or --h", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, SingularPolynomialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
