"""Command-line interface: ``qsklyanin <command> ...``.

Every command is a thin wrapper over library calls.  Parameters are exact
rationals or rational-function text (``q`` is written ``s^2``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import identities
from .awpoly import NormalizationVanishes, NotInvariant, aw_eigenvalue, aw_polynomial, eigencheck, matrix_rep
from .catalog import CATALOG, AWParams, by_name, make_ABCD
from .exactalg import ExactAlgError, ParseError, RatF, parse_ratf, sym
from .qop import QOp, SymPoly, chi, one, op_apply, op_compose, op_equal
from .sheun import (
    BASIS_WORDS,
    NotHeunShape,
    NotReducible,
    QHawParams,
    build_qhaw,
    extract_heun_data,
    parse_word,
    reduce_quadratic,
    solve_raising,
    verify_no_new_constraints,
)

SEED_ENV = "QSKLYANIN_SEED"


class UsageError(Exception):
    pass


def _emit(obj, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _ratf(text: str) -> RatF:
    try:
        return parse_ratf(text)
    except (ParseError, ExactAlgError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _operand(spec: str) -> QOp:
    """A catalog name or ``file:path.json``."""
    if spec.startswith("file:"):
        try:
            return QOp.from_json(Path(spec[5:]).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read operator from {spec[5:]}: {exc}") from None
    try:
        return by_name(spec)
    except KeyError:
        raise UsageError(f"unknown operator {spec!r}; known: {' '.join(CATALOG)}") from None


def _function(spec: str) -> RatF:
    """``chi:N``, ``one`` or a rational function of z."""
    if spec == "one":
        return one().to_laurent()
    if spec.startswith("chi:"):
        try:
            n = int(spec[4:])
        except ValueError:
            raise UsageError(f"bad chi index in {spec!r}") from None
        if n < 0:
            raise UsageError("chi index must be non-negative")
        return chi(n).to_laurent()
    return _ratf(spec)


def _ratf_dict(f: RatF) -> dict:
    return {"num": f.num.to_text(), "den": f.den.to_text()}


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    try:
        ids = identities.resolve_ids(args.suite)
    except identities.UnknownIdentity as exc:
        raise UsageError(f"unknown identity {exc.args[0]!r}") from None
    report = identities.run_suite(ids, jobs=args.jobs, seed=args.seed, fast=args.fast, timings=args.timings)
    report["suite"] = args.suite
    out = identities.report_json(report) if args.format == "json" else identities.report_text(report)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return identities.exit_code(report)


def cmd_op(args) -> int:
    if args.action == "apply":
        if not args.name or not args.to:
            raise UsageError("op apply needs --name and --to")
        res = op_apply(_operand(args.name), _function(args.to))
        _emit(_ratf_dict(res), args.format, res.to_text())
        return 0
    if args.action == "compose":
        if not args.names:
            raise UsageError("op compose needs --names")
        ops = [_operand(n) for n in args.names.split(",") if n]
        out = ops[0]
        for o in ops[1:]:
            out = op_compose(out, o)
        sys.stdout.write(out.to_json() + "\n")
        return 0
    if args.action == "equal":
        if not args.lhs or not args.rhs:
            raise UsageError("op equal needs --lhs and --rhs")
        eq = op_equal(_operand(args.lhs), _operand(args.rhs))
        sys.stdout.write(("true" if eq else "false") + "\n")
        return 0 if eq else 1
    raise UsageError(f"unknown op action {args.action!r}")


def _aw_params(args) -> AWParams:
    vals = {k: _ratf(getattr(args, k)) if getattr(args, k) is not None else sym(k) for k in "abcd"}
    if args.r < 1:
        raise UsageError("--r must be positive")
    return AWParams(vals["a"], vals["b"], vals["c"], vals["d"], args.r)


def cmd_aw(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    p = _aw_params(args)
    try:
        poly = aw_polynomial(args.n, p)
    except NormalizationVanishes as exc:
        _emit({"n": args.n, "error": "NormalizationVanishes", "detail": str(exc)}, args.format, f"NormalizationVanishes: {exc}")
        return 1
    obj = {"n": args.n, "r": p.r, "chi": {str(k): v.to_text() for k, v in poly.coords().items()}}
    text = poly.to_text()
    if args.eigen:
        from .catalog import make_AW

        res = eigencheck(make_AW(p), poly)
        ok = res.is_eigen and res.eigenvalue == aw_eigenvalue(args.n, p)
        obj["eigenvalue"] = res.eigenvalue.to_text()
        obj["eigen_ok"] = ok
        text += f"\neigenvalue: {res.eigenvalue.to_text()}\neigen_ok: {ok}"
    _emit(obj, args.format, text)
    return 0


def cmd_rep(args) -> int:
    if args.N < 1:
        raise UsageError("--N must be at least 1")
    s = sym("s")
    if args.skip_trunc:
        t = sym("t")
    elif args.t is not None:
        t = _ratf(args.t)
    else:
        t = s ** (args.N - 1)
    gens = make_ABCD(t)
    mats = {}
    try:
        for k in "ABCD":
            mats[k] = matrix_rep(gens[k], args.N)
    except NotInvariant as exc:
        leak = {str(n): v.to_text() for n, v in sorted(exc.leakage.items())}
        _emit(
            {"N": args.N, "error": "NotInvariant", "generator": k, "leakage": leak},
            args.format,
            f"NotInvariant: {k} leaves span{{1..chi_{args.N - 1}}}\n"
            + "\n".join(f"  chi_{n}: {v}" for n, v in leak.items()),
        )
        return 1
    q = s**2
    one_ = identities.RepMatrix.identity(args.N)
    claims = identities.dsa_claims(mats["A"], mats["B"], mats["C"], mats["D"], one_, q)
    claims += identities.casimir_claims(mats["A"], mats["B"], mats["C"], mats["D"], one_, q, t)
    checks = {c.label: identities.check_claim(c, refit=False)[0] for c in claims}
    ok = all(v == "pass" for v in checks.values())
    obj = {"N": args.N, "t": t.to_text(), "matrices": {k: m.to_text().split("\n") for k, m in mats.items()}, "checks": checks}
    lines = [f"N = {args.N}, t = {t.to_text()}"]
    for k, m in mats.items():
        lines.append(f"{k}:")
        lines.extend("  " + row for row in m.to_text().split("\n"))
    lines.extend(f"{v:5s} {k}" for k, v in checks.items())
    _emit(obj, args.format, "\n".join(lines))
    return 0 if ok else 1


def cmd_sheun(args) -> int:
    sol = solve_raising()
    obj = {"A1": sol.A1.to_text(), "A2": sol.A2.to_text(), "pi4": sol.pi4().to_text()}
    text = f"A1 = {sol.A1.to_text()}\nA2 = {sol.A2.to_text()}\npi4 = {sol.pi4().to_text()}"
    code = 0
    if args.check is not None:
        if args.check < 2:
            raise UsageError("--check must be at least 2")
        ok = verify_no_new_constraints(args.check)
        obj["no_new_constraints"] = ok
        text += f"\nno new constraints up to n = {args.check}: {ok}"
        code = 0 if ok else 1
    _emit(obj, args.format, text)
    return code


def _vector(text: str | None, n: int, prefix: str) -> list[RatF]:
    if text is None:
        return [sym(f"{prefix}{i}") for i in range(1, n + 1)]
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated values, got {len(parts)}")
    return [_ratf(p) for p in parts]


def cmd_heun(args) -> int:
    if args.action == "build":
        p = QHawParams(*_vector(args.alphas, 6, "alpha"), *_vector(args.betas, 3, "beta"))
        Q = build_qhaw(p)
        h = extract_heun_data(Q)
        obj = {
            "r": [r.to_text() for r in h.r],
            "p1": {"x": h.p1_x.to_text(), "const": h.p1_const.to_text()},
            "operator": Q.to_dict(),
        }
        lines = [f"r{k} = {r.to_text()}" for k, r in enumerate(h.r)]
        lines.append(f"p1 = ({h.p1_x.to_text()}) x + ({h.p1_const.to_text()})")
        lines.append(Q.to_json())
        _emit(obj, args.format, "\n".join(lines))
        return 0
    if args.action == "reduce":
        if not args.word:
            raise UsageError("heun reduce needs --word")
        try:
            w = parse_word(args.word)
        except (ValueError, ExactAlgError) as exc:
            raise UsageError(f"bad word: {exc}") from None
        try:
            coords = reduce_quadratic(w)
        except NotReducible as exc:
            _emit({"error": "NotReducible", "detail": str(exc)}, args.format, f"NotReducible: {exc}")
            return 1
        named = {("*".join(b) or "1"): c.to_text() for b, c in coords.items() if not c.is_zero()}
        _emit(named, args.format, "\n".join(f"{k}: {v}" for k, v in named.items()) or "0")
        return 0
    raise UsageError(f"unknown heun action {args.action!r}")


# ---------------------------------------------------------------------------
# parser


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsklyanin", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("--suite", default="all", help="'all', 'core', 'polys' or comma-separated ids")
    v.add_argument("--seed", type=int, default=None, help=f"probe seed (default ${SEED_ENV} or 0)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--fast", action="store_true", help="probe random specializations first")
    v.add_argument("--timings", action="store_true", help="include wall times (makes output nondeterministic)")
    v.add_argument("--out", help="write the report to a file")
    fmt(v)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("op", help="apply, compose or compare operators")
    o.add_argument("action", choices=("apply", "compose", "equal"))
    o.add_argument("--name", help="catalog name or file:path.json")
    o.add_argument("--to", help="chi:N, one, or a rational function of z")
    o.add_argument("--names", help="comma-separated operands, composed left to right")
    o.add_argument("--lhs")
    o.add_argument("--rhs")
    fmt(o)
    o.set_defaults(func=cmd_op)

    a = sub.add_parser("aw", help="Askey-Wilson polynomials")
    a.add_argument("action", choices=("eval",))
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--r", type=int, default=1)
    for k in "abcd":
        a.add_argument(f"--{k}", help="exact value (default: symbolic)")
    a.add_argument("--eigen", action="store_true", help="also check the eigenvalue")
    fmt(a)
    a.set_defaults(func=cmd_aw)

    r = sub.add_parser("rep", help="finite-dimensional matrices of A, B, C, D")
    r.add_argument("--N", type=int, required=True)
    r.add_argument("--t", help="value of t = q^nu (default s^(N-1))")
    r.add_argument("--skip-trunc", action="store_true", help="keep t generic")
    fmt(r)
    r.set_defaults(func=cmd_rep)

    s = sub.add_parser("sheun", help="S-Heun raising condition")
    s.add_argument("action", choices=("derive",))
    s.add_argument("--check", type=int, help="verify no new constraints up to this n")
    fmt(s)
    s.set_defaults(func=cmd_sheun)

    h = sub.add_parser("heun", help="Heun-Askey-Wilson operator")
    h.add_argument("action", choices=("build", "reduce"))
    h.add_argument("--alphas", help="six comma-separated values")
    h.add_argument("--betas", help="three comma-separated values")
    h.add_argument("--word", help="s-expression over L, M1, M2, R1, R2")
    fmt(h)
    h.set_defaults(func=cmd_heun)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except NotHeunShape as exc:
        sys.stderr.write(f"NotHeunShape: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
