"""Command-line front end.

Every subcommand prints a single JSON envelope {"version", "config",
"result"} with sorted keys, arbitrary-precision integers as decimal strings
and exact rationals as {"num", "den"}, so identical configurations produce
byte-identical output.  Errors exit nonzero with {"error": {"kind",
"detail"}}.  Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .cfcore import (
    DigitSeq,
    cf_expand_rational,
    cf_value,
    convergents,
    read_digits,
    series_from_digits,
    write_digits,
)
from .densities import INT_SETS, int_density_profile, poly_density_profile
from .digitsource import make_source
from .errors import LscfError, OutOfDomain
from .gfpoly import FieldSpec, Poly, count_irreducible, rank, unrank
from .insertion import (
    build_plan,
    emit_point,
    holder_diagnostic,
    plan_from_json,
    plan_to_json,
    validate_plan,
)
from .laurent import RationalFunction
from .patterns import scan_point_patterns
from .seedset import (
    SeedSpec,
    SparseSubset,
    fit_window_constants,
    local_dim_profile,
    seed_digit,
    window_count,
)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1)
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        _atomic_write(out, text + "\n")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lscf-")
    try:
        with os.fdopen(fd, "w") as fp:
            fp.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(config: dict, result: dict) -> dict:
    return {"version": __version__, "config": config, "result": result}


def _strip_parens(s: str) -> str:
    s = s.strip()
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    return s


def _parse_rational(field: FieldSpec, text: str) -> RationalFunction:
    num_s, slash, den_s = text.partition("/")
    num = Poly.from_text(field, _strip_parens(num_s))
    den = Poly.from_text(field, _strip_parens(den_s)) if slash else Poly.one(field)
    return RationalFunction(num, den)


def _frac(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


# ---------------------------------------------------------------------------
# Subcommand handlers.

def _cmd_cf_expand(args) -> dict:
    field = FieldSpec(args.q)
    r = _parse_rational(field, args.rational)
    seq = cf_expand_rational(r)
    digits = [str(d) for d in seq.prefix(len(seq))]
    return _envelope(
        {"command": "cf expand", "q": args.q, "rational": args.rational},
        {"digits": digits},
    )


def _cmd_cf_value(args) -> dict:
    with open(args.digitfile) as fp:
        seq = read_digits(fp)
    n = len(seq)
    convs = convergents(seq, n)
    value = cf_value(seq)
    series = series_from_digits(seq, args.through)
    return _envelope(
        {"command": "cf value", "digitfile": os.path.basename(args.digitfile), "through": args.through},
        {
            "q": seq.field.q,
            "digits": n,
            "convergents": [{"p": str(c.p), "q": str(c.qden)} for c in convs],
            "value": {"num": str(value.num), "den": str(value.den)},
            "series": series.to_text(),
        },
    )


def _cmd_poly_count_irreducible(args) -> dict:
    field = FieldSpec(args.q)
    n = count_irreducible(field, args.d, monic_only=args.monic)
    return _envelope(
        {"command": "poly count-irreducible", "q": args.q, "d": args.d, "monic": args.monic},
        {"count": str(n)},
    )


def _cmd_poly_rank(args) -> dict:
    field = FieldSpec(args.q)
    p = Poly.from_text(field, args.poly)
    return _envelope(
        {"command": "poly rank", "q": args.q, "poly": args.poly},
        {"rank": str(rank(p))},
    )


def _cmd_poly_unrank(args) -> dict:
    field = FieldSpec(args.q)
    p = unrank(field, int(args.rank))
    return _envelope(
        {"command": "poly unrank", "q": args.q, "rank": args.rank},
        {"poly": str(p)},
    )


def _cmd_density_poly(args) -> dict:
    field = FieldSpec(args.q)
    U = make_source(field, args.U, degree_cap=max(args.horizon, 1))
    S = make_source(field, args.S, degree_cap=max(args.horizon, 1))
    profile = poly_density_profile(U, S, args.horizon)
    return _envelope(
        {"command": "density poly", "q": args.q, "U": args.U, "S": args.S, "horizon": args.horizon},
        profile.to_json(),
    )


def _cmd_density_int(args) -> dict:
    for name in (args.B, args.G):
        if name not in INT_SETS:
            raise OutOfDomain(f"unknown integer set {name!r}; have {sorted(INT_SETS)}")
    profile = int_density_profile(INT_SETS[args.B], INT_SETS[args.G], args.horizon)
    return _envelope(
        {"command": "density int", "B": args.B, "G": args.G, "horizon": args.horizon},
        profile.to_json(),
    )


def _cmd_seed_report(args) -> dict:
    field = FieldSpec(args.q)
    source = make_source(field, args.S)
    spec = SeedSpec(source, args.t)
    sparse = SparseSubset(source)
    windows = []
    counts = []
    digits = []
    for n in range(1, args.horizon + 1):
        lo, hi = spec.window(n)
        c = window_count(spec, sparse, n)
        counts.append(c)
        entry = {"n": n, "deg_lo": lo, "deg_hi": hi, "count": str(c)}
        if source.can_unrank and c > 0:
            d = seed_digit(spec, sparse, n)
            digits.append(d)
            entry["canonical_min"] = str(d)
        windows.append(entry)
    result: dict = {"t": args.t, "windows": windows}
    if len(digits) == len(counts):
        result["profile"] = local_dim_profile(spec, sparse, digits, args.horizon)
        c0, rho = fit_window_constants(spec, counts)
        result["envelope"] = {"c0": c0, "rho": rho}
    return _envelope(
        {"command": "seed report", "q": args.q, "S": args.S, "t": args.t, "horizon": args.horizon},
        result,
    )


def _cmd_plan_build(args) -> dict:
    field = FieldSpec(args.q)
    S = make_source(field, args.S, degree_cap=max(args.horizon, 16))
    U = make_source(field, args.U, degree_cap=max(args.horizon, 16))
    eps = None
    if args.eps:
        eps = [Fraction(e) for e in args.eps.split(",")]
    plan = build_plan(S, U, horizon=args.horizon, count=args.count, t=args.t, eps=eps)
    payload = plan_to_json(plan, args.S, args.U)
    return _envelope(
        {
            "command": "plan build",
            "q": args.q,
            "S": args.S,
            "U": args.U,
            "horizon": args.horizon,
            "count": args.count,
        },
        payload,
    )


def _load_plan(path: str):
    with open(path) as fp:
        payload = json.load(fp)
    if "result" in payload:  # accept a full envelope as produced by plan build
        payload = payload["result"]
    return plan_from_json(payload), payload


def _cmd_plan_validate(args) -> dict:
    plan, payload = _load_plan(args.planfile)
    validate_plan(plan)
    return _envelope(
        {"command": "plan validate", "planfile": os.path.basename(args.planfile)},
        {"valid": True, "k_count": plan.k_count},
    )


def _cmd_point_emit(args) -> dict:
    plan, _ = _load_plan(args.plan)
    seq = emit_point(plan, args.digits)
    buf = io.StringIO()
    written = write_digits(buf, seq, args.digits)
    if args.out:
        _atomic_write(args.out, buf.getvalue())
    series = series_from_digits(seq, args.through)
    return _envelope(
        {
            "command": "point emit",
            "plan": os.path.basename(args.plan),
            "digits": args.digits,
            "through": args.through,
        },
        {
            "digits_written": written,
            "series": series.to_text(),
            "out": os.path.basename(args.out) if args.out else None,
            "digits_inline": None if args.out else [str(d) for d in seq.prefix(written)],
        },
    )


def _cmd_diag_holder(args) -> dict:
    plan, _ = _load_plan(args.plan)
    spec = plan.seed_spec()
    sparse = SparseSubset(spec.source)
    depths = [int(d) for d in args.depths.split(",")]
    report = holder_diagnostic(
        plan, spec, sparse, depths, variants_per_depth=args.variants, tolerance=args.tolerance
    )
    return _envelope(
        {
            "command": "diag holder",
            "plan": os.path.basename(args.plan),
            "depths": depths,
            "variants": args.variants,
            "tolerance": args.tolerance,
        },
        report.to_json(),
    )


def _cmd_pattern_scan(args) -> dict:
    with open(args.point) as fp:
        seq = read_digits(fp)
    U = make_source(seq.field, args.U, degree_cap=args.degree_cap)
    report = scan_point_patterns(
        seq, U, horizon=args.horizon, length=args.L, k=args.k, degree_cap=args.degree_cap
    )
    return _envelope(
        {
            "command": "pattern scan",
            "point": os.path.basename(args.point),
            "U": args.U,
            "horizon": args.horizon,
            "L": args.L,
            "k": args.k,
        },
        report.to_json(),
    )


def _cmd_source_counts(args) -> dict:
    field = FieldSpec(args.q)
    source = make_source(field, args.S, degree_cap=max(args.max_d, 1))
    counts = {str(d): str(source.count_by_degree(d)) for d in range(1, args.max_d + 1)}
    payload = {"q": args.q, "kind": source.kind, "counts": counts}
    if args.out:
        _atomic_write(args.out, json.dumps(payload, sort_keys=True) + "\n")
    return _envelope(
        {"command": "source counts", "q": args.q, "S": args.S, "max_d": args.max_d},
        payload,
    )


# ---------------------------------------------------------------------------
# Parser.

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lscf", description=__doc__)
    sub = parser.add_subparsers(dest="group", required=True)

    cf = sub.add_parser("cf", help="continued-fraction expansions").add_subparsers(
        dest="action", required=True
    )
    p = cf.add_parser("expand", help="digits of a rational function")
    p.add_argument("rational", help='e.g. "X/(X^2+1)" or "X^2+1"')
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=_cmd_cf_expand)
    p = cf.add_parser("value", help="convergents and series prefix of a digit file")
    p.add_argument("digitfile")
    p.add_argument("--through", type=int, default=32)
    p.set_defaults(handler=_cmd_cf_value)

    poly = sub.add_parser("poly", help="polynomial utilities").add_subparsers(
        dest="action", required=True
    )
    p = poly.add_parser("count-irreducible")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--monic", action="store_true")
    p.set_defaults(handler=_cmd_poly_count_irreducible)
    p = poly.add_parser("rank")
    p.add_argument("poly")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=_cmd_poly_rank)
    p = poly.add_parser("unrank")
    p.add_argument("rank")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=_cmd_poly_unrank)

    density = sub.add_parser("density", help="relative density profiles").add_subparsers(
        dest="action", required=True
    )
    p = density.add_parser("poly")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--U", required=True)
    p.add_argument("--S", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.set_defaults(handler=_cmd_density_poly)
    p = density.add_parser("int")
    p.add_argument("--B", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.set_defaults(handler=_cmd_density_int)

    seed = sub.add_parser("seed", help="sparse seed windows").add_subparsers(
        dest="action", required=True
    )
    p = seed.add_parser("report")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--S", default="full")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--horizon", type=int, default=6)
    p.set_defaults(handler=_cmd_seed_report)

    plan = sub.add_parser("plan", help="insertion plans").add_subparsers(
        dest="action", required=True
    )
    p = plan.add_parser("build")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--S", default="full")
    p.add_argument("--U", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--eps", default=None, help='comma list of fractions, e.g. "1/2,1/3"')
    p.set_defaults(handler=_cmd_plan_build)
    p = plan.add_parser("validate")
    p.add_argument("planfile")
    p.set_defaults(handler=_cmd_plan_validate)

    point = sub.add_parser("point", help="emit points of the constructed family").add_subparsers(
        dest="action", required=True
    )
    p = point.add_parser("emit")
    p.add_argument("--plan", required=True)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--through", type=int, default=64)
    p.add_argument("--out", default=None, help="digit JSONL file (digits inline when omitted)")
    p.set_defaults(handler=_cmd_point_emit)

    diag = sub.add_parser("diag", help="diagnostics").add_subparsers(dest="action", required=True)
    p = diag.add_parser("holder")
    p.add_argument("--plan", required=True)
    p.add_argument("--depths", required=True, help="comma list of seed depths")
    p.add_argument("--variants", type=int, default=1)
    p.add_argument("--tolerance", type=float, default=0.05)
    p.set_defaults(handler=_cmd_diag_holder)

    pattern = sub.add_parser("pattern", help="pattern detectors").add_subparsers(
        dest="action", required=True
    )
    p = pattern.add_parser("scan")
    p.add_argument("--point", required=True, help="digit JSONL file")
    p.add_argument("--U", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--degree-cap", type=int, default=12)
    p.set_defaults(handler=_cmd_pattern_scan)

    source = sub.add_parser("source", help="digit-source utilities").add_subparsers(
        dest="action", required=True
    )
    p = source.add_parser("counts")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--S", required=True)
    p.add_argument("--max-d", type=int, required=True)
    p.add_argument("--out", dest="out", default=None)
    p.set_defaults(handler=_cmd_source_counts)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except LscfError as exc:
        error = {"error": {"kind": type(exc).__name__, "detail": str(exc)}}
        sys.stdout.write(json.dumps(error, sort_keys=True) + "\n")
        return 1
    _emit(payload, None)
    return 0


if __name__ == "__main__":
    sys.exit(main())
