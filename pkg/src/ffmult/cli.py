"""Command-line front end.

Every subcommand emits JSON (or CSV for record tables) built only from the
inputs, with exact rationals serialized as "num/den" strings, so identical
invocations produce byte-identical output.  Domain errors exit with code 1
and a machine-readable {"error": name} payload; usage errors exit with 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import kakeya as kk
from . import merger as mg
from . import rs_decode as rs
from .errors import FFMultError, InvalidParameters
from .ff import parse_field_spec
from .interpolate import InterpolationProblem, TotalDegreeBasis, vanishing_interpolation
from .mvpoly import (
    MultiPoly,
    Curve,
    hasse_derivative,
    multiplicity,
    multiplicity_mass,
)
from .selftest import run_selftest


def _frac(fr: Fraction) -> str:
    fr = Fraction(fr)
    return f"{fr.numerator}/{fr.denominator}"


def _parse_frac(text: str) -> Fraction:
    return Fraction(text)


def _parse_ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))


def _mult_value(poly: MultiPoly, point):
    m = multiplicity(poly, point)
    return "infinity" if m == float("inf") else int(m)


# -- subcommand handlers ---------------------------------------------------------


def cmd_hasse(args) -> dict:
    spec = parse_field_spec(args.field)
    poly = MultiPoly.from_text(spec, args.n, args.poly)
    order = _parse_ints(args.order)
    deriv = hasse_derivative(poly, order)
    return {
        "field": spec.q,
        "poly": poly.to_text(),
        "order": list(order),
        "derivative": deriv.to_text(),
    }


def cmd_mult(args) -> dict:
    spec = parse_field_spec(args.field)
    poly = MultiPoly.from_text(spec, args.n, args.poly)
    point = _parse_ints(args.point)
    return {
        "field": spec.q,
        "poly": poly.to_text(),
        "point": list(point),
        "multiplicity": _mult_value(poly, point),
    }


def cmd_sz_mass(args) -> dict:
    spec = parse_field_spec(args.field)
    poly = MultiPoly.from_text(spec, args.n, args.poly)
    subset = _parse_ints(args.subset) if args.subset else tuple(range(spec.q))
    mass = multiplicity_mass(poly, subset)
    bound = int(poly.degree) * len(set(subset)) ** (args.n - 1)
    return {"mass": mass, "bound": bound, "ok": mass <= bound}


def cmd_interpolate(args) -> dict:
    spec = parse_field_spec(args.field)
    points = tuple(tuple(pt) for pt in json.loads(args.points))
    problem = InterpolationProblem(
        spec, args.n, points, args.multiplicity, TotalDegreeBasis(args.n, args.degree)
    )
    poly = vanishing_interpolation(problem, verify=args.verify)
    return {
        "poly": poly.to_text(),
        "monomials": problem.basis.count(),
        "constraints": problem.constraint_count(),
        "verified": bool(args.verify),
    }


def cmd_kakeya_verify(args) -> dict:
    spec = parse_field_spec(args.field)
    points = [tuple(pt) for pt in json.loads(args.points)]
    res = kk.is_kakeya(spec, args.n, points)
    out = {"is_kakeya": res.ok, "set_size": len(set(points))}
    if res.ok:
        out["witnesses"] = {
            ",".join(map(str, b)): list(a) for b, a in sorted(res.witnesses.items())
        }
    else:
        out["violating_direction"] = (
            list(res.violating_direction) if res.violating_direction else None
        )
    return out


def cmd_kakeya_search(args) -> dict:
    q = parse_field_spec(args.field).q
    crude, main = kk.kakeya_lower_bounds(q, args.n)
    found = kk.exhaustive_min_kakeya(q, args.n, args.size_cap)
    out = {
        "lower_bound_crude": _frac(crude),
        "lower_bound_main": _frac(main),
    }
    if found is None:
        out["min_size"] = None
    else:
        pts, size = found
        out["min_size"] = size
        out["min_set"] = sorted(list(p) for p in pts)
    return out


def cmd_kakeya_stat(args) -> dict:
    spec = parse_field_spec(args.field)
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        curves = {}
        for entry in data["curves"]:
            pt = tuple(entry["point"])
            curves[pt] = Curve.from_coeff_lists(spec, entry["components"])
        inst = kk.StatKakeyaInstance(
            spec=spec,
            n=args.n,
            S=tuple(tuple(p) for p in data["S"]),
            K=frozenset(tuple(p) for p in data["K"]),
            curve_map=curves,
            lam=Fraction(data["lambda"]),
            eta=Fraction(data["eta"]),
            max_degree=int(data["degree"]),
        )
    else:
        inst = kk.full_space_reduction_instance(spec, args.n)
    report = kk.statistical_kakeya_check(inst)
    bound = report["bound"]
    return {
        "hypothesis_ok": report["hypothesis_ok"],
        "bound_numerator": bound.numerator,
        "bound_denominator": bound.denominator,
        "set_size": report["set_size"],
        "witnesses": {
            ",".join(map(str, x)): hits for x, hits in sorted(report["witnesses"].items())
        },
        "ok": report["ok"],
    }


def _load_source(spec, n: int, num_blocks: int, text: str) -> mg.SourceSpec:
    data = json.loads(text)
    kind = data.get("type")
    if kind == "identical":
        factory = lambda: mg.IdentityMap()
    elif kind == "constant":
        value = tuple(data.get("value", [0] * n))
        factory = lambda: mg.ConstantMap(value)
    elif kind == "permutation":
        perm = tuple(data.get("perm", [(j + 1) % n for j in range(n)]))
        factory = lambda: mg.CoordinatePermutationMap(perm)
    elif kind == "affine":
        matrix = data["matrix"]
        offset = tuple(data.get("offset", [0] * n))
        factory = lambda: mg.AffineMap(matrix, offset)
    else:
        raise InvalidParameters(f"unknown source type {kind!r}")
    maps = {j: factory() for j in range(1, num_blocks)}
    return mg.SourceSpec(spec, n, num_blocks, 0, maps, label=str(kind))


def cmd_merger_run(args) -> dict:
    delta, eps = _parse_frac(args.delta), _parse_frac(args.eps)
    d = mg.seed_length(delta, eps, args.num_blocks)
    from .ff import field_make

    spec = field_make(2, d)
    src = _load_source(spec, args.n, args.num_blocks, args.source)
    report = mg.verify_merger_theorem(delta, eps, args.num_blocks, args.n, sources=[src])
    entry = report["sources"][0]
    return {
        "seed_length": report["seed_length"],
        "q": report["q"],
        "entropy_threshold_bits": report["entropy_threshold_bits"],
        "epsilon": _frac(eps),
        "source": entry["source"]["label"],
        "distance": _frac(entry["distance"]),
        "ok": entry["ok"],
    }


def cmd_merger_verify(args) -> dict:
    delta, eps = _parse_frac(args.delta), _parse_frac(args.eps)
    report = mg.verify_merger_theorem(delta, eps, args.num_blocks, args.n)
    return {
        "seed_length": report["seed_length"],
        "q": report["q"],
        "entropy_threshold_bits": report["entropy_threshold_bits"],
        "epsilon": _frac(eps),
        "sources": [
            {
                "label": e["source"]["label"],
                "distance": _frac(e["distance"]),
                "ok": e["ok"],
            }
            for e in report["sources"]
        ],
        "all_ok": report["all_ok"],
    }


def cmd_rs_decode(args) -> dict:
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            inst = rs.instance_from_json(json.load(fh))
    else:
        if None in (args.field, args.alphas, args.betas, args.k, args.t):
            raise InvalidParameters(
                "pass --input FILE or all of --field/--alphas/--betas/--k/--t"
            )
        spec = parse_field_spec(args.field)
        inst = rs.RSInstance(
            spec, _parse_ints(args.alphas), _parse_ints(args.betas), k=args.k, t=args.t
        )
    spec = inst.spec
    params = rs.choose_params(inst, _parse_frac(args.eps))
    Q = rs.gs_interpolate(inst, params)
    cands = rs.y_roots(Q, inst.k)
    decoded = sorted(
        (f for f in cands if rs.agreement(inst, f) >= inst.t),
        key=lambda f: tuple(reversed(f)),
    )
    bound = rs.list_size_bound(inst.gamma, inst.rate)
    polys = [
        MultiPoly(spec, 1, {(i,): c for i, c in enumerate(f)}).to_text() for f in decoded
    ]
    return {
        "params": {
            "m": params.m,
            "d": params.d,
            "theta_num": params.theta.numerator,
            "theta_den": params.theta.denominator,
            "ydeg_cap": params.ydeg_cap,
        },
        "list": polys,
        "bound": _frac(bound),
    }


def cmd_rs_bound(args) -> dict:
    bound = rs.list_size_bound(_parse_frac(args.gamma), _parse_frac(args.rate))
    return {"bound": _frac(bound)}


def cmd_selftest(args) -> dict:
    report = run_selftest(args.seed, trials=args.trials)
    return report


# -- output plumbing --------------------------------------------------------------


def _emit(data: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    else:
        text = _to_csv(data)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(data: dict) -> str:
    records = None
    for key in ("checks", "sources"):
        if key in data and isinstance(data[key], list):
            records = data[key]
            break
    if records is None:
        raise InvalidParameters("csv output needs a record table (selftest, merger-verify)")
    cols = sorted({k for rec in records for k in rec})
    lines = [",".join(cols)]
    for rec in records:
        lines.append(",".join(_csv_cell(rec.get(c, "")) for c in cols))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffmult",
        description="Finite-field multiplicity toolkit: derivatives, Kakeya sets, "
        "curve mergers, and Reed-Solomon list decoding.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write output to a file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker count hint; results are identical for every value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def field_n(p):
        p.add_argument("--field", required=True, help="field as 'p' or 'p^e'")
        p.add_argument("--n", type=int, required=True, help="number of variables")

    p = sub.add_parser("hasse", parents=[common], help="Hasse derivative of a polynomial")
    field_n(p)
    p.add_argument("--poly", required=True, help="terms 'coeff:e1,...,en' joined by ';'")
    p.add_argument("--order", required=True, help="derivative order 'i1,...,in'")
    p.set_defaults(fn=cmd_hasse)

    p = sub.add_parser("mult", parents=[common], help="multiplicity of a zero at a point")
    field_n(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--point", required=True, help="point 'a1,...,an'")
    p.set_defaults(fn=cmd_mult)

    p = sub.add_parser("sz-mass", parents=[common], help="total multiplicity mass over S^n")
    field_n(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--subset", help="subset of element codes, default: the whole field")
    p.set_defaults(fn=cmd_sz_mass)

    p = sub.add_parser("interpolate", parents=[common], help="vanishing interpolation with multiplicity")
    field_n(p)
    p.add_argument("--points", required=True, help="JSON list of points")
    p.add_argument("--multiplicity", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=cmd_interpolate)

    p = sub.add_parser("kakeya-verify", parents=[common], help="check the line-in-every-direction property")
    field_n(p)
    p.add_argument("--points", required=True, help="JSON list of points")
    p.set_defaults(fn=cmd_kakeya_verify)

    p = sub.add_parser("kakeya-search", parents=[common], help="exhaustive minimum Kakeya set search")
    field_n(p)
    p.add_argument("--size-cap", type=int, default=None)
    p.set_defaults(fn=cmd_kakeya_search)

    p = sub.add_parser("kakeya-stat", parents=[common], help="statistical Kakeya-for-curves checker")
    field_n(p)
    p.add_argument("--input", help="instance JSON file; defaults to the full-space reduction")
    p.set_defaults(fn=cmd_kakeya_stat)

    p = sub.add_parser("merger-run", parents=[common], help="exact merger analysis of one source")
    p.add_argument("--delta", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--lambda", dest="num_blocks", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--source", required=True, help='JSON, e.g. {"type": "constant"}')
    p.set_defaults(fn=cmd_merger_run)

    p = sub.add_parser("merger-verify", parents=[common], help="merger theorem over the adversarial family")
    p.add_argument("--delta", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--lambda", dest="num_blocks", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_merger_verify)

    p = sub.add_parser("rs-decode", parents=[common], help="list decoding within the Johnson radius")
    p.add_argument("--field")
    p.add_argument("--alphas")
    p.add_argument("--betas")
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--eps", default="1/4", help="slack parameter, default 1/4")
    p.add_argument("--input", help="instance JSON file instead of individual flags")
    p.set_defaults(fn=cmd_rs_decode)

    p = sub.add_parser("rs-bound", parents=[common], help="list-size bound 2*gamma/(gamma^2 - R)")
    p.add_argument("--gamma", required=True)
    p.add_argument("--rate", required=True)
    p.set_defaults(fn=cmd_rs_bound)

    p = sub.add_parser("selftest", parents=[common], help="run the full invariant suite")
    p.add_argument("--seed", type=int, required=True, help="64-bit seed (no default)")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data = args.fn(args)
    except FFMultError as exc:
        payload = {"error": exc.name, "message": str(exc)}
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
        return 1
    try:
        _emit(data, args)
    except InvalidParameters as exc:  # wrong --format for this report shape
        sys.stderr.write(f"ffmult: error: {exc}\n")
        return 2
    if args.command == "selftest" and not data["all_ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
