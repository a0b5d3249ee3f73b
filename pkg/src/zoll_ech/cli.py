"""Command-line front end: ``zoll-ech <subcommand> ...``.

Exit codes: 0 success, 1 an obstruction or consistency check failed (the
witness is printed), 2 usage or domain error, 3 numerical instability.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import capseq, momentmap, obstruct, zollcx
from .errors import (
    DomainError,
    ModelConsistencyError,
    NumericalInstabilityError,
    ZollEchError,
)
from .exact import ExactQuantity

SCHEMA = "zoll-ech/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2, 3

# chain-complex model -> capacity sequence it must reproduce
_MODEL_ROUTES = {"S3": "ball:1", "SstarS2": "dstar-s2", "SstarRP2": "dstar-rp2"}


def _fmt_float(v: float) -> str:
    return format(float(v), ".15g")


def parse_domain(text: str) -> capseq.CapacitySequence:
    """``ball:a``, ``ellipsoid:a,b``, ``dstar-s2`` or ``dstar-rp2``."""
    key = text.strip().lower()
    if key in ("dstar-s2", "dstar-rp2"):
        return capseq.dstar_capacities(key)
    kind, _, rest = key.partition(":")
    if kind == "ball" and rest:
        return capseq.ball_capacities(ExactQuantity.parse(rest))
    if kind == "ellipsoid" and rest.count(",") == 1:
        a, b = rest.split(",")
        return capseq.ellipsoid_capacities(ExactQuantity.parse(a), ExactQuantity.parse(b))
    raise DomainError(f"unknown domain {text!r}; expected ball:a, ellipsoid:a,b, dstar-s2 or dstar-rp2")


def _threads() -> int:
    raw = os.environ.get("ZOLL_ECH_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(f"ZOLL_ECH_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def _emit_json(doc: dict, out) -> None:
    out.write(json.dumps({"schema": SCHEMA, **doc}, indent=2) + "\n")


# -- combinatorial commands -------------------------------------------------


def cmd_capacities(args, out) -> int:
    seq = parse_domain(args.domain)
    if args.count < 1:
        raise DomainError(f"--count must be at least 1, got {args.count}")
    values = seq.prefix(args.count)
    exact = not args.float
    if args.format == "json":
        payload = [v.to_json() for v in values] if exact else [float(_fmt_float(v)) for v in values]
        _emit_json({"domain": args.domain, "count": args.count, "exact": exact, "values": payload}, out)
    elif args.format == "csv":
        out.write("k,value\n")
        for k, v in enumerate(values):
            out.write(f"{k},{v if exact else _fmt_float(v)}\n")
    else:
        out.write(", ".join(str(v) if exact else _fmt_float(v) for v in values) + "\n")
    return EXIT_OK


def cmd_spectrum(args, out) -> int:
    model = zollcx.get_model(args.model)
    chain = zollcx.spectrum(model, args.count)
    route = parse_domain(_MODEL_ROUTES[model.name]).prefix(args.count)
    out.write(f"{'k':>6}  {'chain':>12}  {'capacities':>12}  diff\n")
    first_bad = None
    for k, (a, b) in enumerate(zip(chain, route)):
        same = a == b
        if not same and first_bad is None:
            first_bad = k
        out.write(f"{k:>6}  {str(a):>12}  {str(b):>12}  {'=' if same else '!='}\n")
    if first_bad is not None:
        out.write(f"mismatch at k={first_bad}: {chain[first_bad]} != {route[first_bad]}\n")
        return EXIT_FAIL
    out.write(f"{model.name}: {args.count} terms agree with {_MODEL_ROUTES[model.name]}\n")
    return EXIT_OK


def cmd_index(args, out) -> int:
    model = zollcx.get_model(args.model)
    parts = zollcx.index_components(model, args.alpha, args.beta)
    index = zollcx.ech_index(model, args.alpha, args.beta)
    alpha, beta = zollcx.OrbitSet.of(args.alpha), zollcx.OrbitSet.of(args.beta)
    out.write(f"model: {model.name}\n")
    out.write(f"alpha: {alpha}\nbeta: {beta}\n")
    out.write(f"chern: {parts.chern_term}\n")
    out.write(f"self-intersection: {parts.self_intersection_term}\n")
    out.write(f"CZ(alpha): {parts.cz_sum_alpha}\n")
    out.write(f"CZ(beta): {parts.cz_sum_beta}\n")
    out.write(f"index: {index}\n")
    return EXIT_OK


def cmd_generators(args, out) -> int:
    model = zollcx.get_model(args.model)
    for alpha in zollcx.generators_by_grading(model, args.max_grading):
        out.write(f"{zollcx.grading(model, alpha):>6}  {str(alpha):<16}  {zollcx.action(model, alpha)}\n")
    return EXIT_OK


def cmd_umap(args, out) -> int:
    model = zollcx.get_model(args.model)
    alpha = zollcx.OrbitSet.of(args.alpha)
    out.write(f"{zollcx.grading(model, alpha):>6}  {alpha}\n")
    for _ in range(args.steps):
        if alpha.is_empty():
            break
        alpha = zollcx.u_map(model, alpha)
        out.write(f"{zollcx.grading(model, alpha):>6}  {alpha}\n")
    return EXIT_OK


def cmd_obstruct(args, out) -> int:
    inner, outer = parse_domain(args.inner), parse_domain(args.outer)
    result = obstruct.dominates(inner, outer, args.upto, mixed_units=True)
    out.write(str(result) + "\n")
    return EXIT_OK if result else EXIT_FAIL


def cmd_width(args, out) -> int:
    surface = {"dstar-s2": "S2", "dstar-rp2": "RP2"}[args.domain]
    cert = obstruct.gromov_width(surface, args.upto)
    out.write("\n".join(cert.lines()) + "\n")
    return EXIT_OK


# -- moment-map commands ----------------------------------------------------


def _write_curve(curve: momentmap.PlanarCurve, path: str | None, out, **meta) -> None:
    as_json = path is not None and path.lower().endswith(".json")
    text = momentmap.curve_to_json(curve, **meta) if as_json else momentmap.curve_to_csv(curve)
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def cmd_moment_boundary(args, out) -> int:
    params = momentmap.PerturbParams.of_variant(args.variant, args.epsilon)
    grid = momentmap.default_j_grid(args.samples)
    curve = momentmap.boundary_curve(params, grid, workers=_threads())
    _write_curve(curve, args.out, out, variant=args.variant, epsilon=args.epsilon, barrier=params.barrier)
    if args.out not in (None, "-"):
        out.write(f"{len(curve)} samples written to {args.out}\n")
        out.write(f"area: {_fmt_float(momentmap.toric_area(curve))}\n")
    return EXIT_OK


def _parse_ladder(text: str) -> tuple[float, ...]:
    if text == "default":
        return momentmap.DEFAULT_LADDER
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise DomainError(f"ladder must be 'default' or a comma list of floats, got {text!r}") from None


def cmd_moment_limit(args, out) -> int:
    ladder = _parse_ladder(args.ladder)
    curve, report = momentmap.limit_domain(args.variant, ladder, workers=_threads())
    _write_curve(curve, args.out, out, variant=args.variant, ladder=list(ladder))
    if args.out not in (None, "-"):
        for line in report.summary_lines():
            out.write(line + "\n")
        ref = momentmap.square_distance if args.variant == "full" else momentmap.segment_distance
        out.write(f"distance to limit shape: {_fmt_float(ref(curve))}\n")
        out.write(f"area: {_fmt_float(momentmap.toric_area(curve))}\n")
    if not report.stable:
        sys.stderr.write(f"nesting violated at (eps_coarse, eps_fine, j): {list(report.nesting_violations)[:5]}\n")
        return EXIT_UNSTABLE
    return EXIT_OK


def load_curve(path: str) -> momentmap.PlanarCurve:
    text = Path(path).read_text()
    if text.lstrip().startswith(("{", "[")):
        return momentmap.curve_from_json(text)
    return momentmap.curve_from_csv(text)


def cmd_area(args, out) -> int:
    curve = load_curve(args.curve)
    out.write(_fmt_float(momentmap.toric_area(curve)) + "\n")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zoll-ech", description="ECH capacities, Zoll chain complexes and moment-map images.")
    sub = parser.add_subparsers(dest="command", required=True)
    models = ["s3", "sstar-s2", "sstar-rp2"]

    p = sub.add_parser("capacities", help="first N capacities of a domain")
    p.add_argument("--domain", required=True, help="ball:a | ellipsoid:a,b | dstar-s2 | dstar-rp2")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="canonical exact values (default)")
    mode.add_argument("--float", action="store_true", help="decimal values, 15 significant digits")
    p.set_defaults(func=cmd_capacities)

    p = sub.add_parser("spectrum", help="chain-complex spectrum next to the capacity formula")
    p.add_argument("--model", required=True, choices=models)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("index", help="ECH index I(alpha, beta) and its parts")
    p.add_argument("--model", required=True, choices=models)
    p.add_argument("--alpha", required=True, help="m1,m2")
    p.add_argument("--beta", default="0,0", help="n1,n2 (default: empty set)")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("generators", help="generators up to a grading")
    p.add_argument("--model", required=True, choices=models)
    p.add_argument("--max-grading", type=int, required=True)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("umap", help="iterate the U map")
    p.add_argument("--model", required=True, choices=models)
    p.add_argument("--alpha", required=True, help="m1,m2")
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_umap)

    p = sub.add_parser("obstruct", help="compare capacities term by term")
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("--upto", type=int, default=100)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("width", help="Gromov width with certificates")
    p.add_argument("--domain", required=True, choices=["dstar-s2", "dstar-rp2"])
    p.add_argument("--upto", type=int, default=obstruct.DEFAULT_K)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("moment-boundary", help="boundary of the moment image at one epsilon")
    p.add_argument("--variant", required=True, choices=["full", "hemisphere"])
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--out", help="output file (.csv or .json); stdout if omitted")
    p.set_defaults(func=cmd_moment_boundary)

    p = sub.add_parser("moment-limit", help="extrapolated limit of the moment image")
    p.add_argument("--variant", required=True, choices=["full", "hemisphere"])
    p.add_argument("--ladder", default="default", help="'default' or comma list of decreasing epsilons")
    p.add_argument("--out", help="output file (.csv or .json); stdout if omitted")
    p.set_defaults(func=cmd_moment_limit)

    p = sub.add_parser("area", help="area enclosed by a curve file and the axes")
    p.add_argument("--curve", required=True)
    p.set_defaults(func=cmd_area)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except NumericalInstabilityError as exc:
        sys.stderr.write(f"numerical instability: {exc}\n")
        return EXIT_UNSTABLE
    except ModelConsistencyError as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return EXIT_FAIL
    except (ZollEchError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
