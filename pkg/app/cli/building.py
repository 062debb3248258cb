"""
`building`: finite truncations of the building around the standard lattice.

  ball            vertex and simplex counts (optional DOT / JSON dumps)
  slice-homology  reduced homology of a height-interval full subcomplex
  fixed-points    fixed subcomplex of a diagonal involution, split tallies
"""
import argparse
import json
import logging
from pathlib import Path
from typing import Dict, Optional

from app.cli.common import (
    add_output_flags,
    parse_interval,
    parse_model,
    parse_prime,
    parse_signs,
    parse_vector,
    with_timings,
)
from app.core.budget import Budget
from app.core.config import settings
from app.core.exceptions import invalid
from app.models.domain import HeightFunction, Model
from app.models.reports import ExperimentReport, Truncation
from app.services import lattice as lat
from app.services.complex import (
    Ball,
    Depth,
    FixedBySigns,
    HeightInterval,
    SimplicialComplex,
    ball,
    build_complex,
    fixed_tallies,
    full_subcomplex,
    product_check,
)
from app.services.homology import euler_characteristic, induced_map_class, reduced_homology

logger = logging.getLogger(__name__)

WITNESS_LIMIT = 5


def _common_flags(parser: argparse.ArgumentParser, default_model: Optional[str]) -> None:
    parser.add_argument("--p", type=str, required=True, help="prime")
    parser.add_argument("--dim", type=int, required=True, help="dimension of the vector space (>= 2)")
    parser.add_argument("--radius", type=int, required=True, help="edge radius of the ball")
    parser.add_argument("--model", default=default_model, help="quotient or extended")
    parser.add_argument("--cap", type=int, default=None, help=f"vertex cap (default {settings.VERTEX_CAP})")
    parser.add_argument("--json-dump", default=None, help="write the complex as JSON to this path")
    add_output_flags(parser)


def register(subparsers) -> None:
    parser = subparsers.add_parser("building", help="experiments on truncated buildings")
    commands = parser.add_subparsers(dest="building_command", required=True)

    p_ball = commands.add_parser("ball", help="ball around the standard vertex")
    _common_flags(p_ball, Model.QUOTIENT.value)
    p_ball.add_argument("--w", default=None, help="height direction used to annotate the DOT export")
    p_ball.add_argument("--dot", default=None, help="write the 1-skeleton in DOT format to this path")
    p_ball.set_defaults(handler=handle_ball)

    p_slice = commands.add_parser("slice-homology", help="homology of a horosphere slice")
    _common_flags(p_slice, Model.QUOTIENT.value)
    p_slice.add_argument("--w", required=True, help="dominant height direction")
    p_slice.add_argument("--interval", required=True, help="height interval a:b")
    p_slice.add_argument("--into", default=None, help="larger interval c:d; reports the induced map")
    p_slice.add_argument("--deep", action="store_true", help="keep only vertices whose link lies in the ball")
    p_slice.set_defaults(handler=handle_slice)

    p_fixed = commands.add_parser("fixed-points", help="fixed set of a diagonal involution")
    _common_flags(p_fixed, Model.EXTENDED.value)
    p_fixed.add_argument("--signs", required=True, help="sign vector such as +-+-")
    p_fixed.set_defaults(handler=handle_fixed)


def _ball(args: argparse.Namespace, budget: Budget) -> Ball:
    p = parse_prime(args.p)
    if args.dim < 2:
        raise invalid("BadFlag", "--dim must be at least 2")
    if args.radius < 0:
        raise invalid("BadFlag", "--radius must be non-negative")
    if args.cap is not None and args.cap <= 0:
        raise invalid("BadFlag", "--cap must be positive")
    model = parse_model(args.model)
    return ball(lat.standard_lattice(p, args.dim), args.radius, model, cap=args.cap, budget=budget)


def _parameters(args: argparse.Namespace, **extra) -> Dict:
    params = {"p": int(args.p), "dim": args.dim, "radius": args.radius, "model": args.model}
    params.update({k: v for k, v in extra.items() if v is not None})
    return params


def _truncation(args: argparse.Namespace, deep: Optional[bool] = None) -> Truncation:
    return Truncation(
        radius=args.radius,
        cap=args.cap or settings.VERTEX_CAP,
        deep=deep,
        model=args.model,
    )


def _dump(x: SimplicialComplex, args: argparse.Namespace) -> None:
    if args.json_dump:
        Path(args.json_dump).write_text(json.dumps(x.to_json(), sort_keys=True))
        logger.info(f"complex written to {args.json_dump}")


def handle_ball(args: argparse.Namespace) -> ExperimentReport:
    budget = Budget()
    b = _ball(args, budget)
    x = build_complex(b.vertices, b.model, budget)
    _dump(x, args)
    if args.dot:
        heights = None
        if args.w:
            h = HeightFunction(tuple(parse_vector(args.w)))
            heights = {i: lat.height(v, h) for i, v in enumerate(x.vertices)}
        Path(args.dot).write_text(x.to_dot(heights))
        logger.info(f"1-skeleton written to {args.dot}")
    results = {
        "vertices": len(x.vertices),
        "edges": len(x.simplices.get(1, [])),
        "f_vector": x.f_vector(),
        "dimension": x.dimension,
        "deep_vertices": len(b.deep()),
        "euler_characteristic": euler_characteristic(x),
        "neighbor_count": lat.expected_neighbor_count(int(args.p), args.dim, b.model),
    }
    report = ExperimentReport(
        command="building ball",
        parameters=_parameters(args),
        results=results,
        truncation=_truncation(args),
    )
    return with_timings(report, args, budget)


def _slice(x: SimplicialComplex, b: Ball, h: HeightFunction, interval, deep: bool) -> SimplicialComplex:
    pred = HeightInterval(h, *interval)
    if deep:
        pred = pred & Depth(b, b.radius - 1)
    return full_subcomplex(x, pred)


def _homology_payload(x: SimplicialComplex) -> Dict:
    if not x.vertices:
        return {"vertices": 0, "empty": True}
    return {
        "vertices": len(x.vertices),
        "f_vector": x.f_vector(),
        "homology": reduced_homology(x).to_json(),
    }


def handle_slice(args: argparse.Namespace) -> ExperimentReport:
    budget = Budget()
    h = HeightFunction(tuple(parse_vector(args.w)))
    interval = parse_interval(args.interval)
    into = parse_interval(args.into) if args.into else None
    b = _ball(args, budget)
    if len(h) != b.center.dim:
        raise invalid("LengthMismatch", "--w must have --dim entries")
    x = build_complex(b.vertices, b.model, budget)
    sub = _slice(x, b, h, interval, args.deep)
    results = _homology_payload(sub)
    if into is not None:
        if not (into[0] <= interval[0] and interval[1] <= into[1]):
            raise invalid("BadFlag", "--into must contain --interval")
        sup = _slice(x, b, h, into, args.deep)
        results["into"] = _homology_payload(sup)
        if sub.vertices:
            results["induced_maps"] = {
                str(k): induced_map_class(sub, sup, k).to_json() for k in range(sub.dimension + 1)
            }
    report = ExperimentReport(
        command="building slice-homology",
        parameters=_parameters(
            args,
            w=list(h.w),
            interval=[str(interval[0]), str(interval[1])],
            into=[str(into[0]), str(into[1])] if into else None,
        ),
        results=results,
        truncation=_truncation(args, deep=bool(args.deep)),
    )
    _dump(sub, args)
    return with_timings(report, args, budget)


def handle_fixed(args: argparse.Namespace) -> ExperimentReport:
    budget = Budget()
    s = parse_signs(args.signs)
    if parse_model(args.model) != Model.EXTENDED:
        raise invalid("ClassModelMismatch", "fixed-points runs on the extended model")
    if len(s) != args.dim:
        raise invalid("LengthMismatch", "--signs must have --dim entries")
    b = _ball(args, budget)
    x = build_complex(b.vertices, b.model, budget)
    fixed = full_subcomplex(x, FixedBySigns((s,)))
    witnesses = []
    for v in fixed.vertices:
        analysis = lat.involution_analysis(s, v)
        if not analysis.splits:
            witnesses.append({"lattice": v.to_json(), **analysis.to_json()})
            if len(witnesses) >= WITNESS_LIMIT:
                break
    results = {
        "tallies": fixed_tallies(b.vertices, s),
        "product_check": product_check(x, [s], budget=budget),
        "fixed_subcomplex": _homology_payload(fixed),
        "fixed_not_split_examples": witnesses,
    }
    _dump(fixed, args)
    report = ExperimentReport(
        command="building fixed-points",
        parameters=_parameters(args, signs=str(s)),
        results=results,
        truncation=_truncation(args),
    )
    return with_timings(report, args, budget)
