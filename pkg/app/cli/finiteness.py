"""`finiteness`: classical and Bredon lengths from the defining vectors."""
import argparse
import logging

from app.cli.common import add_output_flags, parse_vector, with_timings
from app.core.budget import Budget
from app.core.exceptions import PropertyFailure
from app.models.domain import Engine
from app.models.reports import ExperimentReport
from app.services import families
from app.services.invariants import (
    admissible_partitions,
    derived_vector,
    fixed_set_factors,
    minimal_essential_dimension,
    sign_group,
    validate_pair,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("finiteness", help="finiteness lengths of the group for (w1, w2)")
    parser.add_argument("--w1", required=True, help="comma-separated dominant vector with positive sum")
    parser.add_argument("--w2", required=True, help="comma-separated dominant vector with non-positive sum")
    parser.add_argument("--oracle", action="store_true", help="cross-check against the exhaustive subgroup engine")
    add_output_flags(parser)
    parser.set_defaults(handler=handle)


def _stated(pair, m: int):
    family = families.identify_overlap_pair(pair)
    if family is None:
        return None
    published = families.overlap_pair_stated(family["k"])
    key = "unrestricted_minimal_essential_dimension" if family["doubled"] else "minimal_admissible_essential_dimension"
    return {
        **family,
        "published": published,
        "computed_m": m,
        "discrepancy": published[key] != m,
    }


def handle(args: argparse.Namespace) -> ExperimentReport:
    budget = Budget()
    pair = validate_pair(parse_vector(args.w1), parse_vector(args.w2))
    v = derived_vector(pair)

    m, witness = minimal_essential_dimension(pair, Engine.SEARCH, budget)
    admissible = admissible_partitions(pair, Engine.SEARCH, budget)
    results = {
        "classical": pair.n - 1,
        "bredon": m - 1,
        "m": m,
        "witness": witness.to_json(),
        "admissible_count": len(admissible),
        "derived_vector": v.to_json(),
        "sign_group_order": len(sign_group(pair)),
        "fixed_set": fixed_set_factors(witness, pair),
    }

    if args.oracle:
        oracle_m, oracle_witness = minimal_essential_dimension(pair, Engine.ORACLE, budget)
        oracle_admissible = admissible_partitions(pair, Engine.ORACLE, budget)
        if (oracle_m, oracle_witness) != (m, witness) or oracle_admissible != admissible:
            raise PropertyFailure(
                "EngineMismatch",
                "search and oracle engines disagree",
                {
                    "w1": list(pair.w1),
                    "w2": list(pair.w2),
                    "search": {"m": m, "admissible_count": len(admissible)},
                    "oracle": {"m": oracle_m, "admissible_count": len(oracle_admissible)},
                },
            )
        results["oracle_agrees"] = True

    stated = _stated(pair, m)
    if stated is not None:
        if stated["discrepancy"]:
            logger.info(f"overlap pair k={stated['k']}: computed m={m} differs from the published value")
        results["stated"] = stated

    report = ExperimentReport(
        command="finiteness",
        parameters={"w1": list(pair.w1), "w2": list(pair.w2), "oracle": bool(args.oracle)},
        results=results,
    )
    return with_timings(report, args, budget)
