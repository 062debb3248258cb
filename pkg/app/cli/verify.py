"""`verify`: run the property suites, fanned out through the worker."""
import argparse
import logging
from typing import List

from app.cli.common import add_output_flags, with_timings
from app.core.budget import Budget
from app.core.config import settings
from app.core.exceptions import PropertyFailure
from app.models.reports import ExperimentReport, SuiteResult
from app.properties import SUITE_ORDER

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run property suites")
    parser.add_argument("--suite", choices=SUITE_ORDER + ("all",), default="all")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default {settings.DEFAULT_SEED})")
    add_output_flags(parser)
    parser.set_defaults(handler=handle)


def _collect(suites: List[str], seed: int) -> List[SuiteResult]:
    from app.worker.tasks import run_suite

    pending = [(name, run_suite.delay(name, seed)) for name in suites]
    results = []
    for name, async_result in pending:
        payload = async_result.get(timeout=settings.EXPERIMENT_TIMEOUT_SECONDS)
        results.append(SuiteResult.model_validate(payload))
        logger.info(f"suite {name} finished")
    return results


def handle(args: argparse.Namespace) -> ExperimentReport:
    budget = Budget()
    seed = settings.DEFAULT_SEED if args.seed is None else args.seed
    suites = list(SUITE_ORDER) if args.suite == "all" else [args.suite]
    results = _collect(suites, seed)

    failures = {r.suite: [f.model_dump() for f in r.failures()] for r in results if not r.passed}
    if failures:
        names = sorted(f"{suite}.{f['name']}" for suite, fs in failures.items() for f in fs)
        raise PropertyFailure("PropertyFailed", ", ".join(names), failures)

    report = ExperimentReport(
        command="verify",
        parameters={"suite": args.suite, "seed": seed},
        results={
            "passed": True,
            "suites": {r.suite: {p.name: p.cases for p in r.properties} for r in results},
        },
    )
    return with_timings(report, args, budget)
