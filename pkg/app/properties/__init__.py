"""
Property suites run by `verify`.

Each suite module exposes run(seed) -> SuiteResult. A property is a name,
a finite list of cases and a check returning None or a counterexample.
"""
import logging
from typing import Any, Callable, Dict, Iterable, Optional
from app.models.reports import PropertyResult, SuiteResult

logger = logging.getLogger(__name__)

SUITE_ORDER = ("invariants", "lattice", "complex", "homology")


def prop(name: str, cases: Iterable[Any], check: Callable[[Any], Optional[Any]]) -> PropertyResult:
    count = 0
    for case in cases:
        count += 1
        bad = check(case)
        if bad is not None:
            logger.warning(f"property {name} failed on case {count}")
            return PropertyResult(name=name, passed=False, cases=count, counterexample=bad)
    return PropertyResult(name=name, passed=True, cases=count)


def run_suite(suite: str, seed: int) -> SuiteResult:
    from app.properties import complex_suite, homology_suite, invariants_suite, lattice_suite

    runners: Dict[str, Callable[[int], SuiteResult]] = {
        "invariants": invariants_suite.run,
        "lattice": lattice_suite.run,
        "complex": complex_suite.run,
        "homology": homology_suite.run,
    }
    if suite not in runners:
        from app.core.exceptions import invalid
        raise invalid("BadFlag", f"unknown suite {suite!r}")
    logger.info(f"running suite {suite} (seed {seed})")
    return runners[suite](seed)
