"""
Celery tasks: one property suite per task.

Results travel as plain JSON (SuiteResult.model_dump) so any result backend
can carry them.
"""
import logging
from typing import Any, Dict

from app.properties import run_suite as run_property_suite
from app.worker.celery_app import celery_app

logger = logging.getLogger(__name__)


@celery_app.task(name="app.worker.tasks.run_suite")
def run_suite(suite: str, seed: int) -> Dict[str, Any]:
    """Run one suite with a fixed seed and return its JSON-able result."""
    result = run_property_suite(suite, seed)
    failed = [p.name for p in result.failures()]
    if failed:
        logger.warning(f"suite {suite} (seed {seed}) failed: {failed}")
    else:
        logger.info(f"suite {suite} (seed {seed}) passed {len(result.properties)} properties")
    return result.model_dump()
