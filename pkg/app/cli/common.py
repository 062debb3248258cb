"""
Shared CLI plumbing: flag parsers, report emission and the error boundary.

Handlers return an ExperimentReport and raise AbelsError subclasses; `execute`
turns both into stdout JSON plus a process exit code.
"""
import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, TextIO, Tuple

from app.core.budget import Budget
from app.core.exceptions import AbelsError, invalid
from app.models.domain import Model, SignVector
from app.models.reports import ExperimentReport
from app.services.padic import is_prime

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], ExperimentReport]

# flags whose values may start with "-" (negative rationals)
NEGATIVE_VALUE_FLAGS = ("--interval", "--into", "--w", "--w1", "--w2")
NEGATIVE_VALUE = re.compile(r"-\d")


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; here bad flags are validation errors."""

    def error(self, message: str):
        raise invalid("BadFlag", message)


def normalize_argv(argv: Sequence[str]) -> List[str]:
    """Glue `--interval -2:0` into `--interval=-2:0` so argparse accepts it."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in NEGATIVE_VALUE_FLAGS and i + 1 < len(argv) and NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def parse_vector(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise invalid("BadFlag", f"not an integer vector: {text!r}")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise invalid("BadFlag", f"not a rational number: {text!r}")


def parse_interval(text: str) -> Tuple[Fraction, Fraction]:
    """`a:b` with exact rationals, e.g. `-3/2:0`."""
    lo, sep, hi = text.partition(":")
    if not sep:
        raise invalid("BadFlag", f"interval must look like a:b, got {text!r}")
    return parse_rational(lo), parse_rational(hi)


def parse_signs(text: str) -> SignVector:
    return SignVector.parse(text)


def parse_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise invalid("BadFlag", f"not an integer: {text!r}")
    if not is_prime(p):
        raise invalid("BadFlag", f"{p} is not prime")
    return p


def parse_model(text: str) -> Model:
    try:
        return Model(text)
    except ValueError:
        raise invalid("BadFlag", f"model must be one of {[m.value for m in Model]}")


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")


def with_timings(report: ExperimentReport, args: argparse.Namespace, budget: Budget) -> ExperimentReport:
    if getattr(args, "timings", False):
        report.timings = {"total_seconds": round(budget.elapsed, 3)}
    return report


def emit(report: ExperimentReport, fmt: str = "json", stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write(f"{report.command}\n")
        for key in sorted(report.results):
            stream.write(f"  {key}: {json.dumps(report.results[key], sort_keys=True)}\n")
        return
    stream.write(report.to_json() + "\n")


def execute(handler: Handler, args: argparse.Namespace, stream: Optional[TextIO] = None) -> int:
    """Run one handler; map errors to JSON on stdout and an exit code."""
    stream = stream or sys.stdout
    try:
        report = handler(args)
    except AbelsError as e:
        logger.warning(f"{e.condition}: {e.detail}")
        stream.write(json.dumps(e.to_dict(), sort_keys=True, separators=(",", ":"), default=str) + "\n")
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        stream.write(json.dumps({"error": "InternalError", "detail": str(e)}, separators=(",", ":")) + "\n")
        return 1
    emit(report, getattr(args, "format", "json"), stream)
    return 0
