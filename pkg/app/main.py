"""
CLI entrypoint.

    abels finiteness --w1 1,0,0 --w2 0,0,-1
    abels building ball --p 3 --dim 2 --radius 1 --model quotient
    abels verify --suite all --seed 7

Reports go to stdout as JSON; logs go to stderr.
"""
import logging
import sys
from typing import List, Optional

from app.cli import building, finiteness, verify
from app.cli.common import ArgumentParser, execute, normalize_argv
from app.core.config import settings
from app.core.exceptions import AbelsError

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def init_sentry() -> None:
    if not settings.SENTRY_DSN:
        return
    try:
        import sentry_sdk

        sentry_sdk.init(
            dsn=settings.SENTRY_DSN,
            environment=settings.ENVIRONMENT,
            traces_sample_rate=1.0 if settings.is_local else 0.1,
        )
        logger.info("Sentry monitoring initialized")
    except ImportError:
        logger.warning("Sentry SDK not installed")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="abels", description="Finiteness lengths and building experiments")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    finiteness.register(subparsers)
    building.register(subparsers)
    verify.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    init_sentry()
    argv = normalize_argv(sys.argv[1:] if argv is None else argv)
    logger.debug(f"Environment: {settings.ENVIRONMENT}, args: {argv}")
    try:
        args = build_parser().parse_args(argv)
    except AbelsError as e:
        return execute(_raise(e), None)
    return execute(args.handler, args)


def _raise(error: AbelsError):
    def handler(_args):
        raise error

    return handler


if __name__ == "__main__":
    sys.exit(main())
