import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Sequence

from .config import LOG_LEVEL
from .errors import (
    ConfigError,
    InfeasibleRequestError,
    InvariantViolationError,
    TandemNetError,
)
from .runner import load_settings, run_experiment, write_artifacts
from .runner.settings import KINDS, ExperimentSettings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INVARIANT = 4


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run-tandem-net",
        description="Design and evaluate tandem detection networks from a YAML experiment file.",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log per-DM and per-sweep details"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        command = commands.add_parser(kind, help=f"run a {kind} experiment")
        command.add_argument("--config", type=Path, required=True, help="experiment YAML")
        command.add_argument("--out", type=Path, help="output directory override")
        command.add_argument("--seed", type=_seed, help="seed override (u64)")
    return parser


def resolve_settings(args: argparse.Namespace) -> ExperimentSettings:
    settings = load_settings(args.config)
    declared = (settings.echo.get("experiment") or {}).get("kind")
    if declared is not None and declared != args.command:
        raise ConfigError(
            f"experiment.kind is {declared!r} but the {args.command!r} subcommand was used",
            str(args.config),
        )
    return settings.overridden(kind=args.command, out_dir=args.out, seed=args.seed)


async def main_async(args: argparse.Namespace) -> int:
    try:
        settings = resolve_settings(args)
        result = await run_experiment(settings)
        manifest_path = write_artifacts(settings, result)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return EXIT_CONFIG
    except InfeasibleRequestError as e:
        logger.error(f"Infeasible request ({e.cardinality} combinations): {e}")
        return EXIT_INFEASIBLE
    except InvariantViolationError as e:
        logger.critical(f"Invariant violated: {e}", exc_info=True)
        return EXIT_INVARIANT
    except TandemNetError as e:
        logger.critical(f"Run failed: {e}", exc_info=True)
        return EXIT_INVARIANT
    except Exception as e:
        logger.critical(f"Unexpected error: {e}", exc_info=True)
        return EXIT_INVARIANT
    logger.info(f"Done. Manifest: {manifest_path}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Synchronous entry point of ``run-tandem-net``."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else getattr(logging, LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")
    logger.debug(f"Invoked with {vars(args)}")
    return asyncio.run(main_async(args))


if __name__ == "__main__":
    sys.exit(main())
