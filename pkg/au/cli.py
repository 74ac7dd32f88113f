"""Batch verifier. Exit codes: 0 all checks passed, 1 a check failed, 2 usage error."""
import argparse
import sys
from collections.abc import Callable
from pathlib import Path

from dotenv import find_dotenv, load_dotenv
from pydantic import ValidationError

from au import __version__
from au.config import report_dir
from au.errors import AUError, MalformedFragment
from au.logger import VerdictLog, file_logger, standard_logger
from au.models import RunConfig, RunReport
from au.runs import bing, cantor, extend, splitting, star

load_dotenv(find_dotenv(".env", usecwd=True))

logger = standard_logger(__name__)

RUNNERS: dict[str, Callable[[RunConfig], RunReport]] = {
    "cantor": cantor.run,
    "bing": bing.run,
    "extend": extend.run,
    "star": star.run,
    "splitting": splitting.run,
}


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, help="Decimal seed (default 0).")
    parent.add_argument("--format", dest="output_format", choices=["text", "json"])
    parent.add_argument("--output", type=Path, help="Write the report here instead of stdout.")
    parent.add_argument("--verdict-log", type=Path, help="Append one JSON line per verdict.")
    return parent


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="au", description=__doc__)
    parser.add_argument("--version", action="version", version=f"au {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = [_common()]

    p = sub.add_parser("cantor", parents=common, help="Glued Cantor-cube space.")
    p.add_argument("--pairs", type=int, help="Number of random open tuples.")
    p.add_argument("--arity", type=int, help="Largest tuple size.")
    p.add_argument("--index-bound", type=int, help="Box domains lie below this index.")
    p.add_argument("--tail-limit", type=int)
    p.add_argument("--oracle-limit", type=int)
    p.add_argument("--points", type=int, help="Glued and Y points for Hausdorff checks, skipped when --pairs is 0.")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("bing", parents=common, help="Bing's irrational-slope space.")
    p.add_argument("--pairs", type=int)
    p.add_argument("--grid-denominator", type=int)

    p = sub.add_parser("extend", parents=common, help="One-step extension by a new point.")
    p.add_argument("--stages", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--scan", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--progress", type=int, help="Threshold for closure progress of I and J.")
    p.add_argument("--sweeps", type=int)
    p.add_argument("--universe", choices=["naturals", "rationals"], help="Ground set of a custom instance.")
    p.add_argument(
        "--sets",
        nargs=2,
        metavar=("I", "J"),
        help="Run a custom instance on these sets: a built-in name, `a+bN` or `dyadic:level:index`.",
    )
    p.add_argument("--base", nargs="+", metavar="SET", help="Base family of the custom instance.")

    p = sub.add_parser("star", parents=common, help="Finite ⊛-fragments.")
    p.add_argument("--K", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--fragment", type=Path, help="Check a dumped fragment instead of a Cohen table.")
    p.add_argument("--dump", type=Path, help="Write the checked fragment in `K M seed` hex form.")

    p = sub.add_parser("splitting", parents=common, help="Fiber bound for finite families.")
    p.add_argument("--families", type=int)
    p.add_argument("--ground", type=int)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    args = _parser().parse_args(argv)
    return RunConfig(**{key: value for key, value in vars(args).items() if value is not None})


def _write(config: RunConfig, report: RunReport) -> None:
    suffix = "json" if config.output_format == "json" else "txt"
    body = report.to_json() if suffix == "json" else report.to_text().encode()
    target = config.output
    directory = report_dir()
    if directory is not None:
        target = directory / f"{config.subcommand}.{suffix}"
    if target is None:
        sys.stdout.buffer.write(body)
        sys.stdout.flush()
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(body)
    logger.info("📝 Wrote %s", target)


def _log_verdicts(config: RunConfig, report: RunReport) -> None:
    verdicts = file_logger(f"au.verdicts.{config.subcommand}", config.verdict_log, log_format="json")
    sub = config.subcommand
    verdicts.info(VerdictLog(tag="config", subcommand=sub, name="config", passed=True, detail=report.config))
    for check in report.checks:
        verdicts.info(VerdictLog(tag="check", subcommand=sub, name=check.name, passed=check.passed, detail=check.detail))
    verdicts.info(VerdictLog(tag="summary", subcommand=sub, name="summary", passed=report.passed, detail=report.summary))


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    except ValidationError as e:
        print(f"au: invalid arguments\n{e}", file=sys.stderr)
        return 2

    try:
        report = RUNNERS[config.subcommand](config)
    except (OSError, MalformedFragment) as e:
        print(f"au: {e}", file=sys.stderr)
        return 2
    except AUError as e:
        logger.error("❌ %s run aborted: %s", config.subcommand, e)
        return 1

    _write(config, report)
    if config.verdict_log is not None:
        _log_verdicts(config, report)
    if not report.passed:
        logger.warning("⚠️ %d of %d checks failed", len(report.failures), len(report.checks))
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
