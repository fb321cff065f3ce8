"""
Command-line front end

    python -m dunklkit verify <suite> [--threads N] [--seed S] [--out DIR] [--config FILE] [--lambdas L]
    python -m dunklkit run <config> [--threads N] [--seed S] [--out DIR]
    python -m dunklkit report <in> <out>

Exit codes: 0 pass, 1 check failure, 2 usage or config error, 3 I/O error.
"""

import argparse
import logging
import traceback
from pathlib import Path
from typing import List, Optional, Sequence

from .config import ExperimentConfig, bundled_config
from .errors import ConfigError, DunklkitError
from .experiments import run_experiment
from .harness import SuiteContext, SuiteFactory
from .report_exporter import ReportExporter
from .settings import configure_logging, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SUITE_NAMES = ("symbolic", "translation", "poisson", "means", "area", "boundary", "all")


def _lambdas(text: str) -> List[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"cannot parse multiplicities {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dunklkit", description="Dunkl harmonic analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--threads", type=int, default=None, help="worker threads (default DUNKLKIT_THREADS or 1)")
        p.add_argument("--seed", type=int, default=None, help="seed of samplers and random probes")
        p.add_argument("--out", default=None, help="output directory (default DUNKLKIT_OUT)")

    verify = sub.add_parser("verify", help="run an invariant verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--config", default=None, help="TOML config supplying tolerances and budgets")
    verify.add_argument("--lambdas", type=_lambdas, default=None, help="Z_2^d multiplicities, e.g. '0.5,1'")
    common(verify)

    run = sub.add_parser("run", help="run a config-driven experiment")
    run.add_argument("config", help="TOML config path or the name of a bundled config")
    common(run)

    report = sub.add_parser("report", help="convert a JSON report to json, csv or md by suffix")
    report.add_argument("source")
    report.add_argument("target")
    return parser


def _load_config(text: str) -> ExperimentConfig:
    path = Path(text)
    if not path.exists():
        path = bundled_config(path.name)
    return ExperimentConfig.load(path)


def run_verify(args: argparse.Namespace, threads: int, out_dir: str) -> int:
    context = SuiteContext(seed=args.seed if args.seed is not None else 0)
    if args.config:
        config = _load_config(args.config)
        context = SuiteContext(
            seed=config.seed if args.seed is None else args.seed,
            tolerances=config.tolerances,
            budget=config.quadrature,
            lambdas=tuple(config.root_system.lambdas) if config.root_system.kind == "Z2d" else None,
        )
    if args.lambdas is not None:
        context.lambdas = tuple(args.lambdas)
    reports = SuiteFactory().run(args.suite, context, threads)
    exporter = ReportExporter(out_dir)
    path = exporter.export_verify(reports, args.suite, context.seed)
    failed = [f"{r.suite}/{c.task_id}" for r in reports for c in r.results if not c.passed]
    if failed:
        logger.error(f"{len(failed)} check(s) failed: {failed}; report at {path}")
        return EXIT_FAILED
    logger.info(f"All checks passed; report at {path}")
    return EXIT_OK


def run_config(args: argparse.Namespace, threads: int, out_dir: str) -> int:
    config = _load_config(args.config)
    result = run_experiment(config, threads=threads, seed=args.seed)
    target = config.output.directory if args.out is None and config.output.directory else out_dir
    exporter = ReportExporter(target)
    exporter.export_experiment(result.to_dict(), config.output.stem, config.output.formats)
    return EXIT_OK if result.passed else EXIT_FAILED


def run_report(args: argparse.Namespace) -> int:
    ReportExporter(".").convert(args.source, args.target)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = load_settings()
    configure_logging(settings.log_level)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    threads = getattr(args, "threads", None) or settings.threads
    out_dir = getattr(args, "out", None) or settings.output_dir
    try:
        if args.command == "verify":
            return run_verify(args, threads, out_dir)
        if args.command == "run":
            return run_config(args, threads, out_dir)
        return run_report(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return e.exit_code
    except DunklkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unexpected error: {e}\n{traceback.format_exc()}")
        return EXIT_FAILED


__all__ = ["build_parser", "main", "run_config", "run_report", "run_verify"]
