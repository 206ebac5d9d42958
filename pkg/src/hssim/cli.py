"""Command line interface for running scenarios, sweeps and the acceptance suite."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from .config import (
    PRESET_ALIASES,
    SCENARIO_PRESETS,
    SWEEP_PRESETS,
    ConfigFieldError,
    ScenarioConfigError,
    get_preset,
    get_sweep_preset,
    load_config,
    load_scenario,
    load_sweep,
)
from .database import create_storage
from .evolution import NumericalBreakdown
from .pipeline import AcceptanceSuite
from .runtime import create_runner

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_BREAKDOWN = 2
EXIT_ACCEPTANCE_FAILURE = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with the configuration-error exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(description="Generalised two-component Hunter-Saxton simulator")
    parser.add_argument(
        "command",
        choices=["run", "sweep", "list-scenarios", "verify", "list-runs"],
        help="Which action to execute",
    )
    parser.add_argument("target", nargs="?", type=Path, help="Scenario or sweep JSON file (run/sweep)")
    parser.add_argument("--config", type=Path, help="Path to an explicit application configuration file")
    parser.add_argument("--seed-preset", help="Run a built-in scenario or sweep instead of a file")
    parser.add_argument("--output-root", type=Path, help="Directory for run outputs (overrides HSSIM_OUTPUT_ROOT)")
    parser.add_argument("--log-level", help="Logging level, e.g. DEBUG or WARNING")
    parser.add_argument("--parallelism", type=int, help="Maximum concurrent sweep cells")
    parser.add_argument("--quick", action="store_true", help="Reduced resolutions for 'verify'")
    parser.add_argument("--only", help="Comma separated acceptance checks for 'verify', e.g. A1,A2")
    parser.add_argument("--limit", type=int, default=25, help="Number of rows shown by 'list-runs'")
    return parser


def _configure_logging(level_name: str) -> None:
    level = logging.getLevelName(level_name.upper())
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s [%(levelname)s] %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _list_scenarios() -> int:
    for name, scenario in SCENARIO_PRESETS.items():
        print(f"{name:32s} alpha={scenario.alpha:g} kappa={scenario.kappa:g} n={scenario.n}  {scenario.description}")
    for alias, target in PRESET_ALIASES.items():
        print(f"{alias:32s} alias of {target}")
    for name, sweep in SWEEP_PRESETS.items():
        alphas = ",".join(f"{a:g}" for a in sweep.alphas)
        kappas = ",".join(f"{k:g}" for k in sweep.kappas)
        print(f"{name:32s} sweep alpha={{{alphas}}} kappa={{{kappas}}}  {sweep.base.description}")
    return EXIT_OK


def _verify(quick: bool, only: Optional[str]) -> int:
    selected = [name.strip().upper() for name in only.split(",")] if only else None
    results = AcceptanceSuite(quick=quick).run_all(only=selected)
    for result in results:
        verdict = "PASS" if result.passed else "FAIL"
        measured = ", ".join(f"{key}={value:.6g}" for key, value in result.measured.items())
        print(f"{result.name:4s} {verdict}  {result.title}" + (f"  [{measured}]" if measured else ""))
        if result.detail:
            print(f"     {result.detail}")
    return EXIT_OK if results and all(result.passed for result in results) else EXIT_ACCEPTANCE_FAILURE


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG_ERROR
    try:
        config = load_config(args.config)
    except (ConfigFieldError, ValueError) as exc:
        _configure_logging(args.log_level or "INFO")
        LOGGER.error("Invalid application configuration: %s", exc)
        return EXIT_CONFIG_ERROR
    _configure_logging(args.log_level or config.logging.level)

    if args.command == "list-scenarios":
        return _list_scenarios()
    if args.command == "verify":
        return _verify(args.quick, args.only)
    if args.command == "list-runs":
        url = config.registry_url(args.output_root)
        if not url:
            LOGGER.warning("Run registry disabled; nothing to list")
            return EXIT_OK
        storage = create_storage(url, echo=config.storage.echo_sql)
        try:
            for run in storage.list_runs(limit=args.limit):
                t0 = f"{run.blowup_time:.6f}" if run.blowup_time is not None else "-"
                print(
                    f"{run.identifier:5d} {run.name:36s} {run.status:20s} t_final={run.t_final:.6f} T0={t0} {run.output_dir or ''}"
                )
        finally:
            storage.dispose()
        return EXIT_OK

    try:
        if args.command == "run":
            scenario = get_preset(args.seed_preset) if args.seed_preset else None
            if scenario is None:
                if args.target is None:
                    LOGGER.error("'run' needs a scenario file or --seed-preset")
                    return EXIT_CONFIG_ERROR
                scenario = load_scenario(args.target)
        else:
            sweep = get_sweep_preset(args.seed_preset) if args.seed_preset else None
            if sweep is None:
                if args.target is None:
                    LOGGER.error("'sweep' needs a sweep file or --seed-preset")
                    return EXIT_CONFIG_ERROR
                sweep = load_sweep(args.target)
            if args.parallelism is not None and args.parallelism < 1:
                LOGGER.error("--parallelism must be at least 1")
                return EXIT_CONFIG_ERROR
    except ScenarioConfigError as exc:
        LOGGER.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG_ERROR

    resources = create_runner(config, output_root=args.output_root)
    try:
        if args.command == "run":
            report = resources.runner.run_scenario(scenario)
            LOGGER.info("Run %s: %s at t=%.6f (%s)", report.name, report.status, report.outcome.t_final, report.output_dir)
            if report.status == "NumericalBreakdown":
                return EXIT_RUNTIME_BREAKDOWN
            return EXIT_OK
        sweep_report = resources.runner.run_sweep(sweep, parallelism=args.parallelism)
        LOGGER.info("Sweep %s finished: %d cells in %s", sweep_report.name, len(sweep_report.rows), sweep_report.output_dir)
        return EXIT_RUNTIME_BREAKDOWN if sweep_report.failed else EXIT_OK
    except NumericalBreakdown as exc:
        LOGGER.error("Numerical breakdown: %s", exc)
        return EXIT_RUNTIME_BREAKDOWN
    except OSError:
        LOGGER.exception("Failed to write outputs")
        return EXIT_RUNTIME_BREAKDOWN
    finally:
        resources.close()


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())
