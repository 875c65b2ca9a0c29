"""Command-line front end.

Exit codes: 0 success (converged), 1 usage or configuration error,
2 optimization did not converge (infeasible or stalled).
"""
import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

sys.path.insert(0, str(Path(__file__).parent.parent))

from analysis.ramsey import default_params, saddle_path, steady_state, transversality_diagnostic  # noqa: E402
from analysis.spatial_regression import (  # noqa: E402
    compare_magnitude,
    compare_to_dice,
    fit,
    fit_all_variants,
    load_states,
    pinned_variant,
)
from core.config import RunnerSettings, load_config, scenario_path  # noqa: E402
from core.errors import DiceError  # noqa: E402
from core.logger import StructuredLogger, setup_logging  # noqa: E402
from core.schemas import ModelConfig, SolverSettings, SolveStatus  # noqa: E402
from damages.damage_functions import genealogy  # noqa: E402
from damages.estimates import estimate_points, fit_quadratic_to_points  # noqa: E402
from reporting.figures import (  # noqa: E402
    plot_estimates,
    plot_genealogy,
    plot_phase_portrait,
    plot_spatial_fit,
    plot_sweep,
)
from reporting.reporter import RunReporter  # noqa: E402
from solver.optimizer import solve  # noqa: E402
from solver.sweep import run_sweep, summarize_sweep  # noqa: E402

import pandas as pd  # noqa: E402
from pydantic import ValidationError  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
FIGURE_IDS = ("fig1", "fig2", "fig3")


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Permutation of the multi-start order")
    parser.add_argument("--periods", type=int, default=None, help="Number of grid periods")
    parser.add_argument("--step-years", type=int, default=None, help="Years per period")
    parser.add_argument("--solver-tol", type=float, default=1e-6, help="Projected-gradient tolerance")
    parser.add_argument("--starts", type=int, default=5, help="Number of multi-start initial paths (1-5)")
    parser.add_argument("--max-iterations", type=int, default=3000)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="dice",
        description="DICE damage sensitivity engine.",
        epilog="Exit codes: 0 converged, 1 usage error, 2 infeasible or stalled.",
    )
    parser.add_argument("--log-level", default=None)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    solve_cmd = commands.add_parser("solve", help="Solve one scenario")
    solve_cmd.add_argument("config", help="Scenario file or bundled scenario name")
    solve_cmd.add_argument("--scenario", choices=("optimal", "baseline"), default="optimal")
    solve_cmd.add_argument("--out", type=Path, default=None)
    _add_solver_flags(solve_cmd)

    sweep_cmd = commands.add_parser("sweep", help="Damage-coefficient sensitivity sweep")
    sweep_cmd.add_argument("config", help="Scenario file or bundled scenario name")
    sweep_cmd.add_argument("--a-values", required=True, help="Comma-separated damage coefficients")
    sweep_cmd.add_argument("--scenario", choices=("optimal", "baseline"), default="optimal")
    sweep_cmd.add_argument("--out", type=Path, default=None)
    sweep_cmd.add_argument("--workers", type=int, default=None)
    _add_solver_flags(sweep_cmd)

    figures_cmd = commands.add_parser("figures", help="Figures from the embedded datasets")
    figures_cmd.add_argument("--which", choices=FIGURE_IDS, nargs="+", required=True)
    figures_cmd.add_argument("--out", type=Path, default=None)

    ramsey_cmd = commands.add_parser("ramsey", help="Ramsey steady state and saddle path")
    ramsey_cmd.add_argument("--k0-ratio", type=float, default=0.5, help="Initial capital relative to k*")
    ramsey_cmd.add_argument("--alpha", type=float, default=1.45)
    ramsey_cmd.add_argument("--rho", type=float, default=0.03)
    ramsey_cmd.add_argument("--delta", type=float, default=0.07)
    ramsey_cmd.add_argument("--gamma", type=float, default=0.3)
    ramsey_cmd.add_argument("--tfp", type=float, default=1.0)
    ramsey_cmd.add_argument("--horizon", type=float, default=300.0)
    ramsey_cmd.add_argument("--out", type=Path, default=None)

    regress_cmd = commands.add_parser("regress", help="State-level temperature/GSP regression")
    regress_cmd.add_argument("--dice-a", type=float, default=0.00227)
    regress_cmd.add_argument("--out", type=Path, default=None)
    return parser


def _solver_settings(args: argparse.Namespace) -> SolverSettings:
    return SolverSettings(
        tolerance=args.solver_tol,
        seed=args.seed,
        starts=args.starts,
        max_iterations=args.max_iterations,
    )


def _load(args: argparse.Namespace) -> tuple[Path, ModelConfig]:
    path = scenario_path(args.config)
    config = load_config(path)
    if args.periods or args.step_years:
        config = config.with_grid(periods=args.periods, step_years=args.step_years)
    return path, config


def cmd_solve(args: argparse.Namespace, out_dir: Path, cli: StructuredLogger) -> int:
    path, config = _load(args)
    settings = _solver_settings(args)
    report = solve(config, args.scenario, settings)

    reporter = RunReporter(out_dir, "solve")
    reporter.write_solve(report)
    reporter.write_manifest([str(path)], settings.model_dump(), config.config_hash())
    cli.info("Solve finished", status=report.status.value, out=out_dir)
    if report.status != SolveStatus.CONVERGED:
        print(f"{report.status.value}: {report.message}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _parse_a_values(raw: str) -> list[float]:
    values = [item.strip() for item in raw.split(",") if item.strip()]
    if not values:
        raise UsageError("--a-values must list at least one coefficient")
    try:
        return [float(v) for v in values]
    except ValueError as e:
        raise UsageError(f"invalid --a-values: {e}") from e


async def cmd_sweep(args: argparse.Namespace, out_dir: Path, cli: StructuredLogger, workers: int) -> int:
    a_values = _parse_a_values(args.a_values)
    path, config = _load(args)
    settings = _solver_settings(args)
    reports = await run_sweep(config, a_values, args.scenario, settings, workers)

    reporter = RunReporter(out_dir, "sweep")
    for index, report in enumerate(reports):
        a = report.config.damage.coefficients["a"]
        subdir = f"run_{index:02d}_a{a:g}"
        reporter.write_text_report(report, subdir)
        reporter.write_config(report.config, subdir)
        reporter.write_trajectory(report, subdir)
    reporter.write_summary(summarize_sweep(reports))
    for figure in plot_sweep(reports, out_dir):
        reporter.register(figure)
    reporter.write_manifest([str(path)], settings.model_dump(), config.config_hash())

    converged = sum(report.converged for report in reports)
    cli.info("Sweep finished", runs=len(reports), converged=converged, out=out_dir)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_figures(args: argparse.Namespace, out_dir: Path, cli: StructuredLogger) -> int:
    reporter = RunReporter(out_dir, "figures")
    for figure in args.which:
        if figure == "fig1":
            reporter.register(plot_estimates(estimate_points(), out_dir / "fig1_estimates.svg"))
        elif figure == "fig2":
            reporter.register(plot_genealogy(out_dir / "fig2_genealogy.svg"))
        else:
            states, national = load_states()
            result = fit(states, pinned_variant(), national.gsp_percap)
            reporter.register(plot_spatial_fit(states, result, out_dir / "fig3_spatial_fit.svg"))
    reporter.write_manifest()
    cli.info("Figures written", which=",".join(args.which), out=out_dir)
    return EXIT_OK


def cmd_ramsey(args: argparse.Namespace, out_dir: Path, cli: StructuredLogger) -> int:
    params = default_params(alpha=args.alpha, rho=args.rho, delta=args.delta, gamma=args.gamma, tfp=args.tfp)
    state = steady_state(params)
    result = saddle_path(args.k0_ratio * state.k_star, params, horizon=args.horizon)
    diagnostic = transversality_diagnostic(result, params)

    reporter = RunReporter(out_dir, "ramsey")
    path_frame = pd.DataFrame({
        "t": result.path.times, "k": result.path.k, "c": result.path.c, "transversality": diagnostic.values,
    })
    reporter.write_frame(path_frame, "saddle_path.csv")
    steady_frame = pd.DataFrame([{
        "k_star": state.k_star,
        "c_star": state.c_star,
        "eigenvalue_stable": state.eigenvalues[0].real,
        "eigenvalue_unstable": state.eigenvalues[1].real,
        "c0": result.c0,
        "converged": result.converged,
        "transversality_vanishing": diagnostic.vanishing,
    }])
    reporter.write_frame(steady_frame, "steady_state.csv")
    reporter.register(plot_phase_portrait(params, state.k_star, state.c_star, result, out_dir / "phase_portrait.svg"))
    reporter.write_manifest(solver_settings=params.model_dump())
    cli.info("Ramsey analysis finished", k_star=state.k_star, c0=result.c0, converged=result.converged)
    return EXIT_OK


def cmd_regress(args: argparse.Namespace, out_dir: Path, cli: StructuredLogger) -> int:
    states, national = load_states()
    fits = fit_all_variants(states, national.gsp_percap)
    pinned = pinned_variant()

    rows = [
        {
            "variant": result.variant.label,
            "beta": result.beta,
            "intercept": result.intercept,
            "r_squared": result.r_squared,
            "pinned": result.variant == pinned,
            "vs_dice": compare_to_dice(result, args.dice_a).outcome,
        }
        for result in fits
    ]
    points = estimate_points()
    estimate_fit = fit_quadratic_to_points(points)
    dice = genealogy()[2018].coefficients["a"]
    rows.append({
        "variant": "estimate-points-quadratic",
        "beta": -estimate_fit.a,
        "intercept": 0.0,
        "r_squared": float("nan"),
        "pinned": False,
        "vs_dice": compare_magnitude(estimate_fit.a, dice),
    })

    reporter = RunReporter(out_dir, "regress")
    reporter.write_frame(pd.DataFrame(rows), "regression.csv")
    pinned_fit = next(result for result in fits if result.variant == pinned)
    reporter.register(plot_spatial_fit(states, pinned_fit, out_dir / "fig3_spatial_fit.svg"))
    reporter.write_manifest()
    cli.info("Regression finished", beta=pinned_fit.beta, r_squared=pinned_fit.r_squared)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    runner = RunnerSettings()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(args.log_level or runner.log_level, runner.log_dir)
    cli = StructuredLogger("cli", args.log_level or runner.log_level).bind(command=args.command)
    out_dir = Path(args.out) if args.out else runner.output_dir / args.command

    try:
        if args.command == "solve":
            return cmd_solve(args, out_dir, cli)
        if args.command == "sweep":
            return asyncio.run(cmd_sweep(args, out_dir, cli, args.workers or runner.workers))
        if args.command == "figures":
            return cmd_figures(args, out_dir, cli)
        if args.command == "ramsey":
            return cmd_ramsey(args, out_dir, cli)
        return cmd_regress(args, out_dir, cli)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DiceError, ValidationError) as e:
        cli.error(f"Command failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
