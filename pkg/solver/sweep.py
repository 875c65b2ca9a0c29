import asyncio
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Optional, Sequence

import numpy as np

from core.errors import ConfigValidationError
from core.logger import StructuredLogger
from core.schemas import ModelConfig, SolveReport, SolverSettings, SolveStatus, SweepRow
from solver.optimizer import solve

logger = logging.getLogger(__name__)

SWEEP_A_VALUES = (0.00236, 0.16236, 0.18236, 0.19236)
DAMAGE_COEFFICIENT = "a"
# Damage counts as recovered once it falls to this share of its peak.
RECOVERY_SHARE = 0.5


def _solve_one(config: ModelConfig, a: float, scenario: str, settings: SolverSettings) -> SolveReport:
    return solve(config.with_damage_coefficient(DAMAGE_COEFFICIENT, a), scenario, settings)


def _failed_report(config: ModelConfig, a: float, scenario: str, error: BaseException) -> SolveReport:
    return SolveReport(
        status=SolveStatus.FAILED,
        objective=math.nan,
        iterations=0,
        kkt_residual=math.nan,
        message=f"run crashed: {type(error).__name__}: {error}",
        scenario=scenario,
        config=config.with_damage_coefficient(DAMAGE_COEFFICIENT, a),
    )


async def run_sweep(
    config: ModelConfig,
    a_values: Sequence[float],
    scenario: str = "optimal",
    settings: Optional[SolverSettings] = None,
    workers: int = 1,
) -> list[SolveReport]:
    if not a_values:
        raise ConfigValidationError("a_values must not be empty", key="a_values")
    if DAMAGE_COEFFICIENT not in config.damage.coefficients:
        raise ConfigValidationError(
            f"damage family {config.damage.family.value} has no coefficient a", key="damage.a"
        )

    settings = settings or SolverSettings()
    sweep_logger = StructuredLogger("solver.sweep").bind(scenario=scenario, workers=workers)
    sweep_logger.info("Starting sensitivity sweep", runs=len(a_values))

    loop = asyncio.get_running_loop()
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        tasks = [
            loop.run_in_executor(executor, partial(_solve_one, config, float(a), scenario, settings))
            for a in a_values
        ]
        results = await asyncio.gather(*tasks, return_exceptions=True)
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    reports = []
    for a, result in zip(a_values, results):
        if isinstance(result, BaseException):
            sweep_logger.error(f"Run crashed: {result}", a=a)
            reports.append(_failed_report(config, float(a), scenario, result))
        else:
            sweep_logger.info("Run finished", a=a, status=result.status.value, objective=result.objective)
            reports.append(result)
    return reports


def sensitivity_sweep(
    config: ModelConfig,
    a_values: Sequence[float] = SWEEP_A_VALUES,
    scenario: str = "optimal",
    settings: Optional[SolverSettings] = None,
    workers: int = 1,
) -> list[SolveReport]:
    return asyncio.run(run_sweep(config, a_values, scenario, settings, workers))


def summarize_report(report: SolveReport) -> SweepRow:
    a = report.config.damage.coefficients.get(DAMAGE_COEFFICIENT, math.nan)
    if report.trajectory is None:
        return SweepRow(a=a, status=report.status, objective=report.objective, message=report.message)

    trajectory = report.trajectory
    years = trajectory.column("year")
    damage = trajectory.column("damage_frac")
    temperature = trajectory.column("t_at")
    peak = int(np.argmax(damage))

    recovery_year = None
    if damage[peak] > 0:
        recovered = np.flatnonzero(damage[peak:] <= RECOVERY_SHARE * damage[peak])
        if recovered.size:
            recovery_year = int(years[peak + recovered[0]])

    return SweepRow(
        a=a,
        status=report.status,
        objective=report.objective,
        peak_damage=float(damage[peak]),
        peak_damage_temperature=float(temperature[peak]),
        peak_damage_year=int(years[peak]),
        peak_temperature=float(temperature.max()),
        min_k_over_y=float(trajectory.column("k_over_y").min()),
        min_c_percap=float(trajectory.column("c_percap").min()),
        recovery_year=recovery_year,
        message=report.message,
    )


def summarize_sweep(reports: Sequence[SolveReport]) -> list[SweepRow]:
    return [summarize_report(report) for report in reports]
