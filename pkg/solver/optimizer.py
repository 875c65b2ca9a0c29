"""Single-shooting optimizer over the savings and mitigation paths.

The decision vector stacks s and mu over the grid. Coordinates whose bounds
coincide (frozen terminal savings, a fixed first-period mu) are held out of
the search. Gradients are central differences, one-sided at bounds, and every
perturbed path of an evaluation is simulated in a single batch.
"""
import logging
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from analysis.ramsey import steady_state_savings_rate
from core.errors import SolverError
from core.exogenous import exogenous_paths
from core.logger import StructuredLogger
from core.schemas import (
    ControlPath,
    ModelConfig,
    RamseyParams,
    SolveReport,
    SolverSettings,
    SolveStatus,
    StartOutcome,
)
from core.simulation import simulate, simulate_batch
from scenarios import BaseScenario, scenario_for
from solver.objective import batch_welfare, discount_weights

logger = logging.getLogger(__name__)

START_LABELS = (
    "steady-savings-ramped-control",
    "low-savings-late-control",
    "high-savings-full-control",
    "midpoint",
    "steady-savings-no-control",
)


def start_order(seed: int, count: int) -> list[int]:
    order = np.arange(len(START_LABELS))
    if seed:
        order = np.random.default_rng(seed).permutation(order)
    return [int(i) for i in order[:count]]


class ControlOptimizer:
    def __init__(
        self,
        config: ModelConfig,
        scenario: BaseScenario,
        settings: Optional[SolverSettings] = None,
        log_level: str = "INFO",
    ):
        self.config = config
        self.scenario = scenario
        self.settings = settings or SolverSettings()
        self.paths = exogenous_paths(config)
        self.logger = StructuredLogger("solver.optimizer", log_level).bind(scenario=scenario.name)
        self.weight_total = float(discount_weights(config, self.paths).sum())

        n = self.paths.periods
        self.periods = n
        self.terminal_savings = steady_state_savings_rate(RamseyParams.from_config(config))
        s_lower, s_upper = scenario.savings_bounds(self.paths, config)
        freeze = min(self.settings.terminal_freeze, n - 1)
        if freeze:
            s_lower[n - freeze:] = s_upper[n - freeze:] = self.terminal_savings
        mu_lower, mu_upper = scenario.mitigation_bounds(self.paths, config)

        self.lower = np.concatenate([s_lower, mu_lower])
        self.upper = np.concatenate([s_upper, mu_upper])
        self.free = self.upper > self.lower
        self.free_lower = self.lower[self.free]
        self.free_upper = self.upper[self.free]

    def _full(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        full = np.tile(self.lower, (x.shape[0], 1))
        full[:, self.free] = x
        return full

    def to_controls(self, x: np.ndarray) -> ControlPath:
        full = np.clip(self._full(x)[0], self.lower, self.upper)
        return ControlPath(s=full[: self.periods], mu=full[self.periods:])

    def _evaluate(self, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        full = self._full(rows)
        batch = simulate_batch(full[:, : self.periods], full[:, self.periods:], self.config, self.paths)
        values, _ = batch_welfare(batch, self.config, self.paths)
        values = np.where(np.isfinite(values), values, -1e12)
        return values, batch.collapsed

    def value_and_gradient(self, x: np.ndarray) -> tuple[float, np.ndarray, bool]:
        h = self.settings.fd_step
        m = x.size
        plus = np.minimum(x + h, self.free_upper)
        minus = np.maximum(x - h, self.free_lower)
        rows = np.tile(x, (2 * m + 1, 1))
        idx = np.arange(m)
        rows[1 + idx, idx] = plus
        rows[1 + m + idx, idx] = minus
        values, collapsed = self._evaluate(rows)
        gradient = (values[1: m + 1] - values[m + 1:]) / (plus - minus)
        return float(values[0]), gradient, bool(collapsed[0])

    def kkt_residual(self, x: np.ndarray, gradient: np.ndarray) -> float:
        # gradient is of W / weight_total; scale by weight_total for W units
        if x.size == 0:
            return 0.0
        projected = np.clip(x + gradient, self.free_lower, self.free_upper) - x
        return float(np.max(np.abs(projected)))

    def initial_guesses(self) -> list[np.ndarray]:
        n = self.periods
        years = self.paths.years - self.paths.years[0]
        mu_cap = self.upper[n:]
        s_star = self.terminal_savings

        def ramp(horizon: float) -> np.ndarray:
            return np.minimum(0.03 + (1.0 - 0.03) * years / horizon, 1.0) * mu_cap

        candidates = [
            (np.full(n, s_star), ramp(85.0)),
            (np.full(n, 0.2), ramp(135.0)),
            (np.full(n, 0.3), mu_cap.copy()),
            (np.full(n, 0.5), 0.5 * mu_cap),
            (np.full(n, s_star), np.zeros(n)),
        ]
        guesses = []
        for s, mu in candidates:
            full = np.clip(np.concatenate([s, mu]), self.lower, self.upper)
            guesses.append(full[self.free])
        return guesses

    def _run_start(self, index: int, x0: np.ndarray) -> tuple[StartOutcome, np.ndarray]:
        settings = self.settings
        bounds = list(zip(self.free_lower, self.free_upper))
        x = x0.copy()
        iterations = 0
        message = ""

        def objective(z: np.ndarray) -> tuple[float, np.ndarray]:
            value, gradient, _ = self.value_and_gradient(z)
            return -value, -gradient

        for _ in range(settings.polish_rounds + 1):
            if x.size == 0:
                break
            result = minimize(
                objective,
                x,
                jac=True,
                method="L-BFGS-B",
                bounds=bounds,
                options={
                    "maxiter": max(settings.max_iterations - iterations, 1),
                    "gtol": settings.tolerance / 10.0,
                    "ftol": 1e-15,
                    "maxcor": 20,
                },
            )
            x = np.clip(result.x, self.free_lower, self.free_upper)
            iterations += int(result.nit)
            message = str(result.message)
            _, gradient, _ = self.value_and_gradient(x)
            if self.kkt_residual(x, gradient) <= settings.tolerance or iterations >= settings.max_iterations:
                break

        value, gradient, collapsed = self.value_and_gradient(x)
        kkt = self.kkt_residual(x, gradient)
        outcome = StartOutcome(
            start=index,
            label=START_LABELS[index],
            objective=value * self.weight_total,
            kkt_residual=kkt,
            iterations=iterations,
            collapsed=collapsed,
            message=message,
        )
        self.logger.info(
            "Start finished", start=START_LABELS[index], objective=outcome.objective, kkt=kkt,
            iterations=iterations, collapsed=collapsed,
        )
        return outcome, x

    def _report(
        self,
        status: SolveStatus,
        x: np.ndarray,
        outcome: StartOutcome,
        outcomes: list[StartOutcome],
        message: str,
    ) -> SolveReport:
        controls = self.to_controls(x)
        trajectory = simulate(
            controls, self.config, self.paths, scenario=self.scenario.name,
            solver_settings=self.settings.model_dump(),
        )
        return SolveReport(
            status=status,
            objective=outcome.objective,
            iterations=outcome.iterations,
            kkt_residual=outcome.kkt_residual,
            trajectory=trajectory,
            message=message,
            scenario=self.scenario.name,
            controls=controls,
            config=self.config,
            starts=outcomes,
        )

    def solve(self) -> SolveReport:
        if not self.scenario.optimizes:
            fixed = self.scenario.fixed_controls()
            if fixed is None:
                raise SolverError(f"scenario {self.scenario.name} does not optimize and supplies no controls")
            return self._evaluate_fixed(fixed)

        settings = self.settings
        guesses = self.initial_guesses()
        outcomes: list[StartOutcome] = []
        best: Optional[tuple[StartOutcome, np.ndarray]] = None
        fallback: Optional[tuple[StartOutcome, np.ndarray]] = None
        streak = 0

        for index in start_order(settings.seed, settings.starts):
            outcome, x = self._run_start(index, guesses[index])
            outcomes.append(outcome)
            if outcome.collapsed:
                streak += 1
                if fallback is None or outcome.objective > fallback[0].objective:
                    fallback = (outcome, x)
                if best is None and streak >= settings.collapse_streak:
                    break
                continue
            streak = 0
            if best is None or outcome.objective > best[0].objective:
                best = (outcome, x)

        if best is None:
            outcome, x = fallback
            message = f"Infeasible solution: state collapse persisted across {streak} consecutive starts"
            self.logger.warning(message)
            return self._report(SolveStatus.INFEASIBLE, x, outcome, outcomes, message)

        outcome, x = best
        if outcome.kkt_residual <= settings.tolerance:
            status = SolveStatus.CONVERGED
            message = f"Converged from start {outcome.label}: {outcome.message}"
        else:
            status = SolveStatus.STALLED
            reason = "iteration cap reached" if outcome.iterations >= settings.max_iterations else outcome.message
            message = f"Tolerance {settings.tolerance:g} not met (kkt {outcome.kkt_residual:.3g}): {reason}"
        self.logger.info("Solve finished", status=status.value, objective=outcome.objective, kkt=outcome.kkt_residual)
        return self._report(status, x, outcome, outcomes, message)

    def _evaluate_fixed(self, controls: ControlPath) -> SolveReport:
        if controls.periods != self.periods:
            raise ValueError(f"controls cover {controls.periods} periods, grid has {self.periods}")
        full = np.concatenate([controls.s, controls.mu])[None, :]
        values, collapsed = self._evaluate_rows(full)
        status = SolveStatus.INFEASIBLE if collapsed[0] else SolveStatus.CONVERGED
        trajectory = simulate(controls, self.config, self.paths, scenario=self.scenario.name)
        return SolveReport(
            status=status,
            objective=float(values[0]) * self.weight_total,
            iterations=0,
            kkt_residual=0.0,
            trajectory=trajectory,
            message="controls fixed; no optimization performed",
            scenario=self.scenario.name,
            controls=controls,
            config=self.config,
        )

    def _evaluate_rows(self, full: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        batch = simulate_batch(full[:, : self.periods], full[:, self.periods:], self.config, self.paths)
        values, _ = batch_welfare(batch, self.config, self.paths)
        return values, batch.collapsed


def solve(
    config: ModelConfig,
    scenario: Union[str, BaseScenario] = "optimal",
    settings: Optional[SolverSettings] = None,
    controls: Optional[ControlPath] = None,
    log_level: str = "INFO",
) -> SolveReport:
    if isinstance(scenario, str):
        scenario = scenario_for(scenario, controls=controls, log_level=log_level)
    return ControlOptimizer(config, scenario, settings, log_level).solve()
