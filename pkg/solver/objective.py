import logging
from typing import Optional

import numpy as np

from core.exogenous import exogenous_paths
from core.schemas import ControlPath, ExogenousPaths, ModelConfig, ObjectiveEvaluation
from core.simulation import BatchResult, simulate_batch
from core.units import CONSUMPTION_FLOOR

logger = logging.getLogger(__name__)

LOG_UTILITY_BAND = 1e-12
# Weight on squared warming above the cap, in units of mean period utility.
TEMPERATURE_PENALTY = 10.0


def crra_utility(c: np.ndarray, alpha: float) -> np.ndarray:
    """(c**(1 - alpha) - 1) / (1 - alpha), continuous through alpha = 1."""
    log_c = np.log(c)
    if abs(alpha - 1.0) < LOG_UTILITY_BAND:
        return log_c
    return np.expm1((1.0 - alpha) * log_c) / (1.0 - alpha)


def floored_utility(c: np.ndarray, alpha: float, floor: float = CONSUMPTION_FLOOR) -> tuple[np.ndarray, np.ndarray]:
    """Utility extended linearly below the floor; returns (utility, penalized mask)."""
    c = np.asarray(c, dtype=float)
    penalized = ~(c > floor)
    safe = np.where(penalized, floor, c)
    utility = crra_utility(safe, alpha)
    slope = floor ** (-alpha)
    utility = np.where(penalized, utility + slope * (np.nan_to_num(c, nan=-1.0) - floor), utility)
    return utility, penalized


def discount_weights(config: ModelConfig, paths: ExogenousPaths) -> np.ndarray:
    step = config.grid.step_years
    elapsed = step * np.arange(paths.periods)
    return step * paths.population * np.exp(-config.rho * elapsed)


def temperature_excess(t_at: np.ndarray, cap: Optional[float]) -> np.ndarray:
    if cap is None:
        return np.zeros(t_at.shape[0])
    return np.sum(np.square(np.maximum(t_at - cap, 0.0)), axis=1)


def batch_welfare(batch: BatchResult, config: ModelConfig, paths: ExogenousPaths) -> tuple[np.ndarray, np.ndarray]:
    """Normalized welfare per batch row and the penalty mask."""
    weights = discount_weights(config, paths)
    utility, penalized = floored_utility(batch.c_percap, config.alpha)
    normalized = utility @ weights / weights.sum()
    normalized = normalized - TEMPERATURE_PENALTY * temperature_excess(batch.t_at, config.temperature_cap)
    return normalized, penalized.any(axis=1)


def evaluate_objective(
    controls: ControlPath,
    config: ModelConfig,
    paths: Optional[ExogenousPaths] = None,
) -> ObjectiveEvaluation:
    paths = paths or exogenous_paths(config)
    batch = simulate_batch(controls.s[None, :], controls.mu[None, :], config, paths)
    normalized, penalized = batch_welfare(batch, config, paths)
    value = float(normalized[0] * discount_weights(config, paths).sum())
    if penalized[0]:
        logger.debug("Consumption fell below the floor; objective penalized")
    return ObjectiveEvaluation(value=value, penalized=bool(penalized[0]), collapsed=bool(batch.collapsed[0]))
