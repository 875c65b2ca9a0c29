import logging
import math

import numpy as np

from core.errors import SimulationInputError
from core.schemas import ClimateParams, ExogenousPaths, ModelConfig

logger = logging.getLogger(__name__)

# Per-period DICE rates are quoted for 5-year steps.
REFERENCE_STEP_YEARS = 5.0


def _require_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0:
        raise SimulationInputError(f"{name} must be finite and positive, got {value}")


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise SimulationInputError(f"{name} must be finite, got {value}")


def population_path(initial: float, adjustment: float, asymptote: float, periods: int, step_years: int) -> np.ndarray:
    adj = 1.0 - (1.0 - adjustment) ** (step_years / REFERENCE_STEP_YEARS)
    path = np.empty(periods)
    path[0] = initial
    for i in range(periods - 1):
        path[i + 1] = path[i] * (asymptote / path[i]) ** adj
    return path


def tfp_path(initial: float, growth: float, decline: float, periods: int, step_years: int) -> np.ndarray:
    scale = step_years / REFERENCE_STEP_YEARS
    path = np.empty(periods)
    path[0] = initial
    for i in range(periods - 1):
        ga = growth * scale * math.exp(-decline * step_years * i)
        path[i + 1] = path[i] / (1.0 - ga)
    return path


def carbon_intensity_path(initial: float, decline: float, decline_change: float, periods: int, step_years: int) -> np.ndarray:
    path = np.empty(periods)
    path[0] = initial
    g = decline
    for i in range(periods - 1):
        path[i + 1] = path[i] * math.exp(-g * step_years)
        g *= (1.0 - decline_change) ** step_years
    return path


def decaying_path(initial: float, decay: float, periods: int, step_years: int) -> np.ndarray:
    return initial * np.exp(-decay * step_years * np.arange(periods))


def f_exo_path(params: ClimateParams, periods: int) -> np.ndarray:
    ramp = np.minimum(np.arange(periods), params.f_exo_ramp_periods) / params.f_exo_ramp_periods
    return params.f_exo_initial + (params.f_exo_final - params.f_exo_initial) * ramp


def exogenous_paths(config: ModelConfig) -> ExogenousPaths:
    exo = config.exo
    grid = config.grid
    n, step = grid.periods, grid.step_years

    for name, value in (
        ("population.initial", exo.population.initial),
        ("population.asymptote", exo.population.asymptote),
        ("tfp.initial", exo.tfp.initial),
        ("sigma.initial", exo.sigma.initial),
        ("e_exo.initial", exo.e_exo.initial),
        ("p_bs.initial", exo.p_bs.initial),
    ):
        _require_positive(name, value)
    for name, value in (
        ("population.adjustment", exo.population.adjustment),
        ("tfp.growth", exo.tfp.growth),
        ("tfp.decline", exo.tfp.decline),
        ("sigma.decline", exo.sigma.decline),
        ("sigma.decline_change", exo.sigma.decline_change),
        ("e_exo.decay", exo.e_exo.decay),
        ("p_bs.decay", exo.p_bs.decay),
    ):
        _require_finite(name, value)
    if exo.e_exo.decay < 0 or exo.p_bs.decay < 0 or exo.sigma.decline < 0:
        raise SimulationInputError("sigma, e_exo and p_bs paths must be non-increasing")

    years = grid.years
    mu_cap = np.where(years < config.mu_cap.from_year, config.mu_cap.base, config.mu_cap.raised)
    price_cap = None
    if config.carbon_price_cap is not None:
        cap = config.carbon_price_cap
        price_cap = cap.initial * np.exp(cap.growth * step * np.arange(n))

    paths = ExogenousPaths(
        years=years,
        population=population_path(exo.population.initial, exo.population.adjustment, exo.population.asymptote, n, step),
        tfp=tfp_path(exo.tfp.initial, exo.tfp.growth, exo.tfp.decline, n, step),
        sigma=carbon_intensity_path(exo.sigma.initial, exo.sigma.decline, exo.sigma.decline_change, n, step),
        e_exo=decaying_path(exo.e_exo.initial, exo.e_exo.decay, n, step),
        p_bs=decaying_path(exo.p_bs.initial, exo.p_bs.decay, n, step),
        mu_cap=mu_cap.astype(float),
        f_exo=f_exo_path(config.climate, n),
        price_cap=price_cap,
    )

    for name in ("population", "tfp", "sigma", "e_exo", "p_bs"):
        values = getattr(paths, name)
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise SimulationInputError(f"{name} path is not finite and positive")
    logger.debug(f"Exogenous paths built for {n} periods ending {grid.end_year}")
    return paths
