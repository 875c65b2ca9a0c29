"""Three-reservoir carbon cycle and two-layer temperature response.

The array kernels (`carbon_update`, `forcing_array`, `temperature_update`) work
on scalars or on batches of states and are shared with the simulation kernel;
the state-level functions wrap them with validation.
"""
import logging
import math
from typing import Optional, Union

import numpy as np

from core.errors import SimulationInputError
from core.exogenous import f_exo_path
from core.schemas import ClimateParams, ClimateState

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def carbon_update(reservoirs: np.ndarray, emissions_gtco2: ArrayLike, matrix: np.ndarray, gtco2_per_gtc: float) -> np.ndarray:
    """Advance reservoirs of shape (3,) or (3, batch) by one period."""
    updated = matrix @ reservoirs
    updated[0] = updated[0] + np.asarray(emissions_gtco2) / gtco2_per_gtc
    return updated


def forcing_array(m_at: ArrayLike, f_exo: ArrayLike, params: ClimateParams) -> ArrayLike:
    return params.f2x * np.log2(m_at / params.m_pre) + f_exo


def temperature_update(t_at: ArrayLike, t_lo: ArrayLike, forcing: ArrayLike, params: ClimateParams) -> tuple[ArrayLike, ArrayLike]:
    feedback = params.f2x / params.ecs
    t_at_next = t_at + params.c1 * (forcing - feedback * t_at - params.c3 * (t_at - t_lo))
    t_lo_next = t_lo + params.c4 * (t_at - t_lo)
    return t_at_next, t_lo_next


def step_carbon(state: ClimateState, emissions: float, params: ClimateParams) -> ClimateState:
    """Emissions are GtCO2 released over the whole period."""
    if not math.isfinite(emissions):
        raise SimulationInputError(f"emissions must be finite, got {emissions}")
    m_at, m_up, m_lo = carbon_update(state.reservoirs, emissions, params.matrix, params.gtco2_per_gtc)
    if min(m_at, m_up, m_lo) <= 0:
        raise SimulationInputError("carbon reservoirs must stay positive")
    return ClimateState(m_at=m_at, m_up=m_up, m_lo=m_lo, t_at=state.t_at, t_lo=state.t_lo)


def exogenous_forcing(params: ClimateParams, t: int) -> float:
    return float(f_exo_path(params, t + 1)[t])


def forcing(m_at: float, params: ClimateParams, t: int = 0, f_exo: Optional[float] = None) -> float:
    if not math.isfinite(m_at) or m_at <= 0:
        raise SimulationInputError(f"m_at must be positive, got {m_at}")
    if f_exo is None:
        f_exo = exogenous_forcing(params, t)
    return float(forcing_array(m_at, f_exo, params))


def step_temperature(state: ClimateState, radiative_forcing: float, params: ClimateParams) -> ClimateState:
    if not math.isfinite(radiative_forcing):
        raise SimulationInputError(f"forcing must be finite, got {radiative_forcing}")
    t_at, t_lo = temperature_update(state.t_at, state.t_lo, radiative_forcing, params)
    return ClimateState(m_at=state.m_at, m_up=state.m_up, m_lo=state.m_lo, t_at=t_at, t_lo=t_lo)


def equilibrium_temperature(radiative_forcing: float, params: ClimateParams) -> float:
    return params.ecs * radiative_forcing / params.f2x
