import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.economy import advance, period_transition
from core.exogenous import exogenous_paths
from core.schemas import (
    ClimateState,
    ControlPath,
    EconomyState,
    ExogenousPaths,
    ModelConfig,
    Provenance,
    Trajectory,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchResult:
    """Per-period series of shape (batch, periods)."""

    consumption: np.ndarray
    c_percap: np.ndarray
    t_at: np.ndarray
    damage_frac: np.ndarray
    capital: np.ndarray
    floor_hit: np.ndarray
    saturated: np.ndarray

    @property
    def collapsed(self) -> np.ndarray:
        return self.floor_hit.any(axis=1) | self.saturated.any(axis=1) | (self.consumption <= 0).any(axis=1)


def simulate_batch(
    s: np.ndarray,
    mu: np.ndarray,
    config: ModelConfig,
    paths: ExogenousPaths,
    emission_pulse: Optional[np.ndarray] = None,
    consumption_pulse: Optional[np.ndarray] = None,
) -> BatchResult:
    s = np.atleast_2d(s)
    mu = np.atleast_2d(mu)
    batch, periods = s.shape
    init = config.initial

    k = np.full(batch, init.capital)
    tfp_scale = np.ones(batch)
    reservoirs = np.tile(np.array([[init.m_at], [init.m_up], [init.m_lo]]), (1, batch))
    t_at = np.full(batch, init.t_at)
    t_lo = np.full(batch, init.t_lo)

    series = {name: np.empty((batch, periods)) for name in ("consumption", "c_percap", "t_at", "damage_frac", "capital")}
    floor_hit = np.zeros((batch, periods), dtype=bool)
    saturated = np.zeros((batch, periods), dtype=bool)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for t in range(periods):
            out = advance(
                k, reservoirs, t_at, t_lo, s[:, t], mu[:, t], t, paths, config,
                emission_pulse=0.0 if emission_pulse is None else emission_pulse[:, t],
                consumption_pulse=0.0 if consumption_pulse is None else consumption_pulse[:, t],
                tfp_scale=tfp_scale,
            )
            series["consumption"][:, t] = out.consumption
            series["c_percap"][:, t] = out.c_percap
            series["t_at"][:, t] = t_at
            series["damage_frac"][:, t] = out.damage_frac
            series["capital"][:, t] = k
            floor_hit[:, t] = out.floor_hit
            saturated[:, t] = out.saturated
            k, tfp_scale = out.k_next, out.tfp_scale_next
            reservoirs, t_at, t_lo = out.reservoirs_next, out.t_at_next, out.t_lo_next

    return BatchResult(floor_hit=floor_hit, saturated=saturated, **series)


def simulate(
    controls: ControlPath,
    config: ModelConfig,
    paths: Optional[ExogenousPaths] = None,
    scenario: str = "fixed-controls",
    solver_settings: Optional[dict] = None,
) -> Trajectory:
    paths = paths or exogenous_paths(config)
    if controls.periods != paths.periods:
        raise ValueError(f"controls cover {controls.periods} periods, grid has {paths.periods}")

    init = config.initial
    economy = EconomyState(k=init.capital)
    climate = ClimateState(m_at=init.m_at, m_up=init.m_up, m_lo=init.m_lo, t_at=init.t_at, t_lo=init.t_lo)
    records = []
    for t in range(paths.periods):
        economy, climate, record = period_transition(economy, climate, controls, t, paths, config)
        records.append(record)

    provenance = Provenance(config_hash=config.config_hash(), scenario=scenario, solver_settings=solver_settings or {})
    return Trajectory(records=records, provenance=provenance)
