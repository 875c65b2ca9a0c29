import logging
import math
from typing import NamedTuple, Union

import numpy as np

from core.climate import carbon_update, forcing_array, temperature_update
from core.errors import SimulationInputError
from core.schemas import ClimateState, ControlPath, EconomyState, ExogenousPaths, ModelConfig, PeriodRecord
from core.units import CAPITAL_FLOOR, DAMAGE_CEILING, TFP_SCALE_FLOOR, TRILLIONS_PER_USD_GTCO2
from damages.damage_functions import apply_channel, raw_damage

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def gross_output(tfp: ArrayLike, population: ArrayLike, capital: ArrayLike, gamma: float) -> ArrayLike:
    if np.any(np.asarray(tfp) <= 0) or np.any(np.asarray(population) <= 0) or np.any(np.asarray(capital) <= 0):
        raise SimulationInputError("tfp, population and capital must be positive")
    return tfp * population ** (1.0 - gamma) * capital ** gamma


def industrial_emissions(mu: ArrayLike, sigma: ArrayLike, y_gross: ArrayLike) -> ArrayLike:
    return (1.0 - mu) * sigma * y_gross


def abatement_cost(mu: ArrayLike, sigma: ArrayLike, y_gross: ArrayLike, p_bs: ArrayLike, theta2: float) -> ArrayLike:
    """Trillions USD; p_bs in USD/tCO2, sigma * y_gross in GtCO2."""
    return p_bs * TRILLIONS_PER_USD_GTCO2 * np.power(mu, theta2) / theta2 * sigma * y_gross


def carbon_tax(p_c: ArrayLike, mu: ArrayLike, sigma: ArrayLike, y_gross: ArrayLike) -> ArrayLike:
    return p_c * TRILLIONS_PER_USD_GTCO2 * (1.0 - mu) * sigma * y_gross


def optimal_mitigation(p_c: ArrayLike, p_bs: ArrayLike, theta2: float, mu_cap: ArrayLike) -> ArrayLike:
    return np.minimum(np.power(np.maximum(p_c, 0.0) / p_bs, 1.0 / (theta2 - 1.0)), mu_cap)


def carbon_price_for(mu: ArrayLike, p_bs: ArrayLike, theta2: float) -> ArrayLike:
    return np.power(mu, theta2 - 1.0) * p_bs


def step_capital(k: ArrayLike, y_final: ArrayLike, s: ArrayLike, delta: float, step_years: int) -> ArrayLike:
    return np.maximum(k * (1.0 - delta) ** step_years + step_years * s * y_final, CAPITAL_FLOOR)


class StepOutputs(NamedTuple):
    k_next: np.ndarray
    tfp_scale_next: np.ndarray
    reservoirs_next: np.ndarray
    t_at_next: np.ndarray
    t_lo_next: np.ndarray
    y_gross: np.ndarray
    y_net: np.ndarray
    y_final: np.ndarray
    damage_frac: np.ndarray
    lam: np.ndarray
    abatement: np.ndarray
    e_ind: np.ndarray
    e_total: np.ndarray
    p_c: np.ndarray
    consumption: np.ndarray
    c_percap: np.ndarray
    floor_hit: np.ndarray
    saturated: np.ndarray


def advance(
    k: np.ndarray,
    reservoirs: np.ndarray,
    t_at: np.ndarray,
    t_lo: np.ndarray,
    s: np.ndarray,
    mu: np.ndarray,
    t: int,
    paths: ExogenousPaths,
    config: ModelConfig,
    emission_pulse: ArrayLike = 0.0,
    consumption_pulse: ArrayLike = 0.0,
    tfp_scale: ArrayLike = 1.0,
) -> StepOutputs:
    """One period for a batch of states; arrays share a trailing batch axis.

    Emission and consumption pulses are rates (GtCO2/yr, trillions/yr) added in
    this period only; the consumption pulse does not feed back into capital.
    tfp_scale is the share of exogenous TFP surviving earlier damages. Only the
    tfp channel lowers it, and the loss carries into every later period.
    """
    step = config.grid.step_years
    climate = config.climate
    population = paths.population[t]
    tfp = paths.tfp[t] * tfp_scale

    raw = raw_damage(config.damage, np.maximum(t_at, 0.0))
    saturated = raw >= 1.0
    damage = np.clip(raw, 0.0, DAMAGE_CEILING)

    y_gross = gross_output(tfp, population, k, config.gamma)
    adjusted = apply_channel(config.damage.channel, damage, tfp, k, y_gross, config.gamma)
    y_net = adjusted.y_net
    damage_frac = 1.0 - y_net / y_gross
    tfp_scale_next = np.maximum(adjusted.tfp / paths.tfp[t], TFP_SCALE_FLOOR)

    abatement = abatement_cost(mu, paths.sigma[t], y_gross, paths.p_bs[t], config.theta2)
    lam = abatement / y_net
    y_final = y_net - abatement
    e_ind = industrial_emissions(mu, paths.sigma[t], y_gross)
    e_total = e_ind + paths.e_exo[t] + emission_pulse

    consumption = y_final - s * y_final + consumption_pulse
    c_percap = consumption / population

    # adjusted.capital differs from k only under the capital channel
    k_next = step_capital(adjusted.capital, y_final, s, config.delta, step)
    floor_hit = k_next <= CAPITAL_FLOOR

    reservoirs_next = carbon_update(reservoirs, step * e_total, climate.matrix, climate.gtco2_per_gtc)
    next_t = min(t + 1, paths.periods - 1)
    m_at_next = np.maximum(reservoirs_next[0], CAPITAL_FLOOR)
    radiative = forcing_array(m_at_next, paths.f_exo[next_t], climate)
    t_at_next, t_lo_next = temperature_update(t_at, t_lo, radiative, climate)

    return StepOutputs(
        k_next=k_next,
        tfp_scale_next=tfp_scale_next,
        reservoirs_next=reservoirs_next,
        t_at_next=t_at_next,
        t_lo_next=t_lo_next,
        y_gross=y_gross,
        y_net=y_net,
        y_final=y_final,
        damage_frac=damage_frac,
        lam=lam,
        abatement=abatement,
        e_ind=e_ind,
        e_total=e_total,
        p_c=carbon_price_for(mu, paths.p_bs[t], config.theta2),
        consumption=consumption,
        c_percap=c_percap,
        floor_hit=floor_hit,
        saturated=saturated,
    )


def period_transition(
    economy: EconomyState,
    climate: ClimateState,
    controls: ControlPath,
    t: int,
    paths: ExogenousPaths,
    config: ModelConfig,
) -> tuple[EconomyState, ClimateState, PeriodRecord]:
    s, mu = float(controls.s[t]), float(controls.mu[t])
    if not 0.0 <= s <= 1.0:
        raise SimulationInputError(f"savings rate {s} outside [0, 1] at period {t}")
    if not 0.0 <= mu <= paths.mu_cap[t] + 1e-12:
        raise SimulationInputError(f"mitigation rate {mu} outside [0, {paths.mu_cap[t]}] at period {t}")

    out = advance(
        np.float64(economy.k),
        climate.reservoirs,
        np.float64(climate.t_at),
        np.float64(climate.t_lo),
        s,
        mu,
        t,
        paths,
        config,
        tfp_scale=economy.tfp_scale,
    )
    if not all(math.isfinite(float(v)) for v in (out.k_next, out.t_at_next, out.y_final)):
        raise SimulationInputError(f"non-finite state at period {t}")

    record = PeriodRecord(
        year=int(paths.years[t]),
        y_gross=float(out.y_gross),
        y_net=float(out.y_net),
        y_final=float(out.y_final),
        damage_frac=float(out.damage_frac),
        lambda_=float(out.lam),
        abatement_cost=float(out.abatement),
        e_ind=float(out.e_ind),
        e_total=float(out.e_total),
        mu=mu,
        s=s,
        consumption=float(out.consumption),
        c_percap=float(out.c_percap),
        p_c=float(out.p_c),
        k=economy.k,
        k_over_y=economy.k / float(out.y_gross),
        population=float(paths.population[t]),
        m_at=climate.m_at,
        t_at=climate.t_at,
        capital_floor_hit=bool(out.floor_hit),
        damage_saturated=bool(out.saturated),
        consumption_penalized=bool(out.consumption <= 0),
    )
    m_at, m_up, m_lo = (float(v) for v in out.reservoirs_next)
    next_climate = ClimateState(m_at=m_at, m_up=m_up, m_lo=m_lo, t_at=float(out.t_at_next), t_lo=float(out.t_lo_next))
    next_economy = EconomyState(k=float(out.k_next), tfp_scale=float(out.tfp_scale_next))
    return next_economy, next_climate, record
