import numpy as np
import pytest

from core.errors import SimulationInputError
from core.economy import (
    abatement_cost,
    advance,
    carbon_price_for,
    carbon_tax,
    gross_output,
    industrial_emissions,
    optimal_mitigation,
    period_transition,
    step_capital,
)
from core.schemas import ClimateState, ControlPath, DamageChannel, DamageSpec, EconomyState
from core.units import CAPITAL_FLOOR


def test_gross_output_examples():
    assert gross_output(1.0, 1.0, 1.0, 0.3) == pytest.approx(1.0)
    assert gross_output(1.0, 4.0, 4.0, 0.3) == pytest.approx(4.0)


def test_gross_output_has_constant_returns():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, labour, capital = rng.uniform(0.1, 10.0, size=3)
        scale = rng.uniform(0.1, 10.0)
        assert gross_output(a, scale * labour, scale * capital, 0.3) == pytest.approx(
            scale * gross_output(a, labour, capital, 0.3), rel=1e-12
        )


def test_gross_output_rejects_non_positive_inputs():
    with pytest.raises(SimulationInputError):
        gross_output(1.0, 1.0, 0.0, 0.3)
    with pytest.raises(SimulationInputError):
        gross_output(-1.0, 1.0, 1.0, 0.3)


def test_industrial_emissions():
    assert industrial_emissions(1.0, 0.35, 100.0) == 0.0
    assert industrial_emissions(0.0, 0.35, 100.0) == pytest.approx(35.0)


def test_abatement_cost_examples():
    assert abatement_cost(0.0, 1.0, 50.0, 600.0, 2.6) == 0.0
    assert abatement_cost(1.0, 1.0, 50.0, 600.0, 2.6) == pytest.approx(0.6 / 2.6 * 50.0)
    assert abatement_cost(1.0, 1.0, 50.0, 600.0, 2.6) == pytest.approx(11.538, abs=1e-3)


def test_abatement_cost_power_law():
    ratio = abatement_cost(0.8, 0.3, 100.0, 550.0, 2.6) / abatement_cost(0.4, 0.3, 100.0, 550.0, 2.6)
    assert ratio == pytest.approx(2.0 ** 2.6, rel=1e-12)
    assert ratio == pytest.approx(6.063, abs=1e-3)


def test_carbon_tax_examples():
    assert carbon_tax(100.0, 1.0, 0.4, 100.0) == 0.0
    assert carbon_tax(0.0, 0.0, 0.4, 100.0) == 0.0
    # 40 GtCO2/yr at 100 USD/tCO2
    assert carbon_tax(100.0, 0.0, 0.4, 100.0) == pytest.approx(4.0)


def test_optimal_mitigation_examples():
    assert optimal_mitigation(0.0, 550.0, 2.6, 1.0) == 0.0
    assert optimal_mitigation(550.0, 550.0, 2.6, 1.0) == pytest.approx(1.0)
    assert optimal_mitigation(0.25, 1.0, 2.6, 1.0) == pytest.approx(0.25 ** (1.0 / 1.6), rel=1e-12)
    assert optimal_mitigation(0.25, 1.0, 2.6, 1.0) == pytest.approx(0.4204, abs=1e-4)
    assert optimal_mitigation(2000.0, 550.0, 2.6, 1.2) == 1.2


def test_optimal_mitigation_matches_brute_force():
    rng = np.random.default_rng(2)
    grid = np.linspace(0.0, 1.0, 100_001)
    for _ in range(200):
        p_bs = rng.uniform(50.0, 1000.0)
        p_c = rng.uniform(0.0, 1.2 * p_bs)
        theta2 = rng.uniform(1.5, 4.0)
        # sigma * y_gross cancels; tax plus abatement cost per unit of emissions
        cost = p_c * (1.0 - grid) + p_bs * grid ** theta2 / theta2
        best = grid[np.argmin(cost)]
        assert optimal_mitigation(p_c, p_bs, theta2, 1.0) == pytest.approx(best, abs=2e-5)


def test_carbon_price_round_trip():
    mu = np.linspace(0.0, 1.0, 1001)
    for theta2 in (1.5, 2.6, 4.0):
        price = carbon_price_for(mu, 550.0, theta2)
        np.testing.assert_allclose(optimal_mitigation(price, 550.0, theta2, 1.0), mu, atol=1e-10)


def test_carbon_price_examples():
    assert carbon_price_for(1.0, 550.0, 2.6) == 550.0
    assert carbon_price_for(0.0, 550.0, 2.6) == 0.0
    assert carbon_price_for(0.4204, 1.0, 2.6) == pytest.approx(0.25, abs=1e-4)


def test_step_capital():
    assert step_capital(1.0, 0.0, 0.0, 0.1, 5) == pytest.approx(0.9 ** 5)
    assert step_capital(1.0, 0.0, 0.0, 0.1, 5) == pytest.approx(0.59049)
    assert step_capital(100.0, 20.0, 0.25, 0.1, 5) == pytest.approx(100.0 * 0.59049 + 25.0)


def test_step_capital_floor():
    assert step_capital(1e-9, 0.0, 0.0, 0.1, 5) == CAPITAL_FLOOR


def _first_period(config, paths, s=0.25, mu=0.1):
    init = config.initial
    economy = EconomyState(k=init.capital)
    climate = ClimateState(m_at=init.m_at, m_up=init.m_up, m_lo=init.m_lo, t_at=init.t_at, t_lo=init.t_lo)
    controls = ControlPath.constant(paths.periods, s=s, mu=mu)
    return period_transition(economy, climate, controls, 0, paths, config)


def test_period_transition_wedges(config, paths):
    _, _, record = _first_period(config, paths)
    assert record.y_final < record.y_net < record.y_gross
    assert record.damage_frac == pytest.approx(0.00236 * 0.85 ** 2, rel=1e-12)
    assert record.y_final == pytest.approx((1.0 - record.lambda_) * record.y_net, rel=1e-12)
    assert record.consumption == pytest.approx(0.75 * record.y_final, rel=1e-12)
    assert record.c_percap == pytest.approx(record.consumption / 7.403, rel=1e-12)
    assert record.k == 223.0
    assert record.year == 2015


def test_period_transition_units(config, paths):
    _, _, record = _first_period(config, paths, mu=0.0)
    # 2015 gross output is roughly 105 trillion USD and industrial emissions roughly 35 GtCO2
    assert 90.0 < record.y_gross < 120.0
    assert 30.0 < record.e_ind < 42.0
    assert record.e_total == pytest.approx(record.e_ind + 2.6)
    assert record.abatement_cost == 0.0
    assert record.p_c == 0.0


def test_period_transition_advances_state(config, paths):
    economy, climate, record = _first_period(config, paths)
    expected_k = 223.0 * 0.9 ** 5 + 5.0 * 0.25 * record.y_final
    assert economy.k == pytest.approx(expected_k, rel=1e-12)
    assert climate.t_at > config.initial.t_at
    assert climate.m_at > config.initial.m_at - 50.0
    assert economy.tfp_scale == 1.0


def test_period_transition_rejects_out_of_box_controls(config, paths):
    with pytest.raises(SimulationInputError):
        _first_period(config, paths, mu=1.1)


def test_tfp_channel_lowers_next_period_productivity(config, paths):
    spec = DamageSpec(family=config.damage.family, coefficients=config.damage.coefficients, channel=DamageChannel.TFP)
    economy, _, record = _first_period(config.model_copy(update={"damage": spec}), paths)
    assert economy.tfp_scale == pytest.approx(1.0 - record.damage_frac, rel=1e-12)


def test_tfp_scale_enters_gross_output(config, paths):
    init = config.initial
    climate = ClimateState(m_at=init.m_at, m_up=init.m_up, m_lo=init.m_lo, t_at=init.t_at, t_lo=init.t_lo)
    controls = ControlPath.constant(paths.periods, s=0.25, mu=0.1)
    _, _, full = period_transition(EconomyState(k=init.capital), climate, controls, 0, paths, config)
    _, _, scaled = period_transition(EconomyState(k=init.capital, tfp_scale=0.5), climate, controls, 0, paths, config)
    assert scaled.y_gross == pytest.approx(0.5 * full.y_gross, rel=1e-12)


def _advance_one(config, paths, k, s=0.25):
    init = config.initial
    reservoirs = np.array([[init.m_at], [init.m_up], [init.m_lo]])
    return advance(
        np.array([k]), reservoirs, np.array([init.t_at]), np.array([init.t_lo]),
        np.array([s]), np.array([0.1]), 0, paths, config,
    )


def test_advance_rejects_non_positive_capital(config, paths):
    with pytest.raises(SimulationInputError):
        _advance_one(config, paths, 0.0)


def test_advance_accumulates_with_step_capital(config, paths):
    out = _advance_one(config, paths, 223.0)
    expected = step_capital(223.0, out.y_final[0], 0.25, config.delta, config.grid.step_years)
    assert out.k_next[0] == pytest.approx(expected, rel=1e-12)
    assert out.y_gross[0] == pytest.approx(gross_output(paths.tfp[0], paths.population[0], 223.0, config.gamma))
    assert not out.floor_hit[0]


def test_advance_flags_capital_floor(config, paths):
    out = _advance_one(config, paths, 1e-9, s=0.0)
    assert out.k_next[0] == CAPITAL_FLOOR
    assert out.floor_hit[0]
