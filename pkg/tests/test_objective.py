import numpy as np
import pytest

from core.schemas import ControlPath
from core.units import CONSUMPTION_FLOOR
from solver.objective import (
    crra_utility,
    discount_weights,
    evaluate_objective,
    floored_utility,
    temperature_excess,
)
from core.simulation import simulate


def test_crra_utility_values():
    assert crra_utility(np.array([1.0]), 1.45)[0] == 0.0
    c = np.array([0.5, 2.0, 10.0])
    np.testing.assert_allclose(crra_utility(c, 1.45), (c ** -0.45 - 1.0) / -0.45, rtol=1e-12)
    np.testing.assert_allclose(crra_utility(c, 1.0), np.log(c), rtol=1e-15)


@pytest.mark.parametrize("offset", [1e-9, -1e-9])
def test_crra_utility_is_continuous_through_log(offset):
    c = np.linspace(0.5, 20.0, 50)
    np.testing.assert_allclose(crra_utility(c, 1.0 + offset), np.log(c), rtol=0, atol=1e-8)


def test_floored_utility_is_linear_below_floor():
    c = np.array([CONSUMPTION_FLOOR * 2, CONSUMPTION_FLOOR, 0.0, -1.0])
    utility, penalized = floored_utility(c, 1.45)
    assert penalized.tolist() == [False, True, True, True]
    slope = CONSUMPTION_FLOOR ** -1.45
    floor_value = crra_utility(np.array([CONSUMPTION_FLOOR]), 1.45)[0]
    assert utility[1] == pytest.approx(floor_value)
    assert utility[2] == pytest.approx(floor_value - slope * CONSUMPTION_FLOOR)
    assert utility[3] < utility[2] < utility[1] < utility[0]
    assert np.all(np.isfinite(utility))


def test_discount_weights(short_config, paths):
    weights = discount_weights(short_config, paths)
    assert weights[0] == pytest.approx(5.0 * 7.403)
    assert weights[1] == pytest.approx(5.0 * paths.population[1] * np.exp(-0.015 * 5.0))


def test_objective_matches_hand_sum(short_config, fixed_controls):
    trajectory = simulate(fixed_controls, short_config)
    c = trajectory.column("c_percap")
    population = trajectory.column("population")
    elapsed = 5.0 * np.arange(len(c))
    expected = np.sum(5.0 * population * (c ** -0.45 - 1.0) / -0.45 * np.exp(-0.015 * elapsed))
    evaluation = evaluate_objective(fixed_controls, short_config)
    assert evaluation.value == pytest.approx(expected, rel=1e-10)
    assert not evaluation.penalized
    assert not evaluation.collapsed


@pytest.mark.parametrize("offset", [1e-9, -1e-9])
def test_objective_log_limit(short_config, fixed_controls, paths, offset):
    log_config = short_config.model_copy(update={"alpha": 1.0})
    near_config = short_config.model_copy(update={"alpha": 1.0 + offset})
    c = simulate(fixed_controls, log_config).column("c_percap")
    weights = discount_weights(short_config, paths)[: len(c)]
    expected = float(np.sum(weights * np.log(c)))
    assert evaluate_objective(fixed_controls, log_config).value == pytest.approx(expected, rel=1e-12)
    near = evaluate_objective(fixed_controls, near_config).value
    assert abs(near - expected) / weights.sum() < 1e-8


def test_consumption_floor_penalizes(short_config):
    controls = ControlPath.constant(short_config.grid.periods, s=1.0, mu=0.0)
    evaluation = evaluate_objective(controls, short_config)
    assert evaluation.penalized
    assert np.isfinite(evaluation.value)
    assert evaluation.value < evaluate_objective(ControlPath.constant(short_config.grid.periods, 0.25, 0.0), short_config).value


def test_temperature_excess():
    t_at = np.array([[0.5, 1.5, 2.5], [0.5, 0.7, 0.9]])
    np.testing.assert_allclose(temperature_excess(t_at, 1.0), [0.25 + 2.25, 0.0])
    np.testing.assert_allclose(temperature_excess(t_at, None), [0.0, 0.0])


def test_temperature_cap_penalty(short_config, fixed_controls, paths):
    capped = short_config.model_copy(update={"temperature_cap": 1.0})
    t_at = simulate(fixed_controls, short_config).column("t_at")
    excess = np.sum(np.maximum(t_at - 1.0, 0.0) ** 2)
    total_weight = discount_weights(short_config, paths)[: len(t_at)].sum()
    free = evaluate_objective(fixed_controls, short_config).value
    penalized = evaluate_objective(fixed_controls, capped).value
    assert excess > 0
    assert free - penalized == pytest.approx(10.0 * excess * total_weight, rel=1e-9)
