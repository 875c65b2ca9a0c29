import pytest

from core.errors import SolverError
from core.schemas import SolverSettings, SolveStatus
from solver.optimizer import solve
from solver.scc import social_cost_of_carbon


def fixed_solve(config, controls):
    return solve(config, "fixed-controls", controls=controls, log_level="WARNING")


def test_scc_is_positive(fixed_report):
    scc = social_cost_of_carbon(fixed_report, 0)
    assert 0.0 < scc < 1000.0


def test_scc_vanishes_without_damage(short_config, fixed_controls):
    report = fixed_solve(short_config.with_damage_coefficient("a", 0.0), fixed_controls)
    assert social_cost_of_carbon(report, 0) == 0.0


def test_scc_grows_with_damage_coefficient(short_config, fixed_controls):
    low = social_cost_of_carbon(fixed_solve(short_config.with_damage_coefficient("a", 0.00236), fixed_controls), 0)
    high = social_cost_of_carbon(fixed_solve(short_config.with_damage_coefficient("a", 0.01), fixed_controls), 0)
    assert high > 2.0 * low > 0.0


def test_scc_is_insensitive_to_pulse_size(fixed_report):
    small = social_cost_of_carbon(fixed_report, 1, emission_pulse=0.1)
    large = social_cost_of_carbon(fixed_report, 1, emission_pulse=1.0)
    assert small == pytest.approx(large, rel=1e-3)


@pytest.mark.parametrize("t", [-1, 20])
def test_scc_rejects_periods_outside_grid(fixed_report, t):
    with pytest.raises(SolverError):
        social_cost_of_carbon(fixed_report, t)


def test_scc_needs_converged_report(short_config):
    config = short_config.with_damage_coefficient("a", 0.5)
    settings = SolverSettings(starts=1, max_iterations=10, terminal_freeze=3, polish_rounds=0)
    report = solve(config, "optimal", settings, log_level="WARNING")
    assert report.status == SolveStatus.INFEASIBLE
    with pytest.raises(SolverError):
        social_cost_of_carbon(report, 0)
