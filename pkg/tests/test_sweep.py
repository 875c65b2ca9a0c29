import math

import pytest

from core.config import load_config, scenario_path
from core.errors import ConfigValidationError
from core.schemas import SolveStatus
from solver.sweep import SWEEP_A_VALUES, run_sweep, sensitivity_sweep, summarize_report, summarize_sweep


@pytest.fixture(scope="module")
def tiny_config(config):
    return config.with_grid(periods=10)


async def test_run_sweep_solves_each_coefficient(tiny_config, fast_settings):
    reports = await run_sweep(tiny_config, [0.00236, 0.02], settings=fast_settings)
    assert [r.config.damage.coefficients["a"] for r in reports] == [0.00236, 0.02]
    assert all(r.status in (SolveStatus.CONVERGED, SolveStatus.STALLED) for r in reports)
    assert all(r.trajectory is not None for r in reports)


async def test_crashed_runs_become_failed_reports(tiny_config, fast_settings):
    reports = await run_sweep(tiny_config, [0.00236], scenario="fixed-controls", settings=fast_settings)
    assert reports[0].status == SolveStatus.FAILED
    assert not reports[0].converged
    assert reports[0].message.startswith("run crashed: ConfigError")
    assert math.isnan(reports[0].objective)
    row = summarize_report(reports[0])
    assert row.a == 0.00236
    assert row.peak_damage is None


async def test_empty_sweep_is_rejected(tiny_config):
    with pytest.raises(ConfigValidationError) as excinfo:
        await run_sweep(tiny_config, [])
    assert excinfo.value.key == "a_values"


async def test_sweep_needs_quadratic_coefficient(tiny_config):
    weitzman = load_config(scenario_path("weitzman")).with_grid(periods=10)
    with pytest.raises(ConfigValidationError) as excinfo:
        await run_sweep(weitzman, [0.1])
    assert excinfo.value.key == "damage.a"


def test_sensitivity_sweep_summary(tiny_config, fast_settings):
    reports = sensitivity_sweep(tiny_config, (0.00236, 0.16236), settings=fast_settings)
    rows = summarize_sweep(reports)
    assert [row.a for row in rows] == [0.00236, 0.16236]
    for row in rows:
        assert 0.0 <= row.peak_damage < 1.0
        assert 2015 <= row.peak_damage_year <= tiny_config.grid.end_year
        assert row.peak_temperature >= row.peak_damage_temperature
        assert row.min_c_percap > 0
    assert rows[1].peak_damage > rows[0].peak_damage


def test_default_sweep_coefficients_are_ordered():
    assert list(SWEEP_A_VALUES) == sorted(SWEEP_A_VALUES)
    assert SWEEP_A_VALUES[0] == 0.00236
