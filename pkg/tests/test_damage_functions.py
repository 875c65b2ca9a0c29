import logging
import shutil

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import DataIntegrityError, RegressionError, SimulationInputError
from core.schemas import DamageChannel, DamageFamily, DamageSpec, EstimateMethod, EstimatePoint
from core.units import DAMAGE_CEILING
from damages import (
    damage_channel_apply,
    damage_fraction,
    estimate_points,
    fit_quadratic_to_points,
    genealogy,
    weitzman_spec,
)
from data.data_loader import CHECKSUMS, ESTIMATE_POINTS_FILE, DataLoader


def quadratic(a: float, channel: DamageChannel = DamageChannel.OUTPUT) -> DamageSpec:
    return DamageSpec(family=DamageFamily.QUADRATIC, coefficients={"a": a}, channel=channel)


def test_quadratic_anchors():
    assert damage_fraction(quadratic(0.00227), 0.0) == 0.0
    assert damage_fraction(quadratic(0.00227), 3.0) == pytest.approx(0.02043, rel=1e-12)
    assert damage_fraction(quadratic(0.00236), 4.08) == pytest.approx(0.0392, abs=1e-4)
    assert damage_fraction(quadratic(0.19236), 2.27) == pytest.approx(0.9921, abs=2e-3)
    assert damage_fraction(quadratic(0.18236), 2.32) == pytest.approx(0.9846, abs=7e-3)


def test_rational_quadratic_anchor():
    spec = genealogy()[2008]
    expected = 1.0 - 1.0 / (1.0 + 0.0028388 * 9.0)
    assert damage_fraction(spec, 3.0) == pytest.approx(expected, rel=1e-12)
    assert damage_fraction(spec, 3.0) == pytest.approx(0.024921, abs=1e-5)


def test_damage_is_clipped_below_one():
    assert damage_fraction(quadratic(0.19236), 5.0) == DAMAGE_CEILING
    assert damage_fraction(weitzman_spec(), 19.0) < 1.0


def test_damage_rejects_negative_or_non_finite_warming():
    with pytest.raises(SimulationInputError):
        damage_fraction(quadratic(0.00236), -0.1)
    with pytest.raises(SimulationInputError):
        damage_fraction(quadratic(0.00236), np.nan)


def test_damage_beyond_validated_range_is_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="damages.damage_functions"):
        damage_fraction(quadratic(0.00236), 25.0)
    assert "validated range" in caplog.text


@pytest.mark.parametrize("year", [1992, 1999, 2008, 2013, 2017, 2018])
def test_genealogy_forms_are_zero_at_zero_and_increasing(year):
    spec = genealogy()[year]
    warming = np.linspace(0.0, 6.0, 61)
    values = damage_fraction(spec, warming)
    assert values[0] == 0.0
    assert np.all(np.diff(values) > 0)


def test_genealogy_latest_forms():
    specs = genealogy()
    assert sorted(specs) == [1992, 1999, 2008, 2013, 2017, 2018]
    assert specs[2017].coefficients == {"a": 0.00236}
    assert specs[2018].coefficients == {"a": 0.00227}
    assert specs[1999].family == DamageFamily.RATIONAL_LINEAR_QUADRATIC
    assert damage_fraction(specs[2018], 3.0) < damage_fraction(specs[2017], 3.0)


def test_genealogy_ordering_between_two_and_six_degrees():
    specs = genealogy()
    warming = np.round(np.arange(2.0, 6.0 + 1e-9, 0.1), 1)
    curves = [damage_fraction(specs[year], warming) for year in (1999, 2008, 2013, 2017, 2018)]
    for older, newer in zip(curves, curves[1:]):
        assert np.all(older >= newer)


def test_damage_is_non_decreasing_up_to_twenty_degrees():
    warming = np.linspace(0.0, 20.0, 401)
    for spec in [*genealogy().values(), weitzman_spec()]:
        values = damage_fraction(spec, warming)
        assert np.all(np.diff(values) >= 0)
        assert np.all((values >= 0) & (values < 1))


def test_weitzman_form_reaches_half_of_output_near_six_degrees():
    assert damage_fraction(weitzman_spec(), 6.0) == pytest.approx(0.5, abs=0.01)
    assert damage_fraction(weitzman_spec(), 2.0) < 0.02


def test_damage_spec_requires_family_coefficients():
    with pytest.raises(ValidationError, match="damage.b"):
        DamageSpec(family=DamageFamily.RATIONAL_LINEAR_QUADRATIC, coefficients={"a": 0.0035})
    with pytest.raises(ValidationError, match="damage.a"):
        DamageSpec(family=DamageFamily.QUADRATIC, coefficients={"a": -1.0})


def test_output_channel():
    adjusted = damage_channel_apply(quadratic(0.5), 1.0, tfp=2.0, capital=10.0, y_gross=5.0, gamma=0.3)
    assert adjusted.y_net == pytest.approx(2.5)
    assert adjusted.capital == 10.0
    assert adjusted.tfp == 2.0


def test_capital_channel():
    spec = quadratic(0.5, DamageChannel.CAPITAL)
    adjusted = damage_channel_apply(spec, 1.0, tfp=2.0, capital=10.0, y_gross=5.0, gamma=0.3)
    assert adjusted.capital == pytest.approx(5.0)
    assert adjusted.y_net / 5.0 == pytest.approx(0.5 ** 0.3, rel=1e-12)
    assert adjusted.y_net / 5.0 == pytest.approx(0.8123, abs=1e-4)


def test_tfp_channel():
    spec = quadratic(0.5, DamageChannel.TFP)
    adjusted = damage_channel_apply(spec, 1.0, tfp=2.0, capital=10.0, y_gross=5.0, gamma=0.3)
    assert adjusted.tfp == pytest.approx(1.0)
    assert adjusted.y_net == pytest.approx(2.5)
    assert adjusted.capital == 10.0


def test_channel_rejects_non_positive_state():
    with pytest.raises(SimulationInputError):
        damage_channel_apply(quadratic(0.5), 1.0, tfp=0.0, capital=10.0, y_gross=5.0, gamma=0.3)


def test_estimate_points():
    points = estimate_points()
    assert len(points) == 19
    assert all(p.warming > 0 for p in points)
    assert {p.method for p in points} <= set(EstimateMethod)
    worst = min(points, key=lambda p: p.impact_pct)
    assert worst.study == "Maddison and Rehdanz 2011"
    assert worst.warming == 3.2
    assert worst.impact_pct == -12.4


def test_embedded_data_checksum():
    loader = DataLoader()
    assert loader.checksum(ESTIMATE_POINTS_FILE) == CHECKSUMS[ESTIMATE_POINTS_FILE]


def test_tampered_data_is_rejected(tmp_path):
    source = DataLoader().data_dir / ESTIMATE_POINTS_FILE
    shutil.copy(source, tmp_path / ESTIMATE_POINTS_FILE)
    with open(tmp_path / ESTIMATE_POINTS_FILE, "a") as f:
        f.write("Invented 2030,2.0,-1.0,enumeration,Total\n")
    with pytest.raises(DataIntegrityError):
        DataLoader(data_dir=tmp_path).load_estimate_points()
    assert len(DataLoader(data_dir=tmp_path, verify=False).load_estimate_points()) == 20


def test_quadratic_fit_recovers_exact_coefficient():
    points = [
        EstimatePoint(study=f"s{i}", warming=w, impact_pct=-100.0 * 0.003 * w ** 2, method="enumeration", coverage="x")
        for i, w in enumerate((1.0, 2.0, 2.5, 3.0, 4.0))
    ]
    result = fit_quadratic_to_points(points)
    assert result.a == pytest.approx(0.003, rel=1e-12)
    assert result.rmse < 1e-12
    assert result.n == 5


def test_quadratic_fit_to_embedded_points():
    result = fit_quadratic_to_points(estimate_points())
    assert 0.001 < result.a < 0.005
    assert len(result.residuals) == 19


def test_quadratic_fit_needs_spread():
    point = EstimatePoint(study="s", warming=2.0, impact_pct=-1.0, method="enumeration", coverage="x")
    with pytest.raises(RegressionError):
        fit_quadratic_to_points([point])
    with pytest.raises(RegressionError):
        fit_quadratic_to_points([point, point])
