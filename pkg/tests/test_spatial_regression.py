import numpy as np
import pytest

from analysis.spatial_regression import (
    ALL_VARIANTS,
    compare_magnitude,
    compare_to_dice,
    detect_published_variant,
    fit,
    fit_all_variants,
    load_states,
    pinned_variant,
)
from core.errors import RegressionError
from core.schemas import RegressionVariant, StateRecord, Weighting


@pytest.fixture(scope="module")
def table():
    return load_states()


def synthetic_records(beta: float, intercept: float, national_mean: float = 30_000.0) -> list[StateRecord]:
    dtemps = np.linspace(-6.0, 10.0, 12)
    return [
        StateRecord(
            state=f"S{i}",
            temp_c=11.5 + d,
            gsp_bn=100.0,
            pop_mn=1.0 + i,
            gsp_percap=national_mean,
            dtemp=d,
            dgsp_percap=national_mean * (intercept + beta * d ** 2),
        )
        for i, d in enumerate(dtemps)
    ]


def test_state_table(table):
    states, national = table
    assert len(states) == 48
    assert national.state == "USA"
    assert national.temp_c == 11.5
    assert national.gsp_percap == 33206
    florida = next(s for s in states if s.state == "Florida")
    assert florida.dtemp == 10.0


def test_pinned_variant_is_unweighted_through_origin():
    variant = pinned_variant()
    assert variant.weighting == Weighting.UNWEIGHTED
    assert not variant.intercept
    assert variant.label == "unweighted-origin"


def test_pinned_fit_reproduces_published_numbers(table):
    states, national = table
    result = fit(states, pinned_variant(), national.gsp_percap)
    assert -0.0037 <= result.beta <= -0.0027
    assert result.beta == pytest.approx(-0.00318, abs=5e-5)
    assert 0.07 <= result.r_squared <= 0.13
    assert result.intercept == 0.0
    assert len(result.residuals) == 48


def test_variant_detection_agrees_with_pinned(table):
    states, national = table
    assert detect_published_variant(states, national.gsp_percap).variant == pinned_variant()


def test_all_variants_are_fitted(table):
    states, national = table
    fits = fit_all_variants(states, national.gsp_percap)
    assert [f.variant for f in fits] == list(ALL_VARIANTS)
    assert len({f.variant.label for f in fits}) == 4
    assert all(f.beta < 0 for f in fits)
    assert all(0.0 <= f.r_squared <= 1.0 for f in fits)


def test_national_mean_defaults_to_table_mean(table):
    states, national = table
    implied = fit(states, pinned_variant())
    assert implied.national_mean == pytest.approx(national.gsp_percap, abs=1.0)


def test_spatial_coefficient_exceeds_dice(table):
    states, national = table
    result = fit(states, pinned_variant(), national.gsp_percap)
    comparison = compare_to_dice(result, 0.00227)
    assert comparison.outcome == "larger"
    assert comparison.claim_holds


def test_compare_magnitude():
    assert compare_magnitude(0.003, 0.00227) == "larger"
    assert compare_magnitude(0.002, 0.00227) == "smaller"
    assert compare_magnitude(0.00227, 0.00227) == "tie"


@pytest.mark.parametrize("variant", ALL_VARIANTS, ids=lambda v: v.label)
def test_exact_recovery_on_synthetic_quadratic(variant):
    intercept = 0.01 if variant.intercept else 0.0
    result = fit(synthetic_records(-0.004, intercept), variant, national_mean=30_000.0)
    assert result.beta == pytest.approx(-0.004, rel=1e-10)
    assert result.intercept == pytest.approx(intercept, abs=1e-12)
    assert result.r_squared == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(result.residuals)) < 1e-12


def test_singular_design_is_rejected():
    records = [
        StateRecord(state=f"S{i}", temp_c=11.5, gsp_bn=1.0, pop_mn=1.0, gsp_percap=1.0, dtemp=0.0, dgsp_percap=0.0)
        for i in range(5)
    ]
    with pytest.raises(RegressionError):
        fit(records, RegressionVariant(), national_mean=1.0)


def test_too_few_records_are_rejected(table):
    states, national = table
    with pytest.raises(RegressionError):
        fit(states[:2], pinned_variant(), national.gsp_percap)
