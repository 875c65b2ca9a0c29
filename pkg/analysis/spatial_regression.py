import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from dotenv import dotenv_values

from core.errors import DataIntegrityError, RegressionError
from core.schemas import DiceComparison, QuadraticFit, RegressionVariant, StateRecord, Weighting
from data.data_loader import DataLoader

logger = logging.getLogger(__name__)

NATIONAL_ROW = "USA"
PINNED_VARIANT_PATH = Path(__file__).resolve().parent.parent / "data" / "spatial_regression.env"
PUBLISHED_BETA = -0.00318
PUBLISHED_R_SQUARED = 0.10
ALL_VARIANTS = tuple(
    RegressionVariant(weighting=weighting, intercept=intercept)
    for weighting in (Weighting.UNWEIGHTED, Weighting.POPULATION)
    for intercept in (False, True)
)


def load_states(loader: Optional[DataLoader] = None) -> tuple[list[StateRecord], StateRecord]:
    """State rows and the national reference row."""
    df = (loader or DataLoader()).load_state_table()
    numeric = [column for column in df.columns if column != "state"]
    df[numeric] = df[numeric].astype(float)
    records = [StateRecord(**row) for row in df.to_dict(orient="records")]
    national = [r for r in records if r.state == NATIONAL_ROW]
    states = [r for r in records if r.state != NATIONAL_ROW]
    if len(national) != 1:
        raise DataIntegrityError("state table must contain exactly one national row")
    national_row = national[0]

    for record in states:
        if abs(record.temp_c - national_row.temp_c - record.dtemp) > 0.051:
            raise DataIntegrityError(f"{record.state}: dtemp inconsistent with temperatures")
        if abs(record.gsp_percap - national_row.gsp_percap - record.dgsp_percap) > 1.0:
            raise DataIntegrityError(f"{record.state}: dgsp_percap inconsistent with GSP per capita")
        implied = record.gsp_bn * 1e3 / record.pop_mn
        if abs(implied - record.gsp_percap) > 0.01 * record.gsp_percap:
            raise DataIntegrityError(f"{record.state}: gsp_percap inconsistent with GSP and population")
    logger.info(f"Loaded {len(states)} state records")
    return states, national_row


def pinned_variant(path: Path = PINNED_VARIANT_PATH) -> RegressionVariant:
    values = dotenv_values(path)
    return RegressionVariant(
        weighting=values.get("weighting", Weighting.UNWEIGHTED.value),
        intercept=str(values.get("intercept", "false")).strip().lower() == "true",
    )


def fit(
    records: Sequence[StateRecord],
    variant: Optional[RegressionVariant] = None,
    national_mean: Optional[float] = None,
) -> QuadraticFit:
    """Least squares of relative GSP-per-capita deviation on squared warming."""
    variant = variant or pinned_variant()
    if len(records) < 3:
        raise RegressionError("at least three records are required")
    if national_mean is None:
        national_mean = float(np.mean([r.gsp_percap - r.dgsp_percap for r in records]))

    x = np.array([r.dtemp for r in records]) ** 2
    y = np.array([r.dgsp_percap for r in records]) / national_mean
    weights = np.array([r.pop_mn for r in records]) if variant.weighting == Weighting.POPULATION else np.ones_like(x)

    design = np.column_stack([x, np.ones_like(x)]) if variant.intercept else x[:, None]
    root = np.sqrt(weights)
    weighted_design = design * root[:, None]
    if np.linalg.matrix_rank(weighted_design) < design.shape[1]:
        raise RegressionError("singular design: warming deviations carry no variation")

    coefficients, *_ = np.linalg.lstsq(weighted_design, y * root, rcond=None)
    fitted = design @ coefficients
    residuals = y - fitted

    mean_y = np.average(y, weights=weights)
    sst = float(np.sum(weights * (y - mean_y) ** 2))
    ssr = float(np.sum(weights * residuals ** 2))
    r_squared = 0.0 if sst == 0 else float(np.clip(1.0 - ssr / sst, 0.0, 1.0))

    return QuadraticFit(
        beta=float(coefficients[0]),
        intercept=float(coefficients[1]) if variant.intercept else 0.0,
        r_squared=r_squared,
        residuals=residuals,
        variant=variant,
        national_mean=national_mean,
    )


def fit_all_variants(records: Sequence[StateRecord], national_mean: Optional[float] = None) -> list[QuadraticFit]:
    return [fit(records, variant, national_mean) for variant in ALL_VARIANTS]


def detect_published_variant(records: Sequence[StateRecord], national_mean: Optional[float] = None) -> QuadraticFit:
    """The variant closest to the published coefficient and R-squared."""
    fits = fit_all_variants(records, national_mean)

    def distance(candidate: QuadraticFit) -> float:
        return abs(candidate.beta - PUBLISHED_BETA) / abs(PUBLISHED_BETA) + abs(candidate.r_squared - PUBLISHED_R_SQUARED)

    best = min(fits, key=distance)
    logger.info(f"Closest regression variant: {best.variant.label} (beta={best.beta:.6f}, r2={best.r_squared:.4f})")
    return best


def compare_to_dice(result: QuadraticFit, dice_a: float, rel_tol: float = 1e-9) -> DiceComparison:
    magnitude = abs(result.beta)
    return DiceComparison(beta_magnitude=magnitude, dice_a=dice_a, outcome=compare_magnitude(magnitude, dice_a, rel_tol))


def compare_magnitude(magnitude: float, dice_a: float, rel_tol: float = 1e-9) -> str:
    if abs(magnitude - dice_a) <= rel_tol * max(magnitude, dice_a):
        return "tie"
    return "larger" if magnitude > dice_a else "smaller"
