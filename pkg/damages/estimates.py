import logging
from typing import Optional, Sequence

import numpy as np

from core.errors import RegressionError
from core.schemas import EstimatePoint, QuadraticDamageFit
from data.data_loader import DataLoader

logger = logging.getLogger(__name__)

EXPECTED_POINTS = 19


def estimate_points(loader: Optional[DataLoader] = None) -> list[EstimatePoint]:
    df = (loader or DataLoader()).load_estimate_points()
    points = [
        EstimatePoint(
            study=row.study,
            warming=float(row.warming_c),
            impact_pct=float(row.impact_pct),
            method=row.method,
            coverage=row.coverage,
        )
        for row in df.itertuples(index=False)
    ]
    if len(points) != EXPECTED_POINTS:
        logger.warning(f"Expected {EXPECTED_POINTS} estimate points, found {len(points)}")
    return points


def fit_quadratic_to_points(points: Sequence[EstimatePoint]) -> QuadraticDamageFit:
    """Least-squares a in impact_fraction = -a * warming**2."""
    if len(points) < 2:
        raise RegressionError("at least two estimate points are required")
    x = np.array([p.warming for p in points]) ** 2
    y = np.array([p.impact_pct for p in points]) / 100.0
    if np.allclose(x, x[0]):
        raise RegressionError("estimate points must span more than one warming level")

    a = -float(np.dot(x, y) / np.dot(x, x))
    residuals = y + a * x
    rmse = float(np.sqrt(np.mean(residuals ** 2)))
    logger.info(f"Quadratic fit to {len(points)} estimate points: a={a:.6f}, rmse={rmse:.5f}")
    return QuadraticDamageFit(a=a, rmse=rmse, residuals=residuals, n=len(points))
