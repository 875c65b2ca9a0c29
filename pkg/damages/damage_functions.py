import logging
from typing import NamedTuple, Union

import numpy as np

from core.errors import SimulationInputError
from core.schemas import DamageChannel, DamageFamily, DamageSpec
from core.units import DAMAGE_CEILING, VALIDATED_WARMING_C

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class ChannelAdjustment(NamedTuple):
    tfp: ArrayLike
    capital: ArrayLike
    y_net: ArrayLike


def raw_damage(spec: DamageSpec, dT: ArrayLike) -> ArrayLike:
    """Unclipped damage share of output; may exceed 1 for the quadratic family."""
    c = spec.coefficients
    sq = np.square(dT)
    if spec.family == DamageFamily.QUADRATIC:
        return c["a"] * sq
    if spec.family == DamageFamily.RATIONAL_QUADRATIC:
        return 1.0 - 1.0 / (1.0 + c["a"] * sq)
    if spec.family == DamageFamily.RATIONAL_LINEAR_QUADRATIC:
        return 1.0 - 1.0 / (1.0 + c["b"] * dT + c["a"] * sq)
    if spec.family == DamageFamily.RATIONAL_CUBED_SCALED:
        return 1.0 - 1.0 / (1.0 + (c["a"] / 9.0) * sq)
    if spec.family == DamageFamily.HIGH_CONVEXITY:
        ratio1 = np.asarray(dT) / c["kappa1"]
        ratio2 = np.asarray(dT) / c["kappa2"]
        return 1.0 - 1.0 / (1.0 + ratio1 ** 2 + ratio2 ** c["exponent"])
    raise SimulationInputError(f"Unsupported damage family: {spec.family}")


def damage_fraction(spec: DamageSpec, dT: ArrayLike) -> ArrayLike:
    values = np.asarray(dT, dtype=float)
    if not np.all(np.isfinite(values)):
        raise SimulationInputError("temperature change must be finite")
    if np.any(values < 0):
        raise SimulationInputError("temperature change must be non-negative")
    if np.any(values > VALIDATED_WARMING_C):
        logger.warning(
            f"Damage evaluated at {values.max():.2f} degC, beyond the validated range of {VALIDATED_WARMING_C} degC"
        )
    damage = np.clip(raw_damage(spec, values), 0.0, DAMAGE_CEILING)
    return float(damage) if damage.ndim == 0 else damage


def apply_channel(
    channel: DamageChannel,
    damage: ArrayLike,
    tfp: ArrayLike,
    capital: ArrayLike,
    y_gross: ArrayLike,
    gamma: float,
) -> ChannelAdjustment:
    """Net output once damage hits output, the capital stock or productivity."""
    if channel == DamageChannel.OUTPUT:
        return ChannelAdjustment(tfp, capital, (1.0 - damage) * y_gross)
    if channel == DamageChannel.CAPITAL:
        damaged = (1.0 - damage) * capital
        return ChannelAdjustment(tfp, damaged, y_gross * (1.0 - damage) ** gamma)
    if channel == DamageChannel.TFP:
        return ChannelAdjustment((1.0 - damage) * tfp, capital, (1.0 - damage) * y_gross)
    raise SimulationInputError(f"Unsupported damage channel: {channel}")


def damage_channel_apply(
    spec: DamageSpec,
    dT: float,
    tfp: float,
    capital: float,
    y_gross: float,
    gamma: float,
) -> ChannelAdjustment:
    if tfp <= 0 or capital <= 0 or y_gross <= 0:
        raise SimulationInputError("tfp, capital and gross output must be positive")
    damage = damage_fraction(spec, dT)
    return apply_channel(spec.channel, damage, tfp, capital, y_gross, gamma)


GENEALOGY_COEFFICIENTS: dict[int, tuple[DamageFamily, dict[str, float]]] = {
    1992: (DamageFamily.RATIONAL_CUBED_SCALED, {"a": 0.0133}),
    1999: (DamageFamily.RATIONAL_LINEAR_QUADRATIC, {"a": 0.0035, "b": 0.0045}),
    2008: (DamageFamily.RATIONAL_QUADRATIC, {"a": 0.0028388}),
    2013: (DamageFamily.RATIONAL_QUADRATIC, {"a": 0.00267}),
    2017: (DamageFamily.QUADRATIC, {"a": 0.00236}),
    2018: (DamageFamily.QUADRATIC, {"a": 0.00227}),
}


def genealogy() -> dict[int, DamageSpec]:
    return {
        year: DamageSpec(family=family, coefficients=coefficients)
        for year, (family, coefficients) in GENEALOGY_COEFFICIENTS.items()
    }


def weitzman_spec() -> DamageSpec:
    return DamageSpec(
        family=DamageFamily.HIGH_CONVEXITY,
        coefficients={"kappa1": 20.46, "kappa2": 6.081, "exponent": 6.754},
    )
