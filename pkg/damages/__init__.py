from .damage_functions import (
    damage_channel_apply,
    damage_fraction,
    genealogy,
    raw_damage,
    weitzman_spec,
)
from .estimates import estimate_points, fit_quadratic_to_points

__all__ = [
    "damage_channel_apply", "damage_fraction", "genealogy", "raw_damage", "weitzman_spec",
    "estimate_points", "fit_quadratic_to_points",
]
