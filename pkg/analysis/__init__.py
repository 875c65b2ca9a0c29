from .ramsey import jacobian_eigenvalues, saddle_path, steady_state, transversality_diagnostic
from .spatial_regression import compare_to_dice, detect_published_variant, fit, load_states

__all__ = [
    "jacobian_eigenvalues", "saddle_path", "steady_state", "transversality_diagnostic",
    "compare_to_dice", "detect_published_variant", "fit", "load_states",
]
