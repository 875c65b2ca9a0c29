from .objective import crra_utility, evaluate_objective
from .optimizer import ControlOptimizer, solve
from .scc import social_cost_of_carbon
from .sweep import SWEEP_A_VALUES, run_sweep, sensitivity_sweep, summarize_sweep

__all__ = [
    "crra_utility", "evaluate_objective", "ControlOptimizer", "solve",
    "social_cost_of_carbon", "SWEEP_A_VALUES", "run_sweep", "sensitivity_sweep", "summarize_sweep",
]
