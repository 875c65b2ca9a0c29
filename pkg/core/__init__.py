from .errors import (
    ConfigError, ConfigValidationError, DataIntegrityError, DiceError, RegressionError,
    ShootingError, SimulationInputError, SolverError, SteadyStateError,
)
from .logger import StructuredLogger, setup_logging
from .schemas import (
    ClimateParams, ClimateState, ControlPath, DamageChannel, DamageFamily, DamageSpec,
    EconomyState, ExogenousPaths, ModelConfig, PeriodRecord, SolveReport, SolverSettings,
    SolveStatus, TimeGrid, Trajectory,
)

__all__ = [
    "ConfigError", "ConfigValidationError", "DataIntegrityError", "DiceError", "RegressionError",
    "ShootingError", "SimulationInputError", "SolverError", "SteadyStateError",
    "StructuredLogger", "setup_logging",
    "ClimateParams", "ClimateState", "ControlPath", "DamageChannel", "DamageFamily", "DamageSpec",
    "EconomyState", "ExogenousPaths", "ModelConfig", "PeriodRecord", "SolveReport", "SolverSettings",
    "SolveStatus", "TimeGrid", "Trajectory",
]
