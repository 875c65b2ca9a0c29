from typing import Any, Optional


class DiceError(Exception):
    pass


class ConfigError(DiceError):
    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{message} (key: {key})" if key else message)


class ConfigValidationError(ConfigError):
    pass


class SimulationInputError(DiceError, ValueError):
    pass


class SteadyStateError(DiceError):
    pass


class ShootingError(DiceError):
    def __init__(self, message: str, diagnostics: Optional[dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class RegressionError(DiceError):
    pass


class DataIntegrityError(DiceError):
    pass


class SolverError(DiceError):
    pass
