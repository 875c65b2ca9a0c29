from typing import Optional

from core.errors import ConfigError
from core.schemas import ControlPath

from .base_scenario import BaseScenario
from .baseline_scenario import BaselineScenario
from .fixed_scenario import FixedControlsScenario
from .optimal_scenario import OptimalScenario

SCENARIO_NAMES = ("optimal", "baseline", "fixed-controls")


def scenario_for(name: str, controls: Optional[ControlPath] = None, log_level: str = "INFO") -> BaseScenario:
    if name == "optimal":
        return OptimalScenario(log_level)
    if name == "baseline":
        return BaselineScenario(log_level)
    if name == "fixed-controls":
        if controls is None:
            raise ConfigError("fixed-controls scenario needs a control path", key="scenario")
        return FixedControlsScenario(controls, log_level)
    raise ConfigError(f"Unknown scenario {name!r}", key="scenario")


__all__ = [
    "BaseScenario", "OptimalScenario", "BaselineScenario", "FixedControlsScenario",
    "SCENARIO_NAMES", "scenario_for",
]
