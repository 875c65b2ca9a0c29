from typing import Optional

import numpy as np

from core.schemas import ControlPath, ExogenousPaths, ModelConfig
from scenarios.base_scenario import BaseScenario


class FixedControlsScenario(BaseScenario):
    """Evaluates a given control path without optimizing it."""

    name = "fixed-controls"

    def __init__(self, controls: ControlPath, log_level: str = "INFO"):
        super().__init__(log_level)
        self.controls = controls

    @property
    def optimizes(self) -> bool:
        return False

    def fixed_controls(self) -> Optional[ControlPath]:
        return self.controls

    def mitigation_upper(self, paths: ExogenousPaths, config: ModelConfig) -> np.ndarray:
        return paths.mu_cap.copy()
