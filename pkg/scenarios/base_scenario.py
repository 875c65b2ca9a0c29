from abc import ABC, abstractmethod
from typing import Optional
import logging

import numpy as np

from core.logger import StructuredLogger
from core.schemas import ControlPath, ExogenousPaths, ModelConfig

logger = logging.getLogger(__name__)


class BaseScenario(ABC):
    """Policy regime: which controls are free and the box they live in."""

    name: str = "base"

    def __init__(self, log_level: str = "INFO"):
        self.logger = StructuredLogger(f"scenario.{self.name}", log_level)

    @property
    def optimizes(self) -> bool:
        return True

    def fixed_controls(self) -> Optional[ControlPath]:
        return None

    def savings_bounds(self, paths: ExogenousPaths, config: ModelConfig) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros(paths.periods), np.ones(paths.periods)

    @abstractmethod
    def mitigation_upper(self, paths: ExogenousPaths, config: ModelConfig) -> np.ndarray:
        pass

    def mitigation_bounds(self, paths: ExogenousPaths, config: ModelConfig) -> tuple[np.ndarray, np.ndarray]:
        upper = np.minimum(self.mitigation_upper(paths, config), paths.mu_cap)
        lower = np.zeros(paths.periods)
        if config.mu_initial is not None:
            first = min(config.mu_initial, upper[0])
            lower[0] = upper[0] = first
        return lower, upper

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
