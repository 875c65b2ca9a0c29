import numpy as np

from core.schemas import ExogenousPaths, ModelConfig
from scenarios.base_scenario import BaseScenario


class OptimalScenario(BaseScenario):
    name = "optimal"

    def mitigation_upper(self, paths: ExogenousPaths, config: ModelConfig) -> np.ndarray:
        return paths.mu_cap.copy()
