import numpy as np

from core.economy import optimal_mitigation
from core.errors import ConfigValidationError
from core.schemas import ExogenousPaths, ModelConfig
from scenarios.base_scenario import BaseScenario


class BaselineScenario(BaseScenario):
    """Mitigation no deeper than what the capped carbon price would buy."""

    name = "baseline"

    def mitigation_upper(self, paths: ExogenousPaths, config: ModelConfig) -> np.ndarray:
        if paths.price_cap is None:
            raise ConfigValidationError("baseline scenario requires a carbon price cap", key="carbon_price_cap")
        upper = optimal_mitigation(paths.price_cap, paths.p_bs, config.theta2, paths.mu_cap)
        self.logger.debug("Baseline mitigation ceiling", first=f"{upper[0]:.4f}", last=f"{upper[-1]:.4f}")
        return upper
