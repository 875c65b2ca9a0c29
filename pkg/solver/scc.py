import logging

import numpy as np

from core.errors import SolverError
from core.exogenous import exogenous_paths
from core.schemas import SolveReport
from core.simulation import simulate_batch
from core.units import TRILLIONS_PER_USD_GTCO2
from solver.objective import batch_welfare

logger = logging.getLogger(__name__)

EMISSION_PULSE = 1.0
CONSUMPTION_PULSE_SHARE = 1e-4


def social_cost_of_carbon(
    report: SolveReport,
    t: int,
    emission_pulse: float = EMISSION_PULSE,
    consumption_share: float = CONSUMPTION_PULSE_SHARE,
) -> float:
    """USD per tCO2: -(dW/dE_t) / (dW/dC_t) along the solved controls."""
    if not report.converged or report.controls is None or report.trajectory is None:
        raise SolverError(f"social cost of carbon needs a converged report, got {report.status.value}")

    config = report.config
    paths = exogenous_paths(config)
    if not 0 <= t < paths.periods:
        raise SolverError(f"period {t} outside the grid of {paths.periods} periods")

    controls = report.controls
    s = np.tile(controls.s, (4, 1))
    mu = np.tile(controls.mu, (4, 1))
    d_consumption = consumption_share * report.trajectory.records[t].consumption

    emissions = np.zeros_like(s)
    emissions[0, t], emissions[1, t] = emission_pulse, -emission_pulse
    consumption = np.zeros_like(s)
    consumption[2, t], consumption[3, t] = d_consumption, -d_consumption

    batch = simulate_batch(s, mu, config, paths, emission_pulse=emissions, consumption_pulse=consumption)
    welfare, _ = batch_welfare(batch, config, paths)
    d_welfare_d_emissions = (welfare[0] - welfare[1]) / (2.0 * emission_pulse)
    d_welfare_d_consumption = (welfare[2] - welfare[3]) / (2.0 * d_consumption)
    if d_welfare_d_consumption <= 0:
        raise SolverError("marginal utility of consumption is not positive")

    scc = -(d_welfare_d_emissions / d_welfare_d_consumption) / TRILLIONS_PER_USD_GTCO2
    logger.info(f"Social cost of carbon in {int(paths.years[t])}: {scc:.2f} USD/tCO2")
    return float(scc)
