import pytest

from core.config import default_config
from core.exogenous import exogenous_paths
from core.schemas import ControlPath, ModelConfig, SolverSettings
from solver.optimizer import solve

SHORT_PERIODS = 20


@pytest.fixture(scope="session")
def config() -> ModelConfig:
    return default_config()


@pytest.fixture(scope="session")
def paths(config):
    return exogenous_paths(config)


@pytest.fixture(scope="session")
def short_config(config) -> ModelConfig:
    return config.with_grid(periods=SHORT_PERIODS)


@pytest.fixture(scope="session")
def fast_settings() -> SolverSettings:
    return SolverSettings(starts=1, max_iterations=400, terminal_freeze=3, polish_rounds=1)


@pytest.fixture(scope="session")
def fixed_controls() -> ControlPath:
    return ControlPath.constant(SHORT_PERIODS, s=0.25, mu=0.2)


@pytest.fixture(scope="session")
def fixed_report(short_config, fixed_controls):
    return solve(short_config, "fixed-controls", controls=fixed_controls, log_level="WARNING")


@pytest.fixture(scope="session")
def optimal_report(short_config, fast_settings):
    return solve(short_config, "optimal", fast_settings, log_level="WARNING")


@pytest.fixture
def write_env(tmp_path):
    """Writes a scenario file with the given lines and returns its path."""

    def _write(*lines: str, name: str = "scenario.env"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
