import hashlib
import json
import math
from enum import Enum
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DamageFamily(str, Enum):
    QUADRATIC = "quadratic-output-loss"
    RATIONAL_QUADRATIC = "rational-quadratic"
    RATIONAL_LINEAR_QUADRATIC = "rational-linear-quadratic"
    RATIONAL_CUBED_SCALED = "rational-cubed-scaled"
    HIGH_CONVEXITY = "high-convexity"


class DamageChannel(str, Enum):
    OUTPUT = "output"
    CAPITAL = "capital"
    TFP = "tfp"


class EstimateMethod(str, Enum):
    ENUMERATION = "enumeration"
    STATISTICAL = "statistical"
    CGE = "CGE"
    EXPERT_ELICITATION = "expert-elicitation"


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    INFEASIBLE = "infeasible"
    STALLED = "stalled"
    FAILED = "failed"


class Weighting(str, Enum):
    UNWEIGHTED = "unweighted"
    POPULATION = "population"


REQUIRED_COEFFICIENTS: dict[DamageFamily, tuple[str, ...]] = {
    DamageFamily.QUADRATIC: ("a",),
    DamageFamily.RATIONAL_QUADRATIC: ("a",),
    DamageFamily.RATIONAL_LINEAR_QUADRATIC: ("a", "b"),
    DamageFamily.RATIONAL_CUBED_SCALED: ("a",),
    DamageFamily.HIGH_CONVEXITY: ("kappa1", "kappa2", "exponent"),
}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


class DamageSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: DamageFamily = Field(..., description="Functional form of the damage function")
    coefficients: dict[str, float] = Field(default_factory=dict)
    channel: DamageChannel = Field(default=DamageChannel.OUTPUT)

    @model_validator(mode="after")
    def _check_coefficients(self) -> "DamageSpec":
        required = REQUIRED_COEFFICIENTS[self.family]
        names = set(self.coefficients)
        missing = [name for name in required if name not in names]
        if missing:
            raise ValueError(f"damage.{missing[0]} is required for family {self.family.value}")
        extra = sorted(names - set(required))
        if extra:
            raise ValueError(f"damage.{extra[0]} is not a coefficient of family {self.family.value}")
        for name, value in self.coefficients.items():
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"damage.{name} must be finite and non-negative")
        if self.family == DamageFamily.HIGH_CONVEXITY:
            if self.coefficients["kappa1"] <= 0 or self.coefficients["kappa2"] <= 0:
                raise ValueError("damage.kappa1 and damage.kappa2 must be positive")
            if self.coefficients["exponent"] < 1:
                raise ValueError("damage.exponent must be at least 1")
        return self

    def with_coefficient(self, name: str, value: float) -> "DamageSpec":
        return DamageSpec(
            family=self.family,
            coefficients={**self.coefficients, name: value},
            channel=self.channel,
        )


class TimeGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    start_year: int = Field(default=2015)
    step_years: int = Field(default=5, ge=1)
    periods: int = Field(default=100, ge=2)

    @property
    def years(self) -> np.ndarray:
        return self.start_year + self.step_years * np.arange(self.periods)

    @property
    def end_year(self) -> int:
        return self.start_year + self.step_years * (self.periods - 1)


class PopulationSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: float = Field(..., gt=0, description="Billions of people")
    adjustment: float = Field(..., gt=0, lt=1, description="Convergence per 5-year period")
    asymptote: float = Field(..., gt=0, description="Billions of people")


class TfpSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: float = Field(..., gt=0)
    growth: float = Field(..., ge=0, lt=1, description="Growth per 5-year period")
    decline: float = Field(..., ge=0, description="Decline of growth, 1/yr")


class CarbonIntensitySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: float = Field(..., gt=0, description="GtCO2 per trillion USD")
    decline: float = Field(..., ge=0, description="Initial decline, 1/yr")
    decline_change: float = Field(..., ge=0, lt=1, description="Change of the decline, 1/yr")


class DecayingPathSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: float = Field(..., gt=0)
    decay: float = Field(..., ge=0, description="Continuous decay, 1/yr")


class ExogenousSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    population: PopulationSpec
    tfp: TfpSpec
    sigma: CarbonIntensitySpec
    e_exo: DecayingPathSpec
    p_bs: DecayingPathSpec


class MuCapSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: float = Field(default=1.0, gt=0, le=1.2)
    raised: float = Field(default=1.2, gt=0, le=1.2)
    from_year: int = Field(default=2160)

    @model_validator(mode="after")
    def _non_decreasing(self) -> "MuCapSchedule":
        if self.raised < self.base:
            raise ValueError("mu_cap.raised must not be below mu_cap.base")
        return self


class CarbonPriceCap(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial: float = Field(..., gt=0, description="USD/tCO2")
    growth: float = Field(..., description="Continuous growth, 1/yr")


class ClimateParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    transfer_matrix: tuple[tuple[float, float, float], ...] = Field(
        ..., description="Per-period carbon transfer, acting on [m_at, m_up, m_lo]"
    )
    m_pre: float = Field(..., gt=0, description="Pre-industrial atmospheric carbon, GtC")
    f2x: float = Field(..., gt=0, description="Forcing of CO2 doubling, W/m2")
    ecs: float = Field(..., gt=0, description="Equilibrium climate sensitivity, degC")
    c1: float = Field(..., gt=0)
    c3: float = Field(..., ge=0)
    c4: float = Field(..., ge=0)
    f_exo_initial: float = Field(...)
    f_exo_final: float = Field(...)
    f_exo_ramp_periods: int = Field(..., ge=1)
    gtco2_per_gtc: float = Field(..., gt=0)

    @field_validator("transfer_matrix", mode="before")
    @classmethod
    def _parse_matrix(cls, value: Any) -> Any:
        if isinstance(value, str):
            return json.loads(value)
        if isinstance(value, np.ndarray):
            return value.tolist()
        return value

    @field_validator("transfer_matrix")
    @classmethod
    def _columns_conserve_carbon(cls, value: tuple) -> tuple:
        matrix = np.asarray(value, dtype=float)
        if matrix.shape != (3, 3):
            raise ValueError("climate.transfer_matrix must be 3x3")
        if np.any(matrix < 0) or not np.all(np.isfinite(matrix)):
            raise ValueError("climate.transfer_matrix entries must be finite and non-negative")
        if np.max(np.abs(matrix.sum(axis=0) - 1.0)) > 1e-12:
            raise ValueError("climate.transfer_matrix columns must sum to 1")
        return value

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.transfer_matrix, dtype=float)


class InitialState(BaseModel):
    model_config = ConfigDict(frozen=True)

    capital: float = Field(..., gt=0, description="Trillions USD2005")
    m_at: float = Field(..., gt=0)
    m_up: float = Field(..., gt=0)
    m_lo: float = Field(..., gt=0)
    t_at: float = Field(...)
    t_lo: float = Field(...)


class ModelConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    defaults_version: str = Field(default="dice2016r-1")
    alpha: float = Field(..., gt=0, description="Elasticity of marginal utility")
    rho: float = Field(..., gt=0, description="Pure rate of time preference, 1/yr")
    gamma: float = Field(..., gt=0, lt=1, description="Capital share")
    delta: float = Field(..., gt=0, lt=1, description="Depreciation, 1/yr")
    theta2: float = Field(..., gt=1, description="Abatement cost exponent")
    damage: DamageSpec
    grid: TimeGrid = Field(default_factory=TimeGrid)
    exo: ExogenousSpec
    climate: ClimateParams
    initial: InitialState
    mu_cap: MuCapSchedule = Field(default_factory=MuCapSchedule)
    carbon_price_cap: Optional[CarbonPriceCap] = None
    temperature_cap: Optional[float] = Field(default=None, gt=0)
    mu_initial: Optional[float] = Field(default=None, ge=0, le=1.2)

    def config_hash(self) -> str:
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def with_damage_coefficient(self, name: str, value: float) -> "ModelConfig":
        return self.model_copy(update={"damage": self.damage.with_coefficient(name, value)})

    def with_grid(self, periods: Optional[int] = None, step_years: Optional[int] = None) -> "ModelConfig":
        grid = TimeGrid(
            start_year=self.grid.start_year,
            step_years=step_years or self.grid.step_years,
            periods=periods or self.grid.periods,
        )
        return self.model_copy(update={"grid": grid})


# ---------------------------------------------------------------------------
# Exogenous paths and states
# ---------------------------------------------------------------------------


class ExogenousPaths(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    years: np.ndarray
    population: np.ndarray
    tfp: np.ndarray
    sigma: np.ndarray
    e_exo: np.ndarray
    p_bs: np.ndarray
    mu_cap: np.ndarray
    f_exo: np.ndarray
    price_cap: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def _equal_lengths(self) -> "ExogenousPaths":
        n = len(self.years)
        for name in ("population", "tfp", "sigma", "e_exo", "p_bs", "mu_cap", "f_exo"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, expected {n}")
        if self.price_cap is not None and len(self.price_cap) != n:
            raise ValueError("price_cap length does not match the grid")
        return self

    @property
    def periods(self) -> int:
        return len(self.years)


class ClimateState(BaseModel):
    model_config = ConfigDict(frozen=True)

    m_at: float = Field(..., gt=0, description="Atmospheric carbon, GtC")
    m_up: float = Field(..., gt=0, description="Upper ocean and biosphere carbon, GtC")
    m_lo: float = Field(..., gt=0, description="Deep ocean carbon, GtC")
    t_at: float = Field(..., allow_inf_nan=False)
    t_lo: float = Field(..., allow_inf_nan=False)

    @property
    def reservoirs(self) -> np.ndarray:
        return np.array([self.m_at, self.m_up, self.m_lo])

    @property
    def total_carbon(self) -> float:
        return self.m_at + self.m_up + self.m_lo


class EconomyState(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: float = Field(..., gt=0, allow_inf_nan=False, description="Capital, trillions USD2005")
    tfp_scale: float = Field(
        default=1.0, gt=0, le=1, allow_inf_nan=False, description="Share of exogenous TFP left after past damages"
    )


class PeriodRecord(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    year: int
    y_gross: float
    y_net: float
    y_final: float
    damage_frac: float
    lambda_: float = Field(..., alias="lambda", description="Abatement cost share of net output")
    abatement_cost: float
    e_ind: float
    e_total: float
    mu: float = Field(..., ge=0)
    s: float = Field(..., ge=0, le=1)
    consumption: float
    c_percap: float
    p_c: float
    k: float
    k_over_y: float
    population: float
    m_at: float
    t_at: float
    capital_floor_hit: bool = False
    damage_saturated: bool = False
    consumption_penalized: bool = False

    @model_validator(mode="after")
    def _output_wedges(self) -> "PeriodRecord":
        scale = max(abs(self.y_gross), 1.0)
        if abs(self.y_final - (1.0 - self.lambda_) * self.y_net) > 1e-9 * scale:
            raise ValueError("y_final must equal (1 - lambda) * y_net")
        if abs(self.y_net - (1.0 - self.damage_frac) * self.y_gross) > 1e-9 * scale:
            raise ValueError("y_net must equal (1 - damage_frac) * y_gross")
        return self


class ControlPath(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s: np.ndarray
    mu: np.ndarray

    @field_validator("s", "mu", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 1:
            raise ValueError("control paths must be one-dimensional")
        if not np.all(np.isfinite(array)):
            raise ValueError("control paths must be finite")
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _same_length(self) -> "ControlPath":
        if len(self.s) != len(self.mu):
            raise ValueError("s and mu must have the same length")
        return self

    @property
    def periods(self) -> int:
        return len(self.s)

    @classmethod
    def constant(cls, periods: int, s: float, mu: float) -> "ControlPath":
        return cls(s=np.full(periods, s), mu=np.full(periods, mu))


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    config_hash: str
    scenario: str
    solver_settings: dict[str, Any] = Field(default_factory=dict)


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: list[PeriodRecord]
    provenance: Provenance

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.model_dump(by_alias=True) for record in self.records])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(record, name) for record in self.records], dtype=float)

    @property
    def floor_activated(self) -> bool:
        return any(record.capital_floor_hit for record in self.records)

    @property
    def collapsed(self) -> bool:
        return any(
            record.capital_floor_hit or record.damage_saturated or record.consumption_penalized
            for record in self.records
        )


class ObjectiveEvaluation(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    penalized: bool = False
    collapsed: bool = False


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------


class SolverSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(
        default=1e-6,
        gt=0,
        description="Projected-gradient bound on welfare per unit discount weight (W divided by the weight sum)",
    )
    max_iterations: int = Field(default=3000, ge=1)
    starts: int = Field(default=5, ge=1, le=5)
    seed: int = Field(default=0, ge=0)
    fd_step: float = Field(default=1e-6, gt=0)
    terminal_freeze: int = Field(default=10, ge=0)
    collapse_streak: int = Field(default=3, ge=1)
    polish_rounds: int = Field(default=2, ge=0)


class StartOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: int
    label: str
    objective: float
    kkt_residual: float
    iterations: int
    collapsed: bool
    message: str


class SolveReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: SolveStatus
    objective: float
    iterations: int = Field(..., ge=0)
    kkt_residual: float
    trajectory: Optional[Trajectory] = None
    message: str = ""
    scenario: str
    controls: Optional[ControlPath] = None
    config: ModelConfig
    starts: list[StartOutcome] = Field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == SolveStatus.CONVERGED


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float
    status: SolveStatus
    objective: float
    peak_damage: Optional[float] = None
    peak_damage_temperature: Optional[float] = None
    peak_damage_year: Optional[int] = None
    peak_temperature: Optional[float] = None
    min_k_over_y: Optional[float] = None
    min_c_percap: Optional[float] = None
    recovery_year: Optional[int] = None
    message: str = ""


# ---------------------------------------------------------------------------
# Ramsey analysis
# ---------------------------------------------------------------------------


class RamseyParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=0)
    rho: float = Field(..., gt=0)
    delta: float = Field(..., gt=0, lt=1)
    gamma: float = Field(..., gt=0, lt=1)
    tfp: float = Field(default=1.0, gt=0)
    population_growth: float = Field(default=0.0, description="Experimental, 1/yr")
    tfp_growth: float = Field(default=0.0, description="Experimental, 1/yr")

    @classmethod
    def from_config(cls, config: ModelConfig, tfp: float = 1.0) -> "RamseyParams":
        return cls(alpha=config.alpha, rho=config.rho, delta=config.delta, gamma=config.gamma, tfp=tfp)

    @property
    def labour_augmenting_growth(self) -> float:
        return self.tfp_growth / (1.0 - self.gamma)

    @property
    def effective_depreciation(self) -> float:
        return self.delta + self.population_growth + self.labour_augmenting_growth


class SteadyState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k_star: float
    c_star: float
    eigenvalues: tuple[complex, complex]


class PhasePath(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    k: np.ndarray
    c: np.ndarray
    outcome: str = Field(..., description="'high', 'low' or 'open'")


class SaddlePath(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c0: float
    path: PhasePath
    converged: bool
    switch_time: Optional[float] = None
    bisection_steps: int = 0


class TransversalityReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    values: np.ndarray
    vanishing: bool
    exploding: bool


# ---------------------------------------------------------------------------
# Empirical damage data
# ---------------------------------------------------------------------------


class EstimatePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    study: str
    warming: float = Field(..., gt=0, description="degC above pre-industrial")
    impact_pct: float = Field(..., description="Percent of GDP, negative is a loss")
    method: EstimateMethod
    coverage: str


class QuadraticDamageFit(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: float
    rmse: float
    residuals: np.ndarray
    n: int


class StateRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: str
    temp_c: float
    gsp_bn: float = Field(..., gt=0)
    pop_mn: float = Field(..., gt=0)
    gsp_percap: float = Field(..., gt=0)
    dtemp: float
    dgsp_percap: float


class RegressionVariant(BaseModel):
    model_config = ConfigDict(frozen=True)

    weighting: Weighting = Weighting.UNWEIGHTED
    intercept: bool = False

    @property
    def label(self) -> str:
        origin = "intercept" if self.intercept else "origin"
        return f"{self.weighting.value}-{origin}"


class QuadraticFit(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    beta: float
    intercept: float = 0.0
    r_squared: float = Field(..., ge=0, le=1)
    residuals: np.ndarray
    variant: RegressionVariant
    national_mean: float


class DiceComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta_magnitude: float
    dice_a: float
    outcome: str = Field(..., description="'larger', 'smaller' or 'tie'")

    @property
    def claim_holds(self) -> bool:
        return self.outcome == "larger"


class RunManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    config_paths: list[str]
    output_dir: str
    solver_settings: dict[str, Any]
    tool_version: str
    config_hash: Optional[str] = None
    wall_clock_seconds: float
    files: list[str]
