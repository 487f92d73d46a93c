"""
Configuration and results of the Monte Carlo experiments run by the services.
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field

from ..core import config
from .field import FieldTag


class TrialMode(str, Enum):
    """Random basis against a fixed region, or the standard basis against a randomly rotated region."""
    RANDOM_BASIS_FIXED_REGION = "random-basis"
    FIXED_BASIS_RANDOM_ROTATION = "random-rotation"


class TrialConfig(BaseModel):
    """Monte Carlo uniformity experiment"""
    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=1)
    field: FieldTag = FieldTag.REAL
    delta: float = Field(gt=0)
    epsilon: float = Field(gt=0)
    n_trials: int = Field(ge=1)
    mode: TrialMode = TrialMode.RANDOM_BASIS_FIXED_REGION
    seed: int = Field(ge=0, lt=2**64)
    threads: int = Field(default_factory=lambda: config.THREADS, ge=1)

    def hypothesis_holds(self, factor: float = 1.0) -> bool:
        """d >= 4 and d >= factor / (delta^2 epsilon); factor is 2 for test functions and m for partitions."""
        return self.dim >= 4 and self.dim * self.delta ** 2 * self.epsilon >= factor * (1 - 1e-12)

    @computed_field
    @property
    def hypothesis_met(self) -> bool:
        return self.hypothesis_holds()


class CellStats(BaseModel):
    """Per-cell outcome of a partition trial"""
    index: int
    region: str
    measure: float
    failure_count: int
    failure_rate: float
    mean_fraction: float
    mean_fraction_stderr: float


class TrialReport(BaseModel):
    """Aggregated outcome of a uniformity trial; `measure` holds E_u(phi) for test-function trials"""
    dim: int
    field: FieldTag
    mode: TrialMode
    region: str
    measure: float
    delta: float
    epsilon: float
    failure_count: int
    n_trials: int
    failure_rate: float
    wilson_95_interval: Tuple[float, float]
    chebyshev_bound: float
    hypothesis_met: bool
    mean_statistic: float
    mean_statistic_stderr: float
    threshold: float
    cells: List[CellStats] = Field(default_factory=list)
    union_bound: Optional[float] = None

    @property
    def within_epsilon(self) -> bool:
        return self.wilson_95_interval[1] <= self.epsilon

    @property
    def within_chebyshev(self) -> bool:
        return self.failure_rate <= self.chebyshev_bound


class ModeComparison(BaseModel):
    random_basis: TrialReport
    random_rotation: TrialReport
    agree: bool

    @property
    def rate_difference(self) -> float:
        return abs(self.random_basis.failure_rate - self.random_rotation.failure_rate)

    @property
    def agreement_band(self) -> float:
        """Sigma band of the pooled two-proportion difference."""
        first, second = self.random_basis, self.random_rotation
        pooled = (first.failure_count + second.failure_count) / (first.n_trials + second.n_trials)
        variance = pooled * (1 - pooled) * (1 / first.n_trials + 1 / second.n_trials)
        return config.SIGMA_BAND * variance ** 0.5


class CovarianceReport(BaseModel):
    """Cov(phi(b_i), phi(b_j)) over Haar bases against Var_u(phi)/(d-1)"""
    dim: int
    field: FieldTag
    n_bases: int
    columns: Tuple[int, int] = (0, 1)
    exact_variance: float
    covariance: float
    std_error: float
    bound: float
    sharpness_ratio: Optional[float] = None
    degenerate: bool = False
    marginal_variance: float
    marginal_variance_stderr: float
    exact_covariance: Optional[float] = None

    def bound_holds(self, sigma: Optional[float] = None) -> bool:
        band = config.SIGMA_BAND if sigma is None else sigma
        return abs(self.covariance) <= self.bound + band * self.std_error + 1e-15
