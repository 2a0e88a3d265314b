"""
Trial Models

Monte-Carlo trial configuration, averaged observables, and the
predicted-versus-measured comparison table.
"""

from typing import Dict, List, Optional
from pydantic import BaseModel, Field, model_validator

from models.rule_set import RuleSet


class TrialConfig(BaseModel):
    """Settings for a batch of seeded simulations."""

    rules: RuleSet
    initial_length: int = Field(ge=1, description="Simulated initial queue length")
    trials: int = Field(ge=1)
    epochs: int = Field(ge=1, description="Epoch rows compared (0 .. epochs-1)")
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    reference_length: float = Field(default=100.0, gt=0.0, description="Length units of the table")

    @model_validator(mode="after")
    def _check_length(self) -> "TrialConfig":
        if self.initial_length < self.rules.n:
            raise ValueError(
                f"initial length {self.initial_length} is shorter than n={self.rules.n}"
            )
        return self

    def length_scale(self) -> float:
        """Factor converting simulated lengths to reference units."""
        return self.reference_length / self.initial_length


class EpochStatistics(BaseModel):
    """Mean and standard error of one epoch's observables over surviving trials."""

    epoch: int = Field(ge=0)
    survivors: int = Field(ge=0)
    length_mean: Optional[float] = None
    length_stderr: Optional[float] = None
    growth_mean: Optional[float] = None
    growth_stderr: Optional[float] = None
    density_means: Dict[str, float] = Field(default_factory=dict)
    density_stderrs: Dict[str, float] = Field(default_factory=dict)


class TrialSummary(BaseModel):
    """Averaged per-epoch observables of a trial batch."""

    trials: int
    initial_length: int
    master_seed: int
    halted_trials: int = 0
    epochs: List[EpochStatistics] = Field(default_factory=list)


class MetricComparison(BaseModel):
    """Predicted, measured and absolute error for one metric in one epoch."""

    predicted: Optional[float] = None
    measured: Optional[float] = None
    stderr: Optional[float] = None
    error: Optional[float] = None

    @classmethod
    def build(cls, predicted: Optional[float], measured: Optional[float],
              stderr: Optional[float] = None) -> "MetricComparison":
        error = None
        if predicted is not None and measured is not None:
            error = abs(predicted - measured)
        return cls(predicted=predicted, measured=measured, stderr=stderr, error=error)


class ComparisonRow(BaseModel):
    """All compared metrics for one epoch."""

    epoch: int = Field(ge=0)
    survivors: int = Field(ge=0)
    densities: Dict[str, MetricComparison] = Field(default_factory=dict)
    growth: MetricComparison = Field(default_factory=MetricComparison)
    length: MetricComparison = Field(default_factory=MetricComparison)


class ComparisonTable(BaseModel):
    """Predicted-versus-measured table, lengths in reference units."""

    glyphs: str
    reference_length: float
    initial_length: int
    trials: int
    master_seed: int
    mode: str
    rows: List[ComparisonRow] = Field(default_factory=list)

    def max_density_error(self) -> float:
        errors = [
            metric.error for row in self.rows for metric in row.densities.values()
            if metric.error is not None
        ]
        return max(errors, default=0.0)

    def max_length_error(self) -> float:
        return max((row.length.error for row in self.rows if row.length.error is not None),
                   default=0.0)
