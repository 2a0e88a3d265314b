"""
Prediction Models

Per-epoch analytical predictions and the options that shape them.
"""

from enum import Enum
from typing import Dict, List, Optional
from pydantic import BaseModel, Field

from models.distribution import ProductionDistribution, TupleDistribution


class EmptyProductionMode(str, Enum):
    """How an empty production affects the symbol that follows a production.

    GEOMETRIC skips empty productions (factor 1 / (1 - P(ε))) and matches a
    sampled concatenation. DISCARD drops their mass and renormalizes the
    tuple distribution afterwards, which reproduces the seven-epoch reference tables.
    """
    GEOMETRIC = "geometric"
    DISCARD = "discard"


class EpochPrediction(BaseModel):
    """Predicted large-scale properties of one epoch."""

    epoch: int = Field(ge=0)
    tuple_dist: TupleDistribution
    prod_dist: ProductionDistribution
    expected_growth: float = Field(description="E[|r_j|] - n, symbols per step")
    densities: Dict[str, float] = Field(default_factory=dict, description="At the epoch start")
    expected_length: float = Field(ge=0.0, description="Queue length at the epoch start")

    def expected_steps(self, n: int) -> float:
        return self.expected_length / n


class PredictionRun(BaseModel):
    """Chained epoch predictions for one rule set."""

    epochs: List[EpochPrediction] = Field(default_factory=list)
    terminated: bool = Field(default=False, description="Projected length fell below n")
    mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC
    growth_decimals: Optional[int] = None

    def lengths(self) -> List[float]:
        return [prediction.expected_length for prediction in self.epochs]

    def growths(self) -> List[float]:
        return [prediction.expected_growth for prediction in self.epochs]

    def density_series(self, glyph: str) -> List[float]:
        return [prediction.densities.get(glyph, 0.0) for prediction in self.epochs]
