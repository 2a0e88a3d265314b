"""
Simulation Models

Per-epoch observables and the record of a simulated run.
"""

from typing import Dict, List, Tuple
from pydantic import BaseModel, Field


class EpochReport(BaseModel):
    """Observables of one simulated epoch, measured at the epoch start."""

    epoch: int = Field(ge=0)
    start_length: int = Field(ge=0, description="Queue length at the epoch start")
    steps: int = Field(ge=0, description="Steps taken during the epoch")
    growth_per_step: float = Field(description="(next start length - start length) / steps")
    densities: Dict[str, float] = Field(default_factory=dict)
    complete: bool = Field(default=True, description="False when the run halted mid-epoch")


class Snapshot(BaseModel):
    """Queue contents at one sampled step."""

    step: int = Field(ge=0)
    epoch: int = Field(ge=0)
    queue: str = Field(description="Queue contents as glyphs, front first")


class SimulationRun(BaseModel):
    """Everything recorded while running a tag system epoch by epoch."""

    reports: List[EpochReport] = Field(default_factory=list)
    halted: bool = False
    total_steps: int = 0
    trace: List[Tuple[int, int]] = Field(default_factory=list, description="(step, length) samples")
    snapshots: List[Snapshot] = Field(default_factory=list)

    def start_lengths(self) -> List[int]:
        return [report.start_length for report in self.reports]

    def density_series(self, glyph: str) -> List[float]:
        return [report.densities.get(glyph, 0.0) for report in self.reports]
