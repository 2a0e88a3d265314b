"""
Export Service

Turns simulation, prediction and comparison results into CSV, JSON and the
plain-text listings printed by the command line.
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from loguru import logger

from models.prediction import PredictionRun
from models.simulation import SimulationRun
from models.trial import ComparisonTable, MetricComparison, TrialSummary

Number = Union[int, float]


def format_number(value: Number) -> str:
    """Shortest round-trip form; ints stay ints and floats drop binary noise past 9 decimals."""
    if isinstance(value, int):
        return str(value)
    return repr(round(value, 9))


def epoch_listing(epoch: int, length: Number, densities: Dict[str, float]) -> List[str]:
    lines = [f"Epoch {epoch}", f"Length: {format_number(length)}"]
    for glyph, density in densities.items():
        lines.append(f"Density of {glyph} symbols: {format_number(density)}")
    return lines


def simulation_frame(run: SimulationRun, glyphs: str) -> pd.DataFrame:
    rows = []
    for report in run.reports:
        row = {
            "epoch": report.epoch,
            "start_length": report.start_length,
            "steps": report.steps,
            "growth_per_step": report.growth_per_step,
        }
        for glyph in glyphs:
            row[f"density_{glyph}"] = report.densities.get(glyph, 0.0)
        rows.append(row)
    columns = ["epoch", "start_length", "steps", "growth_per_step"] + [f"density_{g}" for g in glyphs]
    return pd.DataFrame(rows, columns=columns)


def trace_frame(run: SimulationRun) -> pd.DataFrame:
    return pd.DataFrame(run.trace, columns=["step", "length"])


def summary_frame(summary: TrialSummary, glyphs: str) -> pd.DataFrame:
    rows = []
    for stats in summary.epochs:
        row = {
            "epoch": stats.epoch,
            "survivors": stats.survivors,
            "length_mean": stats.length_mean,
            "length_stderr": stats.length_stderr,
            "growth_mean": stats.growth_mean,
            "growth_stderr": stats.growth_stderr,
        }
        for glyph in glyphs:
            row[f"density_{glyph}"] = stats.density_means.get(glyph)
            row[f"density_{glyph}_stderr"] = stats.density_stderrs.get(glyph)
        rows.append(row)
    columns = ["epoch", "survivors", "length_mean", "length_stderr", "growth_mean", "growth_stderr"]
    for glyph in glyphs:
        columns += [f"density_{glyph}", f"density_{glyph}_stderr"]
    return pd.DataFrame(rows, columns=columns)


def prediction_frame(run: PredictionRun, glyphs: str) -> pd.DataFrame:
    rows = []
    for prediction in run.epochs:
        row = {
            "epoch": prediction.epoch,
            "expected_length": prediction.expected_length,
            "growth_per_step": prediction.expected_growth,
        }
        for glyph in glyphs:
            row[f"density_{glyph}"] = prediction.densities.get(glyph, 0.0)
        rows.append(row)
    columns = ["epoch", "expected_length", "growth_per_step"] + [f"density_{g}" for g in glyphs]
    return pd.DataFrame(rows, columns=columns)


def comparison_frame(table: ComparisonTable) -> pd.DataFrame:
    """One row per epoch and metric."""
    rows = []
    for row in table.rows:
        metrics: Dict[str, MetricComparison] = {
            f"density_{glyph}": metric for glyph, metric in row.densities.items()
        }
        metrics["growth_per_step"] = row.growth
        metrics["length"] = row.length
        for name, metric in metrics.items():
            rows.append({
                "epoch": row.epoch,
                "survivors": row.survivors,
                "metric": name,
                "predicted": metric.predicted,
                "measured": metric.measured,
                "error": metric.error,
                "stderr": metric.stderr,
            })
    columns = ["epoch", "survivors", "metric", "predicted", "measured", "error", "stderr"]
    return pd.DataFrame(rows, columns=columns)


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


class ExportService:
    """Service for rendering results in the supported output formats."""

    def simulation_text(self, run: SimulationRun) -> str:
        blocks = ["\n".join(epoch_listing(r.epoch, r.start_length, r.densities)) for r in run.reports]
        if run.halted:
            blocks.append(f"Halted after {run.total_steps} steps")
        return "\n\n".join(blocks) + "\n"

    def summary_text(self, summary: TrialSummary) -> str:
        """Mean epoch-start observables of a trial batch."""
        blocks = []
        for stats in summary.epochs:
            if not stats.survivors:
                blocks.append(f"Epoch {stats.epoch}\nSurvivors: 0")
                continue
            lines = epoch_listing(stats.epoch, stats.length_mean, stats.density_means)
            lines.append(f"Survivors: {stats.survivors}")
            blocks.append("\n".join(lines))
        if summary.halted_trials:
            blocks.append(f"Halted trials: {summary.halted_trials} of {summary.trials}")
        return "\n\n".join(blocks) + "\n"

    def prediction_text(self, run: PredictionRun, initial_length: Optional[Number] = None) -> str:
        """Listing of predicted epochs; epoch 0 echoes initial_length as given."""
        blocks = []
        for prediction in run.epochs:
            length: Number = prediction.expected_length
            if prediction.epoch == 0 and initial_length is not None:
                length = initial_length
            blocks.append("\n".join(epoch_listing(prediction.epoch, length, prediction.densities)))
        if run.terminated:
            blocks.append("Terminated: projected length fell below n")
        return "\n\n".join(blocks) + "\n"

    def comparison_text(self, table: ComparisonTable) -> str:
        """Predicted, Measured and Error rows per metric, one column per epoch."""
        epochs = [row.epoch for row in table.rows]
        sections = []
        for glyph in table.glyphs:
            sections.append((f"Density of {glyph} in queue", [row.densities[glyph] for row in table.rows], 3))
        sections.append(("Growth per step", [row.growth for row in table.rows], 3))
        sections.append(("Length of queue", [row.length for row in table.rows], 2))

        header = (
            f"{table.trials} trial(s), simulated length {table.initial_length}, "
            f"reference length {format_number(table.reference_length)}, "
            f"seed {table.master_seed}, {table.mode} mode"
        )
        parts = [header]
        for title, metrics, decimals in sections:
            frame = pd.DataFrame(
                {
                    epoch: [_fixed(metric.predicted, decimals), _fixed(metric.measured, decimals),
                            _fixed(metric.error, decimals)]
                    for epoch, metric in zip(epochs, metrics)
                },
                index=["Predicted", "Measured", "Error"],
            )
            parts.append(f"{title}\n{frame.to_string()}")
        return "\n\n".join(parts) + "\n"

    def to_json(self, result: Union[SimulationRun, PredictionRun, ComparisonTable, TrialSummary]) -> str:
        return json.dumps(result.model_dump(mode="json"), indent=2) + "\n"

    def write_text(self, text: str, path: Path) -> None:
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")

    def write_bytes(self, data: bytes, path: Path) -> None:
        path.write_bytes(data)
        logger.info(f"Wrote {len(data)} bytes to {path}")


def _fixed(value: Optional[float], decimals: int) -> str:
    return "-" if value is None else f"{value:.{decimals}f}"
