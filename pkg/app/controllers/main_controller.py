"""
Main Controller

Coordinates the command line and the services: loads rule sets, runs
simulations, predictions and comparisons, and formats their results.
"""

from pathlib import Path
from typing import Optional

from loguru import logger

from models.prediction import EmptyProductionMode
from models.rule_set import RuleSet
from models.trial import TrialConfig
from services.catalog_service import CatalogService
from services.config_service import ConfigService
from services.export_service import (
    ExportService, comparison_frame, frame_to_csv, prediction_frame, simulation_frame,
    summary_frame, trace_frame,
)
from services.harness_service import HarnessService
from services.predictor_service import PredictorService
from services.render_service import RenderService
from services.rule_file_service import RuleFileService
from services.simulator_service import SimulatorService, trial_seed

FORMATS = ("text", "csv", "json")


class TagController:
    """Application controller shared by every subcommand."""

    def __init__(self, config_service: Optional[ConfigService] = None):
        self.config_service = config_service or ConfigService()
        self.catalog_service = CatalogService()
        self.rule_file_service = RuleFileService(self.catalog_service)
        self.simulator_service = SimulatorService(self.config_service)
        self.predictor_service = PredictorService(self.config_service)
        self.harness_service = HarnessService(
            self.config_service, self.simulator_service, self.predictor_service
        )
        self.export_service = ExportService()
        self.render_service = RenderService()
        logger.info("TagController initialized")

    def load_rules(self, source: str) -> RuleSet:
        return self.rule_file_service.load_rules(source)

    def simulate(self, rules: RuleSet, length: int, epochs: int, seed: int, trials: int = 1,
                 stride: int = 1, output_format: str = "text", trace_path: Optional[Path] = None) -> str:
        """Simulate one trial, or average several, and format the per-epoch reports."""
        glyphs = rules.alphabet.glyphs
        if trials > 1:
            cfg = TrialConfig(rules=rules, initial_length=length, trials=trials,
                              epochs=max(epochs, 1), master_seed=seed, reference_length=length)
            summary = self.harness_service.run_trials(cfg)
            if output_format == "csv":
                return frame_to_csv(summary_frame(summary, glyphs))
            if output_format == "json":
                return self.export_service.to_json(summary)
            return self.export_service.summary_text(summary)

        run = self.simulator_service.simulate(
            rules, length, trial_seed(seed, 0), epochs,
            stride=stride if trace_path is not None else None,
        )
        if trace_path is not None:
            self.export_service.write_text(frame_to_csv(trace_frame(run)), trace_path)

        if output_format == "csv":
            return frame_to_csv(simulation_frame(run, glyphs))
        if output_format == "json":
            return self.export_service.to_json(run)
        return self.export_service.simulation_text(run)

    def predict(self, rules: RuleSet, length: int, epochs: int,
                mode: Optional[EmptyProductionMode] = None, growth_decimals: Optional[int] = None,
                output_format: str = "text") -> str:
        run = self.predictor_service.predict(rules, length, epochs, mode=mode,
                                             growth_decimals=growth_decimals)
        if output_format == "csv":
            return frame_to_csv(prediction_frame(run, rules.alphabet.glyphs))
        if output_format == "json":
            return self.export_service.to_json(run)
        return self.export_service.prediction_text(run, initial_length=length)

    def compare(self, rules: RuleSet, length: int, epochs: int, trials: int, seed: int,
                reference_length: Optional[float] = None, mode: Optional[EmptyProductionMode] = None,
                growth_decimals: Optional[int] = None, output_format: str = "text") -> str:
        cfg = TrialConfig(
            rules=rules,
            initial_length=length,
            trials=trials,
            epochs=max(epochs, 1),
            master_seed=seed,
            reference_length=reference_length or self.config_service.get_reference_length(),
        )
        table = self.harness_service.compare(cfg, mode=mode, growth_decimals=growth_decimals)
        if output_format == "csv":
            return frame_to_csv(comparison_frame(table))
        if output_format == "json":
            return self.export_service.to_json(table)
        return self.export_service.comparison_text(table)

    def render(self, rules: RuleSet, length: int, epochs: int, seed: int, stride: int = 1,
               epoch_markers: bool = False) -> bytes:
        run = self.simulator_service.simulate(
            rules, length, trial_seed(seed, 0), epochs, stride=stride, snapshots=True
        )
        return self.render_service.render(run.snapshots, rules.alphabet.glyphs,
                                          epoch_markers=epoch_markers)

    def catalog(self, name: Optional[str] = None) -> str:
        if name is None:
            return "\n".join(self.catalog_service.list_rule_sets()) + "\n"
        return self.catalog_service.rule_text(name)
