"""
Harness Service

Monte-Carlo validation of the predictor: seeded trial batches, per-epoch
averages with standard errors, predicted-versus-measured tables, and a
sampling oracle for the tuple-distribution update.
"""

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from models.distribution import ProductionDistribution, TupleDistribution, uniform_tuple_distribution
from models.exceptions import AllEmptyError
from models.prediction import EmptyProductionMode
from models.rule_set import Alphabet
from models.simulation import SimulationRun
from models.trial import (
    ComparisonRow, ComparisonTable, EpochStatistics, MetricComparison, TrialConfig, TrialSummary
)
from services.config_service import ConfigService
from services.predictor_service import PredictorService
from services.simulator_service import (
    Seed, SimulatorService, TagSimulator, measure_tuple_distribution, random_queue, trial_seed
)

MIN_ORACLE_SYMBOLS = 100_000


def simulate_trial(simulator: TagSimulator, cfg: TrialConfig, trial: int) -> SimulationRun:
    """Run trial k of a batch; module level so worker processes can unpickle it."""
    initial = random_queue(cfg.initial_length, cfg.rules.alphabet.size, trial_seed(cfg.master_seed, trial))
    return simulator.run_epochs(initial, cfg.epochs)


def mean_and_stderr(values: List[float]) -> Tuple[Optional[float], Optional[float]]:
    """Sample mean and its standard error; the error is 0 for a single value."""
    samples = np.asarray(values, dtype=np.float64)
    if samples.size == 0:
        return None, None
    if samples.size == 1:
        return float(samples[0]), 0.0
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(samples.size))


def summarize_runs(runs: List[SimulationRun], cfg: TrialConfig) -> TrialSummary:
    """Average per-epoch observables over the trials that reached each epoch."""
    scale = cfg.length_scale()
    glyphs = cfg.rules.alphabet.glyphs
    summary = TrialSummary(
        trials=cfg.trials,
        initial_length=cfg.initial_length,
        master_seed=cfg.master_seed,
        halted_trials=sum(1 for run in runs if run.halted),
    )

    for epoch in range(cfg.epochs):
        reports = [run.reports[epoch] for run in runs if len(run.reports) > epoch]
        stats = EpochStatistics(epoch=epoch, survivors=len(reports))
        if reports:
            stats.length_mean, stats.length_stderr = mean_and_stderr(
                [report.start_length * scale for report in reports]
            )
            stats.growth_mean, stats.growth_stderr = mean_and_stderr(
                [report.growth_per_step for report in reports]
            )
            for glyph in glyphs:
                mean, stderr = mean_and_stderr([report.densities.get(glyph, 0.0) for report in reports])
                stats.density_means[glyph] = mean
                stats.density_stderrs[glyph] = stderr
        summary.epochs.append(stats)

    return summary


def oracle_tuple_distribution(prod_dist: ProductionDistribution, alphabet: Alphabet, n: int,
                              symbols: int, seed: Seed) -> TupleDistribution:
    """Window frequencies of a sampled concatenation of i.i.d. productions.

    Raises:
        AllEmptyError: if every production is empty.
    """
    if symbols < n:
        raise ValueError(f"need at least {n} symbols, got {symbols}")
    if symbols < MIN_ORACLE_SYMBOLS:
        logger.warning(f"Oracle with only {symbols} symbols; expect sampling error above 0.005")

    words = [word for word, probability in prod_dist.items() if probability > 0.0]
    weights = np.array([prod_dist.get(word) for word in words], dtype=np.float64)
    lengths = np.array([len(word) for word in words], dtype=np.int64)
    mean_length = float(np.dot(weights, lengths) / weights.sum()) if words else 0.0
    if mean_length <= 0.0:
        raise AllEmptyError()
    weights /= weights.sum()

    flat = np.array([symbol for word in words for symbol in alphabet.encode(word)], dtype=np.int64)
    offsets = np.cumsum(lengths) - lengths

    rng = np.random.default_rng(seed)
    chunks: List[np.ndarray] = []
    produced = 0
    while produced < symbols:
        draws = rng.choice(len(words), size=int((symbols - produced) / mean_length * 1.1) + 16, p=weights)
        draw_lengths = lengths[draws]
        total = int(draw_lengths.sum())
        if total == 0:
            continue
        out_starts = np.cumsum(draw_lengths) - draw_lengths
        index = (np.arange(total) - np.repeat(out_starts, draw_lengths)
                 + np.repeat(offsets[draws], draw_lengths))
        chunks.append(flat[index])
        produced += total

    concatenation = np.concatenate(chunks)[:max(symbols, n)]
    return measure_tuple_distribution(concatenation, n, alphabet)


class HarnessService:
    """Service for seeded trial batches and prediction comparisons."""

    def __init__(self, config_service: ConfigService, simulator_service: SimulatorService,
                 predictor_service: PredictorService):
        self.config_service = config_service
        self.simulator_service = simulator_service
        self.predictor_service = predictor_service

    def run_trials(self, cfg: TrialConfig, threads: Optional[int] = None) -> TrialSummary:
        """Run cfg.trials seeded simulations and average them epoch by epoch.

        Trial k is seeded from (master_seed, k) only, so the summary does not
        depend on the number of worker processes.
        """
        workers = min(threads or self.config_service.get_thread_count(), cfg.trials)
        simulator = self.simulator_service.get_simulator(cfg.rules)
        logger.info(
            f"Running {cfg.trials} trial(s) of length {cfg.initial_length} over {cfg.epochs} "
            f"epoch(s) with {workers} worker process(es)"
        )

        runs: Dict[int, SimulationRun] = {}
        if workers <= 1:
            for trial in range(cfg.trials):
                runs[trial] = simulate_trial(simulator, cfg, trial)
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                future_to_trial = {
                    executor.submit(simulate_trial, simulator, cfg, trial): trial
                    for trial in range(cfg.trials)
                }
                for future in as_completed(future_to_trial):
                    trial = future_to_trial[future]
                    try:
                        runs[trial] = future.result()
                    except Exception as e:
                        logger.error(f"Trial {trial} failed: {e}")
                        raise

        summary = summarize_runs([runs[trial] for trial in range(cfg.trials)], cfg)
        if summary.halted_trials:
            logger.warning(f"{summary.halted_trials} of {cfg.trials} trial(s) halted")
        return summary

    def compare(self, cfg: TrialConfig, initial_tuple_dist: Optional[TupleDistribution] = None,
                mode: Optional[EmptyProductionMode] = None,
                growth_decimals: Optional[int] = None) -> ComparisonTable:
        """Join predictions (reference units) with rescaled trial averages."""
        rules = cfg.rules
        if initial_tuple_dist is None:
            initial_tuple_dist = uniform_tuple_distribution(rules.alphabet, rules.n)

        prediction = self.predictor_service.predict(
            rules, cfg.reference_length, cfg.epochs, mode=mode,
            growth_decimals=growth_decimals, initial_tuple_dist=initial_tuple_dist,
        )
        summary = self.run_trials(cfg)

        table = ComparisonTable(
            glyphs=rules.alphabet.glyphs,
            reference_length=cfg.reference_length,
            initial_length=cfg.initial_length,
            trials=cfg.trials,
            master_seed=cfg.master_seed,
            mode=prediction.mode.value,
        )
        for stats in summary.epochs:
            predicted = prediction.epochs[stats.epoch] if stats.epoch < len(prediction.epochs) else None
            row = ComparisonRow(epoch=stats.epoch, survivors=stats.survivors)
            for glyph in rules.alphabet.glyphs:
                row.densities[glyph] = MetricComparison.build(
                    predicted.densities.get(glyph) if predicted else None,
                    stats.density_means.get(glyph),
                    stats.density_stderrs.get(glyph),
                )
            row.growth = MetricComparison.build(
                predicted.expected_growth if predicted else None,
                stats.growth_mean, stats.growth_stderr,
            )
            row.length = MetricComparison.build(
                predicted.expected_length if predicted else None,
                stats.length_mean, stats.length_stderr,
            )
            table.rows.append(row)

        logger.info(
            f"Comparison done: max density error {table.max_density_error():.4f}, "
            f"max length error {table.max_length_error():.4f}"
        )
        return table

    def oracle(self, prod_dist: ProductionDistribution, alphabet: Alphabet, n: int,
               seed: Seed = 0, symbols: Optional[int] = None) -> TupleDistribution:
        return oracle_tuple_distribution(
            prod_dist, alphabet, n, symbols or self.config_service.get_oracle_symbols(), seed
        )
