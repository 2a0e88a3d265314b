"""
Predictor Service

Predicts per-epoch growth, symbol densities and queue length of a tag system
from its rules alone. Each epoch maps the distribution of n-tuples on the
queue to the distribution of productions generated during the epoch, and
that in turn to the tuple distribution of the next epoch, assuming window
statistics are the same everywhere along the queue.
"""

import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Dict, Optional, Sequence

from loguru import logger

from models.distribution import (
    ProductionDistribution, SelectionDistribution, TupleDistribution,
    check_tuple_support, marginal_densities, normalize, uniform_tuple_distribution,
)
from models.exceptions import AllEmptyError, BeyondHorizonError
from models.prediction import EmptyProductionMode, EpochPrediction, PredictionRun
from models.rule_set import Alphabet, RuleSet, validate_rules
from services.config_service import ConfigService


def production_distribution(tuple_dist: TupleDistribution, rules: RuleSet) -> ProductionDistribution:
    """P(r_j = s): tuple masses summed over tuples sharing the same production."""
    mass: Dict[str, float] = {}
    for word in rules.words():
        probability = tuple_dist.get(word)
        if probability > 0.0:
            production = rules.production(word)
            mass[production] = mass.get(production, 0.0) + probability
    return ProductionDistribution(mass=mass)


def expected_production_length(prod_dist: ProductionDistribution) -> float:
    return math.fsum(probability * len(word) for word, probability in prod_dist.items())


def expected_growth(prod_dist: ProductionDistribution, n: int) -> float:
    """Expected queue length change per step."""
    return expected_production_length(prod_dist) - n


def selection_distribution(prod_dist: ProductionDistribution) -> SelectionDistribution:
    """Probability that a uniformly random queue position lies in an instance of s.

    Raises:
        AllEmptyError: if the expected production length is zero.
    """
    mean_length = expected_production_length(prod_dist)
    if mean_length <= 0.0:
        raise AllEmptyError()
    return SelectionDistribution(mass={
        word: probability * len(word) / mean_length for word, probability in prod_dist.items()
    })


def symbol_densities(prod_dist: ProductionDistribution, alphabet: Alphabet) -> Dict[str, float]:
    """Share of each glyph among the symbols produced during an epoch.

    Raises:
        AllEmptyError: if the expected production length is zero.
    """
    mean_length = expected_production_length(prod_dist)
    if mean_length <= 0.0:
        raise AllEmptyError()
    return {
        glyph: math.fsum(probability * word.count(glyph) for word, probability in prod_dist.items())
        / mean_length
        for glyph in alphabet.glyphs
    }


def project_length(current_length: float, growth_per_step: float, n: int) -> float:
    """Length at the next epoch start; an epoch lasts current_length / n steps."""
    return max(current_length * (1.0 + growth_per_step / n), 0.0)


def round_half_up(value: float, decimals: int) -> float:
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


class PrefixTable:
    """Memoized probability that a fresh concatenation of productions starts with a word.

    In GEOMETRIC mode empty productions are skipped, which divides every
    non-empty term by 1 - P(ε). DISCARD mode leaves their mass out.
    """

    def __init__(self, prod_dist: ProductionDistribution,
                 mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC):
        empty = prod_dist.empty_mass()
        if empty >= 1.0 or not any(word for word in prod_dist.support()):
            raise AllEmptyError("Every production is empty; no symbol can follow")
        self.mode = EmptyProductionMode(mode)
        self._productions = [(word, p) for word, p in prod_dist.items() if word and p > 0.0]
        self._scale = 1.0 - empty if self.mode == EmptyProductionMode.GEOMETRIC else 1.0
        self._cache: Dict[str, float] = {"": 1.0}

    def probability(self, prefix: str) -> float:
        if prefix in self._cache:
            return self._cache[prefix]

        total = 0.0
        for word, probability in self._productions:
            if len(prefix) <= len(word):
                if word.startswith(prefix):
                    total += probability
            elif prefix.startswith(word):
                # |word| >= 1, so the remaining prefix strictly shrinks
                total += probability * self.probability(prefix[len(word):])

        result = total / self._scale
        self._cache[prefix] = result
        return result

    def window_matches(self, production: str, offset: int, window: str) -> float:
        """Probability that the window starting at offset in production equals window."""
        available = len(production) - offset
        if available >= len(window):
            return 1.0 if production[offset:offset + len(window)] == window else 0.0
        if window[:available] != production[offset:]:
            return 0.0
        return self.probability(window[available:])


def prefix_probability(t: str, prod_dist: ProductionDistribution,
                       mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC) -> float:
    """Probability that r_j r_{j+1} ... begins with t.

    Raises:
        AllEmptyError: if P(ε) = 1.
    """
    return PrefixTable(prod_dist, mode).probability(t)


def conditional_tuple_probability(window: str, production: str, prod_dist: ProductionDistribution,
                                  mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC) -> float:
    """P(window at position i | i lies in an instance of production)."""
    if not production:
        raise ValueError("the empty production holds no queue positions")
    table = PrefixTable(prod_dist, mode)
    return math.fsum(
        table.window_matches(production, offset, window) for offset in range(len(production))
    ) / len(production)


def next_tuple_distribution(prod_dist: ProductionDistribution, rules: RuleSet,
                            mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC) -> TupleDistribution:
    """Tuple distribution at the start of the next epoch.

    Raises:
        AllEmptyError: if no production has positive length.
    """
    if expected_production_length(prod_dist) <= 0.0:
        raise AllEmptyError()
    table = PrefixTable(prod_dist, mode)

    # P(i ◁ s) / |s| is proportional to P(r_j = s); the common factor goes with the normalization
    mass: Dict[str, float] = {}
    for window in rules.words():
        total = 0.0
        for production, probability in prod_dist.items():
            for offset in range(len(production)):
                match = table.window_matches(production, offset, window)
                if match:
                    total += probability * match
        mass[window] = total
    return normalize(TupleDistribution(mass=mass))


def predict_epochs(initial_tuple_dist: TupleDistribution, rules: RuleSet, initial_length: float,
                   epochs: int, mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC,
                   growth_decimals: Optional[int] = None) -> PredictionRun:
    """Chain epoch predictions from an initial tuple distribution.

    Epoch 0 is always predicted. The chain stops early, with terminated set,
    when a projected start length falls below n. growth_decimals rounds the
    growth used for projection only.

    Raises:
        ForeignTupleError: if the initial distribution has a key outside Σⁿ.
        AllEmptyError: propagated from the distribution updates.
    """
    validate_rules(rules)
    check_tuple_support(initial_tuple_dist, rules.alphabet, rules.n)
    mode = EmptyProductionMode(mode)
    run = PredictionRun(mode=mode, growth_decimals=growth_decimals)

    length = float(initial_length)
    if length < rules.n:
        run.terminated = True
        return run

    tuple_dist = normalize(initial_tuple_dist)
    densities = marginal_densities(tuple_dist, rules.alphabet)
    horizon = max(epochs, 1)

    for epoch in range(horizon):
        prod_dist = production_distribution(tuple_dist, rules)
        growth = expected_growth(prod_dist, rules.n)
        run.epochs.append(EpochPrediction(
            epoch=epoch,
            tuple_dist=tuple_dist,
            prod_dist=prod_dist,
            expected_growth=growth,
            densities=densities,
            expected_length=length,
        ))
        if epoch == horizon - 1:
            break

        projected_growth = growth if growth_decimals is None else round_half_up(growth, growth_decimals)
        next_length = project_length(length, projected_growth, rules.n)
        if next_length < rules.n:
            logger.warning(f"Projected length {next_length:.4f} after epoch {epoch} is below n={rules.n}")
            run.terminated = True
            break

        densities = symbol_densities(prod_dist, rules.alphabet)
        tuple_dist = next_tuple_distribution(prod_dist, rules, mode)
        length = next_length

    return run


def predict_length_at_step(predictions: Sequence[EpochPrediction], step: float, n: int,
                           growth_decimals: Optional[int] = None) -> float:
    """Expected queue length after a number of steps.

    Epoch k lasts expected_length_k / n steps; the length is interpolated
    linearly between consecutive epoch-start lengths.

    Raises:
        BeyondHorizonError: if the step lies past the last predicted epoch.
    """
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    if not predictions:
        raise BeyondHorizonError(step, 0.0)

    elapsed = 0.0
    for index, prediction in enumerate(predictions):
        start = prediction.expected_length
        duration = prediction.expected_steps(n)
        if index + 1 < len(predictions):
            end = predictions[index + 1].expected_length
        else:
            growth = prediction.expected_growth
            if growth_decimals is not None:
                growth = round_half_up(growth, growth_decimals)
            end = project_length(start, growth, n)

        if step <= elapsed + duration:
            if duration == 0.0:
                return start
            return start + (end - start) * (step - elapsed) / duration
        elapsed += duration

    raise BeyondHorizonError(step, elapsed)


class PredictorService:
    """Service for analytical epoch predictions."""

    def __init__(self, config_service: ConfigService):
        self.config_service = config_service
        logger.info("PredictorService initialized")

    def predict(self, rules: RuleSet, initial_length: float, epochs: int,
                mode: Optional[EmptyProductionMode] = None, growth_decimals: Optional[int] = None,
                initial_tuple_dist: Optional[TupleDistribution] = None) -> PredictionRun:
        """Predict epochs from a random (uniform) or given initial queue."""
        if mode is None:
            mode = self.config_service.get_empty_production_mode()
        if growth_decimals is None:
            growth_decimals = self.config_service.get_growth_decimals()
        if initial_tuple_dist is None:
            initial_tuple_dist = uniform_tuple_distribution(rules.alphabet, rules.n)
        elif not initial_tuple_dist.is_normalized(self.config_service.get_tolerance()):
            logger.warning(f"Initial tuple distribution sums to {initial_tuple_dist.total()}; normalizing")

        run = predict_epochs(initial_tuple_dist, rules, initial_length, epochs,
                             mode=mode, growth_decimals=growth_decimals)
        logger.info(
            f"Predicted {len(run.epochs)} epoch(s) in {run.mode.value} mode"
            + (" (terminated)" if run.terminated else "")
        )
        return run

    def length_at_step(self, run: PredictionRun, rules: RuleSet, step: float) -> float:
        return predict_length_at_step(run.epochs, step, rules.n, run.growth_decimals)
