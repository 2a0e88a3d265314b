"""
Distribution Models

Probability masses over words: n-tuples on the queue, productions generated
during an epoch, and length-weighted production selections.
"""

import math
from typing import Dict, List, Tuple, TypeVar
from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.exceptions import ForeignTupleError, ZeroMassError
from models.rule_set import Alphabet

UNIT_SUM_TOLERANCE = 1e-9


class Distribution(BaseModel):
    """Probability mass over words (glyph strings; '' is the empty word)."""

    model_config = ConfigDict(frozen=True)

    mass: Dict[str, float] = Field(default_factory=dict)

    @field_validator("mass")
    @classmethod
    def _check_mass(cls, value: Dict[str, float]) -> Dict[str, float]:
        for word, probability in value.items():
            if not math.isfinite(probability) or probability < 0.0:
                raise ValueError(f"mass of {word!r} must be a finite non-negative number")
        return value

    def get(self, word: str) -> float:
        return self.mass.get(word, 0.0)

    def total(self) -> float:
        return math.fsum(self.mass.values())

    def is_normalized(self, tolerance: float = UNIT_SUM_TOLERANCE) -> bool:
        return abs(self.total() - 1.0) <= tolerance

    def support(self) -> List[str]:
        """Words with positive mass."""
        return [word for word, probability in self.mass.items() if probability > 0.0]

    def items(self) -> List[Tuple[str, float]]:
        return list(self.mass.items())


class TupleDistribution(Distribution):
    """P(q_i = t): probability of each length-n window at a uniformly random position."""


class ProductionDistribution(Distribution):
    """P(r_j = s): probability that a production instance equals s."""

    def empty_mass(self) -> float:
        return self.get("")


class SelectionDistribution(Distribution):
    """P(i ◁ s): probability that a random queue position lies in an instance of s."""


D = TypeVar("D", bound=Distribution)


def normalize(distribution: D) -> D:
    """Scale masses to unit sum, keeping their proportions.

    Raises:
        ZeroMassError: if every mass is zero.
    """
    total = distribution.total()
    if total <= 0.0:
        raise ZeroMassError()
    return type(distribution)(
        mass={word: probability / total for word, probability in distribution.mass.items()}
    )


def uniform_tuple_distribution(alphabet: Alphabet, n: int) -> TupleDistribution:
    """Every length-n word equally likely; models a random initial queue."""
    words = alphabet.words(n)
    return TupleDistribution(mass={word: 1.0 / len(words) for word in words})


def check_tuple_support(distribution: TupleDistribution, alphabet: Alphabet, n: int) -> None:
    """Raises ForeignTupleError for any key outside Σⁿ."""
    for word in distribution.mass:
        if len(word) != n or not all(glyph in alphabet for glyph in word):
            raise ForeignTupleError(word, n, alphabet.glyphs)


def marginal_densities(distribution: TupleDistribution, alphabet: Alphabet) -> Dict[str, float]:
    """Symbol densities read off the first position of each window."""
    densities = {glyph: 0.0 for glyph in alphabet.glyphs}
    for word, probability in distribution.mass.items():
        if word:
            densities[word[0]] += probability
    total = math.fsum(densities.values())
    if total <= 0.0:
        raise ZeroMassError()
    return {glyph: value / total for glyph, value in densities.items()}


def max_abs_difference(first: Distribution, second: Distribution) -> float:
    """L-infinity distance; a word missing from one side counts as mass 0."""
    words = set(first.mass) | set(second.mass)
    return max((abs(first.get(word) - second.get(word)) for word in words), default=0.0)
