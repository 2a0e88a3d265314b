"""
Rule Set Model

Alphabet and production-rule models for n-tag systems, plus rule validation.
"""

from itertools import product
from typing import Dict, List, Tuple, Sequence
from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.exceptions import (
    AllEmptyRulesError, ForeignSymbolError, InconsistentLHSLengthError, MissingRuleError
)


class Alphabet(BaseModel):
    """Sorted set of single-letter glyphs; a glyph's position is its symbol id."""

    model_config = ConfigDict(frozen=True)

    glyphs: str = Field(description="Glyphs in id order, e.g. 'ab'")

    @field_validator("glyphs")
    @classmethod
    def _check_glyphs(cls, value: str) -> str:
        if not value:
            raise ValueError("alphabet must contain at least one glyph")
        for glyph in value:
            if not (glyph.isascii() and glyph.isalpha()):
                raise ValueError(f"glyph {glyph!r} is not an ASCII letter")
        if len(set(value)) != len(value):
            raise ValueError(f"alphabet {value!r} repeats a glyph")
        return "".join(sorted(value))

    @property
    def size(self) -> int:
        return len(self.glyphs)

    def __contains__(self, glyph: str) -> bool:
        return len(glyph) == 1 and glyph in self.glyphs

    def id_of(self, glyph: str) -> int:
        """Get the symbol id of a glyph."""
        index = self.glyphs.find(glyph)
        if len(glyph) != 1 or index < 0:
            raise ValueError(f"'{glyph}' is not in alphabet '{self.glyphs}'")
        return index

    def glyph_of(self, symbol: int) -> str:
        """Get the glyph of a symbol id."""
        if not 0 <= symbol < self.size:
            raise ValueError(f"symbol id {symbol} outside alphabet of size {self.size}")
        return self.glyphs[symbol]

    def encode(self, word: str) -> Tuple[int, ...]:
        """Convert a glyph word into symbol ids."""
        return tuple(self.id_of(glyph) for glyph in word)

    def decode(self, symbols: Sequence[int]) -> str:
        """Convert symbol ids into a glyph word."""
        return "".join(self.glyphs[int(symbol)] for symbol in symbols)

    def words(self, length: int) -> List[str]:
        """All words of the given length, in id (lexicographic) order."""
        return ["".join(letters) for letters in product(self.glyphs, repeat=length)]


class RuleSet(BaseModel):
    """Production function f: Σⁿ → Σ* of an n-tag system."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Deletion number")
    alphabet: Alphabet
    productions: Dict[str, str] = Field(description="Length-n word -> production")

    @classmethod
    def from_mapping(cls, productions: Dict[str, str], alphabet: str = "") -> "RuleSet":
        """Build a rule set, inferring n and the alphabet from the left-hand sides."""
        if not productions:
            raise ValueError("rule set needs at least one production")
        n = len(next(iter(productions)))
        glyphs = alphabet or "".join(sorted({g for word in productions for g in word}))
        return cls(n=n, alphabet=Alphabet(glyphs=glyphs), productions=dict(productions))

    def production(self, word: str) -> str:
        """Get f(word)."""
        try:
            return self.productions[word]
        except KeyError:
            raise MissingRuleError(word) from None

    def words(self) -> List[str]:
        """The left-hand sides Σⁿ in id order."""
        return self.alphabet.words(self.n)

    def growth_bounds(self) -> Tuple[int, int]:
        """Smallest and largest per-step length change."""
        lengths = [len(self.production(word)) for word in self.words()]
        return min(lengths) - self.n, max(lengths) - self.n

    def has_empty_production(self) -> bool:
        return any(not self.production(word) for word in self.words())


def validate_rules(rules: RuleSet) -> None:
    """Check totality over Σⁿ, alphabet closure and the all-empty degenerate case.

    Raises:
        MissingRuleError, ForeignSymbolError, InconsistentLHSLengthError,
        AllEmptyRulesError
    """
    if rules.n < 1:
        raise ValueError(f"deletion number must be at least 1, got {rules.n}")

    for word, production in rules.productions.items():
        for glyph in word:
            if glyph not in rules.alphabet:
                raise ForeignSymbolError(glyph, word)
        if len(word) != rules.n:
            raise InconsistentLHSLengthError(0, rules.n, len(word))
        for glyph in production:
            if glyph not in rules.alphabet:
                raise ForeignSymbolError(glyph, word)

    for word in rules.words():
        if word not in rules.productions:
            raise MissingRuleError(word)

    if all(not production for production in rules.productions.values()):
        raise AllEmptyRulesError()
