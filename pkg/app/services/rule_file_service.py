"""
Rule File Service

Reads and writes the plain-text rule format:

    # comment
    aa -> aab
    ba ->          (empty production)

One rule per line; n is the length of the first left-hand side and every
word of Σⁿ needs a rule.
"""

import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple
from loguru import logger

from models.exceptions import (
    ForeignSymbolError, InconsistentLHSLengthError, RuleFileNotFoundError, RuleSyntaxError
)
from models.rule_set import Alphabet, RuleSet, validate_rules
from services.catalog_service import CATALOG_PREFIX, CatalogService

ARROW_PATTERN = re.compile(r"->|→")
EMPTY_LITERALS = ("e", "ε")


def parse_rules(text: str) -> RuleSet:
    """Parse rule-file text into a validated RuleSet.

    Raises:
        RuleSyntaxError, InconsistentLHSLengthError, ForeignSymbolError,
        MissingRuleError, AllEmptyRulesError
    """
    entries: List[Tuple[int, str, str]] = []
    seen: Dict[str, int] = {}
    n: Optional[int] = None

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        parts = ARROW_PATTERN.split(line)
        if len(parts) != 2:
            raise RuleSyntaxError(line_number, raw_line)

        lhs, rhs = parts[0].strip(), parts[1].strip()
        if not lhs or not _is_glyph_word(lhs):
            raise RuleSyntaxError(line_number, raw_line, "left-hand side must be letters")
        if rhs and not (_is_glyph_word(rhs) or rhs == "ε"):
            raise RuleSyntaxError(line_number, raw_line, "right-hand side must be letters")

        if n is None:
            n = len(lhs)
        elif len(lhs) != n:
            raise InconsistentLHSLengthError(line_number, n, len(lhs))

        if lhs in seen:
            raise RuleSyntaxError(line_number, raw_line, f"duplicate rule (first on line {seen[lhs]})")
        seen[lhs] = line_number
        entries.append((line_number, lhs, rhs))

    if n is None:
        raise RuleSyntaxError(0, text, "no rules found")

    alphabet = Alphabet(glyphs="".join(sorted({glyph for _, lhs, _ in entries for glyph in lhs})))

    productions: Dict[str, str] = {}
    for line_number, lhs, rhs in entries:
        if rhs in EMPTY_LITERALS and rhs not in alphabet:
            rhs = ""
        for glyph in rhs:
            if glyph not in alphabet:
                raise ForeignSymbolError(glyph, lhs)
        productions[lhs] = rhs

    rules = RuleSet(n=n, alphabet=alphabet, productions=productions)
    validate_rules(rules)
    logger.debug(f"Parsed {len(productions)} rules (n={n}, alphabet '{alphabet.glyphs}')")
    return rules


def format_rules(rules: RuleSet) -> str:
    """Render a RuleSet in rule-file format; the inverse of parse_rules."""
    lines = []
    for word in rules.words():
        production = rules.production(word)
        lines.append(f"{word} -> {production}" if production else f"{word} ->")
    return "\n".join(lines) + "\n"


def _is_glyph_word(word: str) -> bool:
    return all(glyph.isascii() and glyph.isalpha() for glyph in word)


class RuleFileService:
    """Service for loading rule sets from files or the built-in catalog."""

    def __init__(self, catalog_service: Optional[CatalogService] = None):
        self.catalog_service = catalog_service or CatalogService()

    def load_rules(self, source: str) -> RuleSet:
        """Load a rule set from a path or from 'catalog:<name>'."""
        if source.startswith(CATALOG_PREFIX):
            name = source[len(CATALOG_PREFIX):]
            logger.info(f"Using built-in rule set '{name}'")
            return self.catalog_service.get_rule_set(name)

        path = Path(source)
        if not path.is_file():
            raise RuleFileNotFoundError(source)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise RuleFileNotFoundError(source, f"could not be read: {e}") from e

        rules = parse_rules(text)
        logger.info(f"Loaded {len(rules.productions)} rules from {path}")
        return rules

    def save_rules(self, rules: RuleSet, path: Path) -> None:
        """Write a rule set in rule-file format."""
        path.write_text(format_rules(rules), encoding="utf-8")
        logger.info(f"Rule set saved to {path}")
