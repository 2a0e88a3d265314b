"""
Catalog Service

Built-in 2-tag rule sets with well-known large-scale behavior.
"""

from typing import Dict, List
from loguru import logger

from models.exceptions import UnknownRuleSetError
from models.rule_set import RuleSet, validate_rules

CATALOG_PREFIX = "catalog:"

BUILTIN_RULE_SETS: Dict[str, Dict[str, str]] = {
    # contracts, then grows towards one symbol per step
    "hourglass": {"aa": "aaa", "ab": "b", "ba": "a", "bb": "b"},
    # constant length and contraction alternate every epoch
    "alternating": {"aa": "bbb", "ab": "ab", "ba": "bb", "bb": "a"},
    "terminating": {"aa": "aab", "ab": "ab", "ba": "b", "bb": "ba"},
    "saturating": {"aa": "bb", "ab": "bb", "ba": "aaa", "bb": "bb"},
    "decelerating": {"aa": "bab", "ab": "bbb", "ba": "aab", "bb": "bb"},
    "linear": {"aa": "b", "ab": "b", "ba": "aab", "bb": "abb"},
    "vanishing": {"aa": "aa", "ab": "ba", "ba": "", "bb": "ab"},
    "collapsing": {"aa": "bbb", "ab": "ab", "ba": "bb", "bb": "b"},
    # every production has at least two symbols
    "unbounded": {"aa": "aba", "ab": "aa", "ba": "bbb", "bb": "ba"},
}


class CatalogService:
    """Service for looking up built-in rule sets."""

    def __init__(self):
        self._rule_sets: Dict[str, RuleSet] = {}
        for name, productions in BUILTIN_RULE_SETS.items():
            rules = RuleSet.from_mapping(productions, alphabet="ab")
            validate_rules(rules)
            self._rule_sets[name] = rules
        logger.debug(f"Loaded {len(self._rule_sets)} built-in rule sets")

    def list_rule_sets(self) -> List[str]:
        """Names of the built-in rule sets."""
        return list(self._rule_sets)

    def get_rule_set(self, name: str) -> RuleSet:
        try:
            return self._rule_sets[name]
        except KeyError:
            raise UnknownRuleSetError(name) from None

    def rule_text(self, name: str) -> str:
        """A built-in rule set in rule-file format."""
        from services.rule_file_service import format_rules

        return format_rules(self.get_rule_set(name))
