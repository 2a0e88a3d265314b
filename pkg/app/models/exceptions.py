"""
Domain Exceptions

Errors raised by the models and services. The controller maps them to
diagnostics and exit codes.
"""


class TagMetricsError(Exception):
    """Base class for every tagmetrics error."""


class RuleError(TagMetricsError):
    """Base class for problems with a rule set or rule file."""


class MissingRuleError(RuleError):
    """A length-n word has no production."""

    def __init__(self, word: str):
        self.word = word
        super().__init__(f"No production for '{word}'")


class ForeignSymbolError(RuleError):
    """A production uses a glyph outside the alphabet."""

    def __init__(self, glyph: str, word: str):
        self.glyph = glyph
        self.word = word
        super().__init__(f"Production for '{word}' uses undeclared symbol '{glyph}'")


class AllEmptyRulesError(RuleError):
    """Every production is the empty word."""

    def __init__(self):
        super().__init__("Every production is empty; the queue can only shrink")


class RuleSyntaxError(RuleError):
    """A rule-file line could not be parsed."""

    def __init__(self, line_number: int, line: str, reason: str = "expected '<lhs> -> <rhs>'"):
        self.line_number = line_number
        self.line = line
        super().__init__(f"Line {line_number}: {reason}: {line!r}")


class InconsistentLHSLengthError(RuleError):
    """A left-hand side does not have the deletion number's length."""

    def __init__(self, line_number: int, expected: int, found: int):
        self.line_number = line_number
        self.expected = expected
        self.found = found
        super().__init__(
            f"Line {line_number}: left-hand side has {found} symbols, expected {expected}"
        )


class RuleFileNotFoundError(RuleError):
    """The rule file does not exist or cannot be read."""

    def __init__(self, path: str, reason: str = "not found"):
        self.path = path
        super().__init__(f"Rule file '{path}' {reason}")


class UnknownRuleSetError(RuleError):
    """No built-in rule set has the requested name."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown rule set '{name}'")


class DistributionError(TagMetricsError):
    """Base class for malformed probability distributions."""


class ZeroMassError(DistributionError):
    """A distribution with zero total mass cannot be normalized."""

    def __init__(self):
        super().__init__("Distribution has zero total mass")


class ForeignTupleError(DistributionError):
    """A tuple distribution holds a word that is not a length-n word of the alphabet."""

    def __init__(self, word: str, n: int, glyphs: str):
        self.word = word
        super().__init__(f"'{word}' is not a length-{n} word over '{glyphs}'")


class AllEmptyError(TagMetricsError):
    """Productions have zero expected length, so no position can be selected."""

    def __init__(self, message: str = "Expected production length is zero"):
        super().__init__(message)


class HaltedError(TagMetricsError):
    """The queue holds fewer than n symbols."""

    def __init__(self, length: int, n: int):
        self.length = length
        self.n = n
        super().__init__(f"Queue halted with {length} symbols (n={n})")


class QueueTooShortError(TagMetricsError):
    """The queue is too short to hold a single length-n window."""

    def __init__(self, length: int, n: int):
        self.length = length
        self.n = n
        super().__init__(f"Queue of length {length} has no window of length {n}")


class BeyondHorizonError(TagMetricsError):
    """The requested step lies past the last predicted epoch."""

    def __init__(self, step: float, horizon: float):
        self.step = step
        self.horizon = horizon
        super().__init__(f"Step {step} lies beyond the predicted horizon of {horizon:.2f} steps")


class EmptyTraceError(TagMetricsError):
    """Nothing to render."""

    def __init__(self):
        super().__init__("Trace contains no snapshots")
