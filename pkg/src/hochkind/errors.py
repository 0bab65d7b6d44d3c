"""Exception types shared across the engine.

Every mathematically meaningful failure gets its own class so the CLI can
map it to exit code 2 (mathematical FAIL) instead of 1 (usage/IO error).
"""


class HochkindError(Exception):
    """Base class for engine errors."""


class SchemaError(HochkindError):
    """Malformed input document or element expression."""


class NotAComplex(HochkindError):
    """d∘d has a nonzero entry."""

    def __init__(self, degree, entry, value):
        self.degree = degree
        self.entry = entry
        self.value = value
        super().__init__(
            f"d∘d != 0 out of degree {degree}: entry {entry} = {value}"
        )


class ModeMismatch(HochkindError):
    """Operands live in different grading modes or over different fields."""


class WrongDegree(HochkindError):
    """An element fails a homogeneity requirement."""


class FieldNotFinite(HochkindError):
    """Enumeration requested over an infinite field."""


class SearchSpaceTooLarge(HochkindError):
    """MC enumeration would exceed the configured point bound."""


class AlgebraMismatch(HochkindError):
    """Module/element attached to a different algebra than required."""


class NonCentralCurvature(HochkindError):
    """d² != 0 on an endomorphism object because the curvature is not central."""


class NotAugmented(HochkindError):
    """Operation requires a (dg-)augmented algebra with a valid canonical split."""


class WindowTooSmall(HochkindError):
    """Requested window cannot hold the construction."""


class WindowOverflow(HochkindError):
    """Operation on window data would leave the window (e.g. cup product)."""
