"""Exception types shared across the package."""


class AutomatonError(ValueError):
    """Base class for invalid machines, descriptions and macrostates."""


class MalformedDescription(AutomatonError):
    """A dotted sequence is not a valid Turing machine state description."""


class AmbiguousMatch(AutomatonError):
    """Two generalized-shift rules match the same dotted sequence."""


class UncodedSymbol(AutomatonError, KeyError):
    """A symbol has no Goedel number on the side where it appears."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InexpressibleRule(AutomatonError):
    """A rule's action is not affine-linear on its domain of dependence."""


class StraddlesPartition(AutomatonError):
    """A macrostate overlaps more than one cell of the NDA partition."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ResolutionMismatch(AutomatonError):
    """Grid resolution does not align with the partition boundaries."""


class DimensionMismatch(AutomatonError):
    """Operator and density grids have different sizes."""
