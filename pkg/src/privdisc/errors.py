"""Exception hierarchy shared across the package."""


class PrivDiscError(Exception):
    """Base class for all errors raised by this package."""


class DistributionError(PrivDiscError):
    """A probability vector, channel, or joint array is malformed."""


class DimensionMismatchError(PrivDiscError):
    """Shapes of interacting objects do not agree."""


class TruncatedEnumerationError(PrivDiscError):
    """Vertex enumeration hit its subset cap; the result would be partial."""


class InfeasibleLPError(PrivDiscError):
    """The LP reported infeasibility (numerical breakdown, since the
    marginal-preservation constraint is satisfiable by construction)."""


class NotIndependentError(PrivDiscError):
    """A heuristic that requires mutually independent samples was handed a
    dataset whose joint law is not a product of its marginals."""


class BudgetExceededError(PrivDiscError):
    """An exact-arithmetic or exhaustive-enumeration budget was exceeded."""


class ScenarioFormatError(PrivDiscError):
    """A scenario file could not be parsed into a valid scenario."""
