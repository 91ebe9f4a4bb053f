"""Semantic exception hierarchy shared across the package."""


class RdControlError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RdControlError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleOffsetError(DomainError):
    """A distortion offset does not decode to a valid distortion."""


class UnsupportedCombinationError(RdControlError, TypeError):
    """A utility / sign-flag / region combination has no closed-form solver."""


class InconsistencyError(RdControlError):
    """An internally derived result failed its own feasibility check."""


class InfeasibleError(RdControlError):
    """A constraint set that should never be empty turned out empty."""


class GridTooLargeError(RdControlError):
    """A requested exhaustive scan exceeds the hard work cap."""


class ScenarioError(RdControlError, ValueError):
    """A scenario document violates the input schema; message names the field."""
