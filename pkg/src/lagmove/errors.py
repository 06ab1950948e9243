"""Exception types shared across the package."""


class LagmoveError(Exception):
    """Base class for all package errors."""


class StructuralError(LagmoveError):
    """Mismatched array lengths or otherwise malformed inputs."""


class NumericInputError(LagmoveError):
    """NaN or Inf encountered in an input that must be finite."""


class DimensionError(LagmoveError):
    """Operation requires a specific spatial dimension."""


class HistoryMissingError(LagmoveError):
    """A mover needing previous-step data was called without history."""


class StencilDeficiencyError(LagmoveError):
    """Too few neighbors to fit a gradient."""


class IllConditionedStencilError(LagmoveError):
    """Normal-equations matrix of a stencil fit is numerically singular."""


class DegenerateGeometryError(LagmoveError):
    """Point set is collinear/coplanar where a full-dimensional hull is needed."""
