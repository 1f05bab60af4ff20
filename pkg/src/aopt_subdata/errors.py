"""Exception types raised across the package."""


class SubdataError(Exception):
    """Base class for all package errors."""


class RankDeficient(SubdataError, ValueError):
    """Matrix does not have full column rank to working precision."""


class SingularInformation(SubdataError, ValueError):
    """The information matrix ``Q^T Q`` is numerically singular."""


class DegenerateRemoval(SubdataError, ValueError):
    """Deleting the row would make the information matrix singular."""


class AllRemovalsDegenerate(SubdataError, RuntimeError):
    """No remaining row can be deleted without losing invertibility."""


class PoolTooSmall(SubdataError, ValueError):
    """Not enough rows to build the elimination pool."""


class ParseError(SubdataError, ValueError):
    """Malformed CSV input."""


class MissingColumn(SubdataError, KeyError):
    """A named column is absent from the input header."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class TooManyPredictors(SubdataError, ValueError):
    """All-subset search requested with too many predictors."""


class DimensionMismatch(SubdataError, ValueError):
    """Array shapes disagree."""
