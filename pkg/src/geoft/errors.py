"""Exception hierarchy shared by every geoft module."""


class GeoFTError(Exception):
    """Base class for all library errors."""


class NonSquare(GeoFTError, ValueError):
    pass


class Degenerate(GeoFTError, ValueError):
    """The bilinear form (or a matrix that must be invertible) is singular."""


class SingularMatrix(Degenerate):
    pass


class DimensionMismatch(GeoFTError, ValueError):
    pass


class NotGridRealizable(GeoFTError, ValueError):
    """A field operation cannot be carried out on samples alone."""


class GridMismatch(GeoFTError, ValueError):
    pass


class EmptyFrequencyList(GeoFTError, ValueError):
    pass


class UnsupportedMode(GeoFTError, ValueError):
    pass


class AxisOutOfRange(GeoFTError, IndexError):
    pass


class IncommensurateWave(GeoFTError, ValueError):
    pass


class RadiusTooLarge(GeoFTError, ValueError):
    pass


class TailBoundViolated(GeoFTError, ValueError):
    pass


class NotPositiveDefinite(GeoFTError, ValueError):
    pass


class NotPeriodic(UnsupportedMode):
    pass


class ParamOutOfRange(GeoFTError, ValueError):
    pass


class UnknownCheck(GeoFTError, KeyError):
    pass


class PreconditionFailed(GeoFTError):
    """A module error raised while running a catalog check; carries the check id."""

    def __init__(self, check_id, cause):
        super().__init__(f"{check_id}: {type(cause).__name__}: {cause}")
        self.check_id = check_id
        self.cause = cause


class TrivialAlgebraWarning(UserWarning):
    """The Lie algebra of the form is {0}; group sampling returned the identity."""
