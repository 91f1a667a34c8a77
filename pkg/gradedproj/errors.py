"""
Exception hierarchy for gradedproj.
"""


class GradedProjError(Exception):
    """Base class for all library errors."""


class InvalidLieTypeError(GradedProjError, ValueError):
    """Unknown family, malformed type string, or rank out of range."""


class WeightError(GradedProjError, ValueError):
    """Malformed weight string or coordinate vector of the wrong length."""


class NonDominantWeightError(WeightError):
    pass


class PreconditionError(GradedProjError):
    """An operation was called outside the domain where it is defined."""


class NegativeMultiplicityError(GradedProjError, ValueError):
    """Powers were requested of a virtual character."""


class CalibrationError(GradedProjError):
    """The symbolic Koike-Terada route was used for a configuration that failed calibration."""


class CacheCorruptionError(GradedProjError):
    """A persistent cache record could not be trusted."""
