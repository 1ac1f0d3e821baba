"""Exception and warning classes.

Errors split into two families so the CLI can map them onto exit codes:
``ValidationError`` (bad input, exit 2) and ``NumericError`` (input is
well-formed but the numerics cannot be trusted, exit 3).
"""


class MaslovError(Exception):
    """Base class for every error raised by maslovkit."""


class ValidationError(MaslovError, ValueError):
    def __init__(self, message, path=None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path


class NumericError(MaslovError, ArithmeticError):
    pass


# validation family
class ParseError(ValidationError):
    pass


class UnknownKind(ValidationError):
    pass


class RankDeficientInput(ValidationError):
    pass


class NotCoisotropic(ValidationError):
    pass


class NotSymplectic(ValidationError):
    pass


class SubspaceNotPreserved(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotLagrangian(ValidationError):
    pass


class NotALoop(ValidationError):
    pass


class NonUnitSample(ValidationError):
    pass


class EigenvalueNotAdmissible(ValidationError):
    pass


class TransversalityFailure(ValidationError):
    pass


# numeric family
class ClusterAmbiguity(NumericError):
    pass


class IntegralityViolation(NumericError):
    pass


class GapTooLarge(NumericError):
    """Consecutive samples of a circle-valued path are too far apart to lift."""


class StepTooCoarse(NumericError):
    """A lifting step needed a correction larger than the step bound."""


class NonIntegerIndex(NumericError):
    pass


class DegenerateTriangulation(NumericError):
    pass


class NearBandWarning(UserWarning):
    """An eigenvalue sits close to one of the spectral classification bands."""


class NeitherRegularWarning(UserWarning):
    """Neither transport of a pair is regular; the index depends on the base point."""
