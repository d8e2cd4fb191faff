"""Exception hierarchy shared by all acmc modules."""


class AcmError(ValueError):
    """Base class for every error raised by acmc."""


class DimensionMismatch(AcmError):
    pass


class ShapeMismatch(AcmError):
    pass


class InvalidDimension(AcmError):
    pass


class DimensionTooSmall(AcmError):
    pass


class NotSymmetric(AcmError):
    pass


class NotPositiveDefinite(AcmError):
    def __init__(self, message, smallest_eigenvalue=None):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class SingularMatrix(AcmError):
    pass


class DegenerateStructure(AcmError):
    pass


class BadIndex(AcmError):
    pass


class OmegaNotHorizontal(AcmError):
    pass


class SingularTransformedMetric(AcmError):
    pass


class NotInG1(AcmError):
    """A conformal transformation with du != 0 was passed where du = 0 is required."""


class StepTooSmall(AcmError):
    """Finite-difference step so small that roundoff dominates."""


class SchemaError(AcmError):
    """Malformed JSON document; ``path`` is a JSON pointer to the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
