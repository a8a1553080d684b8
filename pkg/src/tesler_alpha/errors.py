"""Exception hierarchy shared by every module of the package."""


class TeslerAlphaError(Exception):
    """Base class for all errors raised by tesler_alpha."""


# linear algebra
class LinAlgError(TeslerAlphaError):
    pass


class SingularMatrixError(LinAlgError):
    pass


class InconsistentSystemError(LinAlgError):
    pass


class RankDeficientError(LinAlgError):
    pass


class DuplicateAbscissaError(LinAlgError):
    pass


# polytope construction
class NonPositiveFirstEntryError(TeslerAlphaError):
    pass


class NonPositiveHookSumError(TeslerAlphaError):
    """Raised when a face-lattice operation gets a hook sum that is not
    strictly positive, even after leading zeros have been trimmed."""


class InvalidFacetError(TeslerAlphaError):
    pass


class InfeasibleVertexError(TeslerAlphaError):
    pass


class DimensionMismatchError(TeslerAlphaError):
    pass


# cones and alpha values
class NoVertexFoundError(TeslerAlphaError):
    pass


class OracleConditionError(TeslerAlphaError):
    """An edge-direction generator failed its pairing with the facet normals."""


class UnsupportedCodimError(TeslerAlphaError):
    pass


class CaseUnavailableError(TeslerAlphaError):
    pass


class ZeroDiagonalError(TeslerAlphaError):
    pass


# Ehrhart
class InterpolationMismatchError(TeslerAlphaError):
    pass
