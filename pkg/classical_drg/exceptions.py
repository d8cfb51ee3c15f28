__all__ = [
    "ClassicalDrgException",
    "InfeasibleParameters",
    "ZeroDenominator",
    "DegenerateVariance",
    "DivergentProduct",
    "ConsistencyError",
    "NonTerminatingSeries",
    "InsufficientTruncation",
    "NumericalOverflow",
    "RegimeError",
    "OracleError",
    "SizeBoundExceeded",
    "NotDistanceRegular",
    "ClusterAmbiguity",
    "EigenResidualError",
    "ValidationError",
    "UsageError",
]


class ClassicalDrgException(Exception):
    """Base class for classical-drg errors"""

    exit_code = 1

    def __init__(self, message: str = "Unhandled classical-drg exception"):
        super().__init__(message)
        self.message = message


class InfeasibleParameters(ClassicalDrgException):
    """Parameters do not define the requested finite data"""

    exit_code = 2

    def __init__(self, message: str = "Infeasible parameters"):
        super().__init__(message)


class ZeroDenominator(InfeasibleParameters):
    """A denominator Pochhammer vanished"""

    def __init__(self, message: str = "Zero denominator"):
        super().__init__(message)


class DegenerateVariance(InfeasibleParameters):
    """Gibbs variance is not positive"""

    def __init__(self, message: str = "Variance has to be positive"):
        super().__init__(message)


class DivergentProduct(ClassicalDrgException):
    """Infinite product requested with |q| >= 1"""

    exit_code = 2

    def __init__(self, message: str = "Infinite product needs |q| < 1"):
        super().__init__(message)


class ConsistencyError(ClassicalDrgException):
    """Two independent evaluations of the same quantity disagree"""

    exit_code = 3

    def __init__(self, message: str = "Internal consistency failure"):
        super().__init__(message)


class NonTerminatingSeries(ClassicalDrgException):
    """No upper parameter of a basic hypergeometric series is a nonpositive power of the base"""

    exit_code = 3

    def __init__(self, message: str = "Series does not terminate"):
        super().__init__(message)


class InsufficientTruncation(ClassicalDrgException):
    """Fock space truncation is too short for the requested word"""

    exit_code = 3

    def __init__(self, message: str = "Insufficient truncation"):
        super().__init__(message)


class NumericalOverflow(ClassicalDrgException):
    """A floating point evaluation left the range of doubles"""

    exit_code = 3

    def __init__(self, message: str = "Numerical overflow"):
        super().__init__(message)


class RegimeError(ClassicalDrgException):
    """Limit regime is undefined or violates the normalizer condition"""

    exit_code = 2

    def __init__(self, message: str = "Invalid limit regime"):
        super().__init__(message)


class OracleError(ClassicalDrgException):
    """Brute-force construction failed"""

    exit_code = 3

    def __init__(self, message: str = "Oracle failure"):
        super().__init__(message)


class SizeBoundExceeded(OracleError):
    def __init__(self, message: str = "Graph exceeds the vertex bound"):
        super().__init__(message)


class NotDistanceRegular(OracleError):
    def __init__(self, message: str = "Graph is not distance-regular"):
        super().__init__(message)


class ClusterAmbiguity(OracleError):
    def __init__(self, message: str = "Eigenvalue clusters are ambiguous"):
        super().__init__(message)


class EigenResidualError(OracleError):
    def __init__(self, message: str = "Eigenpair residual above tolerance"):
        super().__init__(message)


class ValidationError(ClassicalDrgException):
    """Like ma's `ValidationError`, but exits the cli with code 65"""

    exit_code = 65

    def __init__(self, detail=None):
        self.detail = detail if detail is not None else {"error": "Invalid input"}
        super().__init__(str(self.detail))


class UsageError(ClassicalDrgException):
    exit_code = 64

    def __init__(self, message: str = "Invalid usage"):
        super().__init__(message)
