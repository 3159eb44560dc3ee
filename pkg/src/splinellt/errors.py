"""Exception types shared across the library."""


class SplineLLTError(Exception):
    """Base class for library errors."""


class DuplicateKnots(SplineLLTError):
    """Two knots coincide; all divided-difference denominators would vanish."""


class DegenerateInput(SplineLLTError):
    """Input cannot be normalized (e.g. all values equal)."""


class PrecisionLoss(SplineLLTError):
    """Extended-precision evaluation cannot certify the requested accuracy."""


class QuadratureNotConverged(SplineLLTError):
    """Adaptive quadrature refinement stalled before reaching tolerance."""


class OrderTooHigh(SplineLLTError):
    """Requested derivative order exceeds the smoothness of the spline."""


class ConfigError(SplineLLTError):
    """Experiment configuration is invalid."""


class InsufficientData(SplineLLTError):
    """Not enough records for the requested fit."""
