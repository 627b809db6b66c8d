"""Exception hierarchy shared by all squeezekit modules."""


class SqueezeKitError(Exception):
    """Base class for every error raised by squeezekit."""


class NotPositiveDefiniteError(SqueezeKitError, ValueError):
    """A matrix that must be symmetric positive definite is not."""


class ConditioningError(SqueezeKitError, ArithmeticError):
    """A linear solve or inverse is too ill-conditioned to trust."""


class StepSizeError(SqueezeKitError, ArithmeticError):
    """A fixed-step integrator left the admissible region; retry with a smaller dt."""


class LightConeError(SqueezeKitError, ArithmeticError):
    """Evaluation point lies inside the light-cone exclusion band of the propagator."""


class UnsupportedRepresentationError(SqueezeKitError, ValueError):
    """Input cannot be represented in the requested (e.g. mode-diagonal) form."""


class QuadratureError(SqueezeKitError, ArithmeticError):
    """A numerical quadrature did not converge with the nodes available."""


class TransversalityError(SqueezeKitError, ValueError):
    """A field amplitude has a longitudinal component or breaks reality symmetry."""
