"""Exception types shared across the package."""


class WavecrestError(Exception):
    """Base class for all package-specific errors."""


class OutOfDomain(WavecrestError):
    """Evaluation outside the stream-value interval [0, B]."""


class InvalidVorticity(WavecrestError):
    """Vorticity function violates a required sign hypothesis."""


class NoCriticalPoint(WavecrestError):
    """No critical point of the Bernoulli bound function in the search bracket."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class NoRoot(WavecrestError):
    """Depth closure has no root in the scanned interval."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class DegenerateGrid(WavecrestError):
    """A grid column has non-positive height."""


class UnsupportedTestFn(WavecrestError):
    """Test function support touches the bed line."""


class StagnationInterior(WavecrestError):
    """The gradient vanishes away from the free surface."""


class AllNodesExcluded(WavecrestError):
    """The gradient cutoff removed every interior node."""


class Unbounded(WavecrestError):
    """A fitted ratio exceeds the blow-up threshold."""


class SeedFailure(WavecrestError):
    """Could not construct a continuation seed."""


class NewtonDivergence(WavecrestError):
    """Damped Newton iteration failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class WindowOutsideDomain(WavecrestError):
    """Rescaling window exceeds the source domain."""

    def __init__(self, message, max_scale=None):
        super().__init__(message)
        self.max_scale = max_scale


class InsufficientResolution(WavecrestError):
    """Too few profile samples for a scale-range fit."""


class ConeNotContained(WavecrestError):
    """Truncated cone is not contained in the fluid region."""


class NonMonotoneSurface(WavecrestError):
    """Surface parametrization violates the required monotonicity."""


class NonPositiveAbscissa(WavecrestError):
    """Kernel integral requested at x <= 0."""


class QuaViolated(WavecrestError):
    """Cumulative integral of sin(theta) is not positive."""


class MaxIterExceeded(WavecrestError):
    """Fixed-point iteration did not converge within the iteration budget."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log


class SchemaError(WavecrestError):
    """Configuration document violates the schema."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class ValidationError(WavecrestError):
    """Configuration value violates an invariant."""
