"""Exception types shared across the package."""


class McOutputError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(McOutputError):
    """An input file is missing required columns or has a malformed header."""


class RaggedInput(McOutputError):
    """Chains in an input file do not all have the same number of iterations."""


class BadValue(McOutputError):
    """A value in an input file is missing, unparsable, or not a finite real.

    ``row`` is the 1-based data-row index (header excluded) when known.
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class LagTooLarge(McOutputError):
    """Requested lag is >= the per-chain length."""


class DegenerateVariance(McOutputError):
    """Lag-0 variance is zero for the requested component and centering."""


class TooShort(McOutputError):
    """Chain too short for the requested operation."""


class BandwidthError(McOutputError):
    """Truncation point outside the valid range for the chain length."""


class ShapeError(McOutputError):
    """Array dimensions do not match between inputs."""


class IndefiniteSigma(McOutputError):
    """Long-run covariance estimate has a nonpositive determinant."""


class DegenerateLag0(McOutputError):
    """Lag-0 covariance estimate has a nonpositive determinant."""


class SingularCovariance(McOutputError):
    """Covariance scale matrix is singular; confidence region undefined."""


class Unstable(McOutputError):
    """Autoregressive coefficient matrix has spectral radius >= 1."""


class IllConditioned(McOutputError):
    """A linear system was too ill-conditioned to solve reliably."""


class TailError(McOutputError):
    """A truncated series did not converge within the iteration budget."""


class QuadratureError(McOutputError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConfigError(McOutputError):
    """Experiment configuration is invalid or incomplete."""
