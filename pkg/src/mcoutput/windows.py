"""Lag-window functions, their characteristic constants, and bandwidths.

Only the Bartlett (triangular) window ships built in; :class:`LagWindow` is
the extension point for user windows with their own characteristic exponent
q, limit constant k_q, and squared-weight integral.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BandwidthError, TooShort


def bartlett(x):
    """Triangular weight: 1 - |x| on [-1, 1], zero outside."""
    ax = np.abs(x)
    return np.where(ax <= 1.0, 1.0 - ax, 0.0)


@dataclass(frozen=True)
class LagWindow:
    """An even weight function with w(0) = 1 plus its asymptotic constants.

    ``q`` and ``k_q`` describe the behaviour of 1 - w(x) near zero,
    ``w2_integral`` is the integral of w^2 over the real line, and
    ``support_bound`` the smallest B with w(x) = 0 for |x| >= B (inf if
    none). ``bound`` is the constant c with |w| <= c.
    """

    name: str
    weight: object
    q: float
    k_q: float
    w2_integral: float
    support_bound: float
    bound: float = 1.0

    def weights(self, b_n, count):
        """Weight sequence w(k/b_n) for k = 0..count-1, hard-zeroed for
        k >= b_n (the truncation that defines the estimator)."""
        k = np.arange(count, dtype=np.float64)
        w = np.asarray(self.weight(k / b_n), dtype=np.float64)
        w[k >= b_n] = 0.0
        return w


BARTLETT = LagWindow(
    name="bartlett",
    weight=bartlett,
    q=1.0,
    k_q=1.0,
    w2_integral=2.0 / 3.0,
    support_bound=1.0,
)

WINDOWS = {"bartlett": BARTLETT}


def get_window(name):
    try:
        return WINDOWS[name]
    except KeyError:
        raise ValueError(f"unknown window {name!r}; available: {sorted(WINDOWS)}") from None


@dataclass(frozen=True)
class Bandwidth:
    """Truncation point b_n plus the rule that produced it."""

    b_n: int
    rule: str = "explicit"

    def __post_init__(self):
        if self.b_n < 1:
            raise BandwidthError(f"b_n must be >= 1, got {self.b_n}")


def default_bandwidth(n):
    """Square-root rule: b_n = floor(sqrt(n)); requires n >= 4."""
    if n < 4:
        raise TooShort(f"need n >= 4 for the default bandwidth, got {n}")
    return Bandwidth(b_n=math.isqrt(int(n)), rule="sqrt-default")


def resolve_bandwidth(spec, n):
    """Turn a CLI/config bandwidth spec (int or "sqrt") into a Bandwidth."""
    if isinstance(spec, Bandwidth):
        return spec
    if spec == "sqrt" or spec is None:
        return default_bandwidth(n)
    b = int(spec)
    if not 1 <= b <= n - 1:
        raise BandwidthError(f"b_n={b} outside [1, {n - 1}]")
    return Bandwidth(b_n=b, rule="explicit")


@dataclass(frozen=True)
class WindowCheckReport:
    """Outcome of the numerical lag-window sanity checks."""

    checks: dict = field(default_factory=dict)
    abs_integral: float = math.nan
    w2_integral: float = math.nan

    @property
    def passed(self):
        return all(self.checks.values())


def _simpson(y, h):
    n = len(y)
    if n == 1:
        return 0.0
    if n == 2:
        return 0.5 * h * (y[0] + y[1])
    if n % 2 == 0:  # even point count: Simpson on n-1 points + trapezoid tail
        return _simpson(y[:-1], h) + 0.5 * h * (y[-2] + y[-1])
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()))


def window_check(window, grid=1e-3, c=None):
    """Numerically verify the lag-window conditions on a sample grid.

    Checks evenness, w(0) = 1, boundedness into [-c, c], and finiteness of
    the integrals of |w| and w^2 (by Simpson quadrature on the support, with
    interval doubling up to 2^10 for unbounded supports). Returns a
    :class:`WindowCheckReport`; failures are reported, never raised.
    """
    if grid <= 0:
        raise ValueError("grid spacing must be positive")
    if c is None:
        c = window.bound
    checks = {}
    checks["w0_is_one"] = abs(float(window.weight(0.0)) - 1.0) <= 1e-12

    def sample(b):
        x = np.arange(0.0, b + grid / 2, grid)
        x = np.concatenate([-x[:0:-1], x])
        return x, np.asarray(window.weight(x), dtype=np.float64)

    finite_support = math.isfinite(window.support_bound)
    b0 = window.support_bound if finite_support else 1.0
    x, w = sample(b0)
    abs_int = _simpson(np.abs(w), grid)
    sq_int = _simpson(w * w, grid)
    bounded = bool(np.max(np.abs(w)) <= c + 1e-12)
    integrable = True
    if not finite_support:
        prev_abs, prev_sq = abs_int, sq_int
        integrable = False
        for _ in range(10):
            b0 *= 2.0
            x, w = sample(b0)
            bounded = bounded and bool(np.max(np.abs(w)) <= c + 1e-12)
            abs_int = _simpson(np.abs(w), grid)
            sq_int = _simpson(w * w, grid)
            if (abs_int - prev_abs) <= 1e-9 * (1.0 + abs_int) and \
               (sq_int - prev_sq) <= 1e-9 * (1.0 + sq_int):
                integrable = True
                break
            prev_abs, prev_sq = abs_int, sq_int
    checks["even"] = bool(np.max(np.abs(w - w[::-1])) <= 1e-12)
    checks["bounded"] = bounded
    checks["abs_integrable"] = integrable and math.isfinite(abs_int)
    checks["square_integrable"] = integrable and math.isfinite(sq_int)
    return WindowCheckReport(checks=checks, abs_integral=abs_int, w2_integral=sq_int)
