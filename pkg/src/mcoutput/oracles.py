"""Ground-truth quantities for the built-in targets.

VAR(1): the stationary covariance solves the discrete Lyapunov identity
Psi = Phi Psi Phi^T + Omega, obtained from the Kronecker-product linear
system (I - Phi (x) Phi) vec(Psi) = vec(Omega). Lag covariances are
Gamma(k) = Phi^k Psi, and the long-run sums Sigma = sum_k Gamma(k) and
Phi1 = sum_k |k| Gamma(k) are computed by truncated summation with a
certified geometric tail bound, so the oracle validates itself.

Boomerang: the mean is computed by tensor-product adaptive Simpson
quadrature of the unnormalized density (log-shifted to avoid overflow) on a
box chosen so the boundary density is below 1e-14 of the peak.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, QuadratureError, TailError

_LYAP_RTOL = 1e-10
_TAIL_RTOL = 1e-10
_MAX_TRUNCATION = 10 ** 6


def var_stationary_cov(phi, omega):
    """Stationary covariance of X_t = phi X_{t-1} + eps_t, eps ~ N(0, omega)."""
    phi = np.atleast_2d(np.asarray(phi, dtype=np.float64))
    omega = np.atleast_2d(np.asarray(omega, dtype=np.float64))
    p = phi.shape[0]
    system = np.eye(p * p) - np.kron(phi, phi)
    try:
        psi = np.linalg.solve(system, omega.reshape(-1)).reshape(p, p)
    except np.linalg.LinAlgError:
        raise IllConditioned("I - Phi (x) Phi is singular") from None
    psi = 0.5 * (psi + psi.T)
    resid = np.linalg.norm(psi - phi @ psi @ phi.T - omega)
    if resid > _LYAP_RTOL * max(np.linalg.norm(psi), 1e-300):
        raise IllConditioned(
            f"Lyapunov residual {resid:.3e} too large; system ill-conditioned")
    return psi


@dataclass(frozen=True)
class OracleVar:
    """Closed-form VAR(1) truth bundle with certified truncation tails."""

    phi: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    sigma: np.ndarray
    sigma_tail: float
    phi1: np.ndarray
    phi1_tail: float
    truncation: int


def var_acvf(oracle, k):
    """True lag-k covariance Gamma(k) = Phi^k Psi (transpose for k < 0)."""
    if k < 0:
        return var_acvf(oracle, -k).T
    return np.linalg.matrix_power(oracle.phi, int(k)) @ oracle.psi


def _longrun_sum(phi, psi, truncation, q):
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    if q not in (0, 1):
        raise ValueError("q must be 0 or 1")
    r = float(np.linalg.norm(phi, 2))
    if r >= 1.0:
        raise TailError(
            f"spectral norm {r:.6g} >= 1; geometric tail bound unavailable")
    psi_norm = float(np.linalg.norm(psi, 2))

    total = psi.copy() if q == 0 else np.zeros_like(psi)
    power = np.eye(phi.shape[0])
    k = 0
    while True:
        k += 1
        if k > _MAX_TRUNCATION:
            raise TailError(f"no convergence by K={_MAX_TRUNCATION}")
        power = phi @ power
        term = power @ psi
        weight = 1.0 if q == 0 else float(k)
        total += weight * (term + term.T)
        if k < truncation:
            continue
        tail = _geometric_tail(r, k, q) * 2.0 * psi_norm
        if tail < _TAIL_RTOL * max(np.linalg.norm(total), 1e-300):
            return total, tail, k


def _geometric_tail(r, k, q):
    """Upper bound for sum_{j > k} j^q r^j (q in {0, 1})."""
    if q == 0:
        return r ** (k + 1) / (1.0 - r)
    return r ** (k + 1) * ((k + 1) * (1.0 - r) + r) / (1.0 - r) ** 2


def var_longrun(oracle, truncation=1, q=0):
    """Truncated sum over lags of |k|^q Gamma(k) with a certified tail bound.

    The truncation grows until the geometric tail bound drops below 1e-10 of
    the accumulated norm. Requires the spectral norm of Phi to be < 1 so the
    bound is valid. Returns (matrix, tail_bound).
    """
    total, tail, _ = _longrun_sum(oracle.phi, oracle.psi, truncation, q)
    return total, tail


def var_oracle(phi, omega, truncation=1):
    """Build the full VAR(1) truth bundle."""
    phi = np.atleast_2d(np.asarray(phi, dtype=np.float64))
    omega = np.atleast_2d(np.asarray(omega, dtype=np.float64))
    psi = var_stationary_cov(phi, omega)
    sigma, sigma_tail, k0 = _longrun_sum(phi, psi, 1, 0)
    phi1, phi1_tail, k1 = _longrun_sum(phi, psi, 1, 1)
    return OracleVar(phi=phi, omega=omega, psi=psi,
                     sigma=sigma, sigma_tail=sigma_tail,
                     phi1=phi1, phi1_tail=phi1_tail,
                     truncation=max(k0, k1))


def boomerang_logdensity(target, x, y):
    """Log of the unnormalized boomerang density."""
    return -0.5 * (target.a * x * x * y * y + x * x + y * y
                   - 2.0 * target.b * x * y
                   - 2.0 * target.c * x - 2.0 * target.c * y)


def _quadrature_box(target, factor=1.0):
    """Square [-L, L]^2 whose boundary density is < 1e-14 of the peak."""
    length = 8.0
    for _ in range(12):
        grid = np.linspace(-length, length, 241)
        gx, gy = np.meshgrid(grid, grid, indexing="ij")
        logf = boomerang_logdensity(target, gx, gy)
        peak = logf.max()
        edge = max(logf[0, :].max(), logf[-1, :].max(),
                   logf[:, 0].max(), logf[:, -1].max())
        if edge < peak + math.log(1e-14):
            return -length * factor, length * factor, float(peak)
        length *= 2.0
    raise QuadratureError("could not find a box containing the density mass")


class _DepthExceeded(Exception):
    pass


def _adaptive_simpson(f, a, b, tol, depth_cap=20):
    """Adaptive Simpson for a vector-valued integrand; absolute tolerance
    in the max norm. Raises on recursion past ``depth_cap``."""
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth_cap)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    # locally adaptive: both halves keep the parent tolerance (refinement
    # concentrates where the integrand is hard; accuracy is cross-checked
    # by the two-resolution agreement test rather than a worst-case bound)
    mid = 0.5 * (a + b)
    lm = 0.5 * (a + mid)
    rm = 0.5 * (mid + b)
    flm, frm = f(lm), f(rm)
    left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if np.max(np.abs(delta)) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise _DepthExceeded
    return (_simpson_step(f, a, mid, fa, flm, fm, left, tol, depth - 1)
            + _simpson_step(f, mid, b, fm, frm, fb, right, tol, depth - 1))


def _panels(f, points, tol, depth_cap):
    total = None
    for a, b in zip(points[:-1], points[1:]):
        part = _adaptive_simpson(f, a, b, tol, depth_cap)
        total = part if total is None else total + part
    return total


def boomerang_mean(target, rtol=1e-9, box_factor=1.0, depth_cap=20):
    """(E[x], E[y]) of the boomerang target by 2-D adaptive quadrature.

    The normalization and both first moments are integrated simultaneously.
    The inner (x) integral returns the 2-vector (f, x f) for fixed y; the
    outer (y) integral assembles (Z, Z E[x], Z E[y]). Each 1-D integral is
    seeded with panel boundaries at the mass locations (the conditional mean
    for the inner integral; pilot-grid maxima for the outer) so the adaptive
    refinement cannot step over a narrow ridge.
    """
    lo, hi, peak = _quadrature_box(target, factor=box_factor)

    # pilot estimate of the normalization sets the absolute tolerances; the
    # inner tolerance sits well below the outer acceptance threshold so the
    # outer refinement never chases inner-integration noise
    grid = np.linspace(lo, hi, 201)
    gx, gy = np.meshgrid(grid, grid, indexing="ij")
    density = np.exp(boomerang_logdensity(target, gx, gy) - peak)
    pilot = float(density.sum()) * (grid[1] - grid[0]) ** 2
    outer_tol = rtol * pilot
    inner_tol = outer_tol / (hi - lo) / 64.0

    marginal = density.sum(axis=0)
    interior = ((marginal[1:-1] >= marginal[:-2])
                & (marginal[1:-1] >= marginal[2:])
                & (marginal[1:-1] > 1e-12 * marginal.max()))
    outer_points = np.unique(np.concatenate(
        [[lo, hi], grid[1:-1][interior]]))

    def inner(y):
        prec = target.a * y * y + 1.0
        mu = (target.b * y + target.c) / prec
        sd = 1.0 / math.sqrt(prec)
        cuts = np.clip([mu - 4.0 * sd, mu, mu + 4.0 * sd], lo, hi)
        points = np.unique(np.concatenate([[lo, hi], cuts]))

        def f(x):
            val = math.exp(boomerang_logdensity(target, x, y) - peak)
            return np.array([val, x * val])

        return _panels(f, points, inner_tol, depth_cap)

    def outer_integrand(y):
        f0, fx = inner(y)
        return np.array([f0, fx, y * f0])

    try:
        z, zx, zy = _panels(outer_integrand, outer_points, outer_tol, depth_cap)
    except _DepthExceeded:
        raise QuadratureError(
            f"adaptive quadrature exceeded depth cap {depth_cap}") from None
    if z <= 0.0 or not np.isfinite(z):
        raise QuadratureError("normalization integral is not positive")
    return np.array([zx / z, zy / z])
