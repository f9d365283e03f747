"""Seeded, reproducible samplers for the three built-in target processes.

All three samplers pre-generate their random inputs from per-chain Philox
substreams (see :mod:`mcoutput.rng`) and run the recursion in a kernel, so a
given (seed, configuration) yields a bitwise-identical ChainSet regardless
of scheduling. Conventions:

* VAR(1): the start vector is recorded as the first sample, followed by
  n - 1 updates X_t = Phi X_{t-1} + eps_t, eps ~ N(0, Omega) via the lower
  Cholesky factor of Omega.
* Random-walk Metropolis (Gaussian mixture target): n transitions are run
  from the start and each visited state is recorded (start not recorded).
* Boomerang Gibbs: n deterministic-scan sweeps (x then y), state recorded
  after each full sweep (start not recorded).
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import get_kernels
from ._special import norm_ppf
from .chains import ChainSet
from .errors import Unstable
from .rng import normals, substream, uniforms


@dataclass(frozen=True)
class VarProcess:
    """VAR(1) law: X_t = phi X_{t-1} + eps_t with eps_t ~ N(0, omega).

    ``phi`` must have spectral radius < 1; ``omega`` must be symmetric
    positive semidefinite (a zero omega is allowed to exercise the
    noiseless recursion in tests).
    """

    phi: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        phi = np.atleast_2d(np.asarray(self.phi, dtype=np.float64))
        omega = np.atleast_2d(np.asarray(self.omega, dtype=np.float64))
        if phi.shape[0] != phi.shape[1] or phi.shape != omega.shape:
            raise ValueError("phi and omega must be square with equal shape")
        rho = np.abs(np.linalg.eigvals(phi)).max()
        if rho >= 1.0:
            raise Unstable(f"spectral radius {rho:.6g} >= 1")
        scale = max(np.abs(omega).max(), 1.0)
        if np.abs(omega - omega.T).max() > 1e-12 * scale:
            raise ValueError("omega must be symmetric")
        if np.linalg.eigvalsh(omega).min() < -1e-12 * scale:
            raise ValueError("omega must be positive semidefinite")
        object.__setattr__(self, "phi", _readonly(phi))
        object.__setattr__(self, "omega", _readonly(omega))

    @property
    def p(self):
        return self.phi.shape[0]


@dataclass(frozen=True)
class MixtureTarget:
    """Two-component univariate Gaussian mixture with RWM proposal scale."""

    weights: tuple = (0.7, 0.3)
    means: tuple = (-5.0, 5.0)
    variances: tuple = (1.0, 0.5)
    proposal_sd: float = 2.0

    def __post_init__(self):
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")
        if min(self.variances) <= 0.0:
            raise ValueError("mixture variances must be positive")
        if self.proposal_sd <= 0.0:
            raise ValueError("proposal_sd must be positive")


@dataclass(frozen=True)
class BoomerangTarget:
    """Bivariate density ~ exp(-[a x^2 y^2 + x^2 + y^2 - 2b xy - 2c x - 2c y]/2)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a < 0.0:
            raise ValueError("need a >= 0")


# the paper-scale demo settings, frozen for the experiment harness
BOOMERANG_SETTING1 = BoomerangTarget(a=1.0, b=3.0, c=8.0)
BOOMERANG_SETTING2 = BoomerangTarget(a=1.0, b=10.0, c=7.0)


def _readonly(arr):
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


def _noise_factor(omega):
    """Lower Cholesky factor; eigenvalue square root for semidefinite omega."""
    try:
        return np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(omega)
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def simulate_var1(process, m, n, starts, seed, backend=None):
    """Simulate m independent VAR(1) chains of length n.

    ``starts`` is an (m, p) array (or list of vectors); chain s starts at
    starts[s] and that vector is the first recorded sample. Innovations for
    chain s come from substream (seed, s).
    """
    kern = get_kernels(backend)
    p = process.p
    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    if starts.shape != (m, p):
        raise ValueError(f"starts must have shape ({m}, {p}), got {starts.shape}")
    if not np.isfinite(starts).all():
        raise ValueError("starts must be finite")
    factor = _noise_factor(process.omega)
    data = np.empty((m, n, p))
    for s in range(m):
        z = normals(substream(seed, s), (n - 1) * p).reshape(n - 1, p)
        eps = z @ factor.T
        kern.var1_recurrence(process.phi, starts[s], eps, data[s])
    return ChainSet(data)


def mixture_density(target, x):
    """Mixture pdf, vectorized (used for oracles and diagnostics)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x, dtype=np.float64)
    for w, mu, v in zip(target.weights, target.means, target.variances):
        out = out + w * np.exp(-0.5 * (x - mu) ** 2 / v) / math.sqrt(2.0 * math.pi * v)
    return out


def rwm_mixture(target, m, n, starts, seed, backend=None):
    """Random-walk Metropolis chains targeting the Gaussian mixture.

    Per step a N(0, proposal_sd^2) increment is proposed and accepted with
    the usual density ratio. Per chain, the first n draws of the uniform
    stream become proposal increments (by inverse CDF), the next n the
    accept/reject uniforms.
    """
    kern = get_kernels(backend)
    starts = np.asarray(starts, dtype=np.float64).reshape(-1)
    if starts.shape != (m,):
        raise ValueError(f"starts must hold {m} scalars")
    (w1, w2), (mu1, mu2), (v1, v2) = target.weights, target.means, target.variances
    data = np.empty((m, n, 1))
    for s in range(m):
        u = uniforms(substream(seed, s), 2 * n)
        z = norm_ppf(u[:n])
        kern.rwm_mixture_chain(float(starts[s]), target.proposal_sd, z, u[n:],
                               w1, mu1, v1, w2, mu2, v2, data[s, :, 0])
    return ChainSet(data)


def gibbs_boomerang(target, m, n, starts, seed, backend=None):
    """Deterministic-scan Gibbs sampler for the boomerang target.

    The full conditionals are Gaussian: x | y ~ N((by + c)/(a y^2 + 1),
    1/(a y^2 + 1)) and symmetrically for y | x. Each sweep consumes one
    standard-normal pair from the chain's substream.
    """
    kern = get_kernels(backend)
    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    if starts.shape != (m, 2):
        raise ValueError(f"starts must have shape ({m}, 2), got {starts.shape}")
    data = np.empty((m, n, 2))
    for s in range(m):
        z = normals(substream(seed, s), 2 * n).reshape(n, 2)
        kern.gibbs_boomerang_chain(float(starts[s, 0]), float(starts[s, 1]), z,
                                   target.a, target.b, target.c, data[s])
    return ChainSet(data)
