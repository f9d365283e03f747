"""Locally- and globally-centered autocovariance and autocorrelation.

Local centering subtracts each chain's own mean; global centering subtracts
the average of all chain means. Both use the biased divisor n at every lag.
For a single chain the two centerings coincide exactly (same code path, same
center), so local/global results are bitwise identical when m = 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chains import global_mean
from .errors import DegenerateVariance, LagTooLarge

CENTERINGS = ("local", "global")


def _center(chains, s, centering):
    if centering == "local":
        return chains.chain(s).mean(axis=0)
    if centering == "global":
        return global_mean(chains)
    raise ValueError(f"centering must be one of {CENTERINGS}, got {centering!r}")


def _lag_cov(dev, k):
    n = dev.shape[0]
    return dev[: n - k].T @ dev[k:] / n


def acvf(chains, s, k, centering="local"):
    """Lag-k autocovariance matrix of chain ``s`` about the chosen center.

    Parameters
    ----------
    chains : ChainSet
    s : int
        Chain index (0-based).
    k : int
        Nonnegative lag, k <= n - 1.
    centering : "local" or "global"

    Returns the p x p matrix (1/n) * sum_t (X_t - c)(X_{t+k} - c)^T.
    """
    k = int(k)
    if k < 0:
        raise ValueError("lag must be nonnegative; use AcvfSequence.at for k < 0")
    if k >= chains.n:
        raise LagTooLarge(f"lag {k} >= chain length {chains.n}")
    dev = chains.chain(s) - _center(chains, s, centering)
    return _lag_cov(dev, k)


def averaged_global_acvf(chains, k):
    """Mean over chains of the globally-centered lag-k autocovariance."""
    k = int(k)
    if k < 0:
        raise ValueError("lag must be nonnegative")
    if k >= chains.n:
        raise LagTooLarge(f"lag {k} >= chain length {chains.n}")
    gm = global_mean(chains)
    mats = [_lag_cov(chains.chain(s) - gm, k) for s in range(chains.m)]
    return np.mean(mats, axis=0)


def acf(chains, s, i, max_lag, centering="local"):
    """Autocorrelations of component ``i`` of chain ``s`` for lags 0..max_lag.

    Entry k is the lag-k autocovariance diagonal element divided by the lag-0
    element; entry 0 is exactly 1. Raises DegenerateVariance when the lag-0
    variance is zero (a constant chain under local centering).
    """
    max_lag = int(max_lag)
    if max_lag >= chains.n:
        raise LagTooLarge(f"max_lag {max_lag} >= chain length {chains.n}")
    dev = chains.chain(s)[:, i] - _center(chains, s, centering)[i]
    n = chains.n
    denom = dev @ dev / n
    if denom <= 0.0:
        raise DegenerateVariance(
            f"zero lag-0 variance for component {i} under {centering} centering")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = (dev[: n - k] @ dev[k:] / n) / denom
    return out


def averaged_global_acf(chains, i, max_lag):
    """Mean over chains of the per-chain globally-centered autocorrelations.

    Average of ratios, not ratio of averages: each chain is normalized by its
    own globally-centered lag-0 variance before averaging.
    """
    vecs = [acf(chains, s, i, max_lag, centering="global") for s in range(chains.m)]
    return np.mean(vecs, axis=0)


def default_max_lag(n):
    """Default plot lag: min(n - 1, ceil(10 * log10(n)))."""
    return min(n - 1, math.ceil(10.0 * math.log10(n)))


@dataclass(frozen=True)
class AcvfSequence:
    """Autocovariance matrices for lags 0..K with centering/scope provenance.

    ``scope`` is a 0-based chain index, or the string "averaged". Negative
    lags are served by :meth:`at` as the transpose of the positive lag.
    """

    matrices: np.ndarray  # (K + 1, p, p)
    centering: str
    scope: object

    def __post_init__(self):
        m0 = self.matrices[0]
        scale = max(np.abs(m0).max(), 1e-300)
        if np.abs(m0 - m0.T).max() > 1e-12 * scale:
            raise ValueError("lag-0 autocovariance matrix is not symmetric")

    @property
    def max_lag(self):
        return self.matrices.shape[0] - 1

    def at(self, k):
        """Lag-k matrix; for k < 0 returns the transpose of lag |k|."""
        if k < 0:
            return self.matrices[-k].T
        return self.matrices[k]


def acvf_sequence(chains, max_lag, centering="local", s=None):
    """Build an :class:`AcvfSequence` for one chain (``s``) or, with
    ``s=None`` and global centering, the chain-averaged sequence."""
    max_lag = int(max_lag)
    if max_lag >= chains.n:
        raise LagTooLarge(f"max_lag {max_lag} >= chain length {chains.n}")
    if s is None:
        if centering != "global":
            raise ValueError("averaged sequences are defined for global centering")
        mats = np.stack([averaged_global_acvf(chains, k) for k in range(max_lag + 1)])
        return AcvfSequence(matrices=mats, centering=centering, scope="averaged")
    dev = chains.chain(s) - _center(chains, s, centering)
    mats = np.stack([_lag_cov(dev, k) for k in range(max_lag + 1)])
    return AcvfSequence(matrices=mats, centering=centering, scope=s)


@dataclass(frozen=True)
class BiasTarget:
    """Inputs for the leading-order expectation of the globally-centered
    lag-k autocovariance estimator: the true lag covariance, the long-run
    covariance, the first absolute-moment covariance sum, and (m, n, k)."""

    gamma_k: np.ndarray
    sigma: np.ndarray
    phi: np.ndarray
    m: int
    n: int
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.n > abs(self.k):
            raise ValueError("need n > |k|")


def gacvf_bias_target(target):
    """Leading-order expected value of the globally-centered ACvF at lag k:

        (1 - |k|/n) * (Gamma(k) - Sigma/(m n) - Phi/(m n^2))

    Used as the reference in empirical-bias tests.
    """
    t = target
    factor = 1.0 - abs(t.k) / t.n
    return factor * (np.asarray(t.gamma_k)
                     - np.asarray(t.sigma) / (t.m * t.n)
                     - np.asarray(t.phi) / (t.m * t.n ** 2))


def acf_rows(chains, max_lag=None, centerings=CENTERINGS):
    """Tidy (lag, chain, component, centering, value) rows for ACF export.

    Chain ids are 1-based in the output; chain id 0 carries the across-chain
    average (average of per-chain autocorrelations).
    """
    if max_lag is None:
        max_lag = default_max_lag(chains.n)
    rows = []
    for centering in centerings:
        for i in range(chains.p):
            per_chain = [acf(chains, s, i, max_lag, centering)
                         for s in range(chains.m)]
            avg = np.mean(per_chain, axis=0)
            for k in range(max_lag + 1):
                rows.append((k, 0, i + 1, centering, avg[k]))
                for s in range(chains.m):
                    rows.append((k, s + 1, i + 1, centering, per_chain[s][k]))
    return rows
