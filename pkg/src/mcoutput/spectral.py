"""Spectral (lag-window) long-run variance estimators.

Two computation paths produce the same estimate:

* the naive path sums weighted lag covariances directly, O(b_n * n * p^2);
* the fast path embeds the n x n Toeplitz weight matrix T(w) in a 2n x 2n
  symmetric circulant, diagonalizes it with a length-2n DFT, and evaluates
  (1/n) A^T T(w) A with three FFTs per column, O(n log n * p).

The naive path is kept permanently as the reference and as the fallback for
tiny n where FFT overhead dominates. Estimators: per-chain SV, the
chain-average of locally-centered SVs (A-SV), and the globally-centered SV
(G-SV), which by linearity equals the chain-average of per-chain SVs about
the global mean.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import get_kernels
from .chains import global_mean
from .errors import BandwidthError, ShapeError

# below this length the fast path silently computes via the naive sum
FAST_MIN_N = 64


@dataclass(frozen=True)
class SvEstimate:
    """Symmetric p x p long-run covariance estimate with provenance.

    ``min_eigenvalue`` flags indefiniteness (estimates at small n may fail
    to be positive definite; they are reported, not repaired).
    """

    matrix: np.ndarray
    estimator: str  # "SV-chain" | "A-SV" | "G-SV"
    path: str  # "naive" | "fast"
    b_n: int
    window: str
    min_eigenvalue: float


@dataclass(frozen=True)
class CirculantEmbedding:
    """Length-2n circulant extension of the Toeplitz weight matrix.

    ``wstar`` is (1, w_1, ..., w_{n-1}, 0, w_{n-1}, ..., w_1) and
    ``eigenvalues`` its length-2n DFT (real up to rounding, since wstar is
    even); the leading n x n block of the circulant equals T(w).
    """

    wstar: np.ndarray
    eigenvalues: np.ndarray
    n: int
    b_n: int
    window: str


def build_embedding(window, bandwidth, n):
    """Circulant embedding of T(w) for chains of length ``n``."""
    b_n = bandwidth.b_n
    if b_n > n:
        raise BandwidthError(f"b_n={b_n} exceeds n={n}")
    wk = window.weights(b_n, n)
    wk[0] = 1.0
    wstar = np.concatenate([wk, [0.0], wk[1:][::-1]])
    eigenvalues = np.fft.fft(wstar)
    return CirculantEmbedding(wstar=wstar, eigenvalues=eigenvalues, n=n,
                              b_n=b_n, window=window.name)


def fast_sv(centered, embedding):
    """(1/n) A^T T(w) A via the circulant embedding.

    ``centered`` is the n x p matrix of deviations (about whichever center
    the caller chose). Columns are zero-padded to length 2n, transformed,
    scaled by the circulant eigenvalues, inverse-transformed, truncated to
    the first n rows, and premultiplied by the transpose.
    """
    a = np.asarray(centered, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    n = embedding.n
    if a.shape[0] != n:
        raise ShapeError(f"data has {a.shape[0]} rows, embedding built for n={n}")
    # real-input halves of the length-2n transforms; rows contiguous for speed
    at = np.ascontiguousarray(a.T)
    spec = np.fft.rfft(at, n=2 * n, axis=1)
    spec *= embedding.eigenvalues[: n + 1]
    ta = np.fft.irfft(spec, n=2 * n, axis=1)[:, :n]
    return at @ ta.T / n


def _naive_sv_matrix(dev, window, b_n, backend=None):
    kern = get_kernels(backend)
    weights = window.weights(b_n, b_n)
    return kern.sv_accumulate(np.ascontiguousarray(dev), weights) / dev.shape[0]


def _sv_matrix(dev, window, b_n, path, embedding=None, backend=None):
    """Raw (unsymmetrized) SV matrix for one centered chain; returns the
    matrix and the path actually taken."""
    if path == "fast" and embedding is not None:
        return fast_sv(dev, embedding), "fast"
    return _naive_sv_matrix(dev, window, b_n, backend=backend), "naive"


def _symmetrize(mat):
    return 0.5 * (mat + mat.T)


def _finish(mat, estimator, path, b_n, window_name):
    sym = _symmetrize(mat)
    min_eig = float(np.linalg.eigvalsh(sym).min())
    return SvEstimate(matrix=sym, estimator=estimator, path=path, b_n=b_n,
                      window=window_name, min_eigenvalue=min_eig)


def _check_bandwidth(bandwidth, n):
    # lags beyond n - 1 cannot enter the sum, so b_n = n is the hard limit
    if bandwidth.b_n > n:
        raise BandwidthError(f"b_n={bandwidth.b_n} exceeds n={n}")


def sv_naive(chains, s, window, bandwidth, centering="local", backend=None):
    """Single-chain SV estimate by direct summation:
    sum over |k| < b_n of w(k/b_n) times the lag-k autocovariance about the
    chosen center (local: the chain's own mean; global: the global mean)."""
    _check_bandwidth(bandwidth, chains.n)
    if centering == "local":
        center = chains.chain(s).mean(axis=0)
    elif centering == "global":
        center = global_mean(chains)
    else:
        raise ValueError(f"unknown centering {centering!r}")
    dev = chains.chain(s) - center
    mat = _naive_sv_matrix(dev, window, bandwidth.b_n, backend=backend)
    return _finish(mat, "SV-chain", "naive", bandwidth.b_n, window.name)


def _chain_average(chains, window, bandwidth, centering, path, backend=None):
    _check_bandwidth(bandwidth, chains.n)
    n = chains.n
    embedding = None
    if path == "fast" and n >= FAST_MIN_N:
        embedding = build_embedding(window, bandwidth, n)
    gm = global_mean(chains) if centering == "global" else None
    total = np.zeros((chains.p, chains.p))
    used = "naive"
    for s in range(chains.m):
        center = gm if centering == "global" else chains.chain(s).mean(axis=0)
        dev = chains.chain(s) - center
        mat, used = _sv_matrix(dev, window, bandwidth.b_n, path,
                               embedding=embedding, backend=backend)
        total += mat
    return total / chains.m, used


def asv(chains, window, bandwidth, path="naive", backend=None):
    """Average SV estimator: mean over chains of locally-centered SVs."""
    mat, used = _chain_average(chains, window, bandwidth, "local", path, backend)
    return _finish(mat, "A-SV", used, bandwidth.b_n, window.name)


def gsv(chains, window, bandwidth, backend=None):
    """Globally-centered SV estimator (naive path): the weighted, truncated
    sum of chain-averaged globally-centered autocovariances, computed via
    linearity as the mean of per-chain SVs about the global mean."""
    mat, used = _chain_average(chains, window, bandwidth, "global", "naive", backend)
    return _finish(mat, "G-SV", used, bandwidth.b_n, window.name)


def gsv_fast(chains, window, bandwidth):
    """Globally-centered SV via the circulant path (per chain, averaged)."""
    mat, used = _chain_average(chains, window, bandwidth, "global", "fast")
    return _finish(mat, "G-SV", used, bandwidth.b_n, window.name)


def sv_estimate(chains, window, bandwidth, estimator="gsv", path="fast",
                backend=None):
    """Dispatch helper used by the CLI: estimator in {"asv", "gsv"}."""
    if estimator == "asv":
        return asv(chains, window, bandwidth, path=path, backend=backend)
    if estimator == "gsv":
        if path == "fast":
            return gsv_fast(chains, window, bandwidth)
        return gsv(chains, window, bandwidth, backend=backend)
    raise ValueError(f"unknown estimator {estimator!r}")
