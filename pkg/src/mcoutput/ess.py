"""Multivariate effective sample size and Wald confidence regions.

ESS rescales the total sample count mn by the p-th root of the determinant
ratio between the lag-0 covariance and the long-run covariance estimate.
The lag-0 matrix is always the chain-average of per-chain *locally*-centered
lag-0 covariances: both centerings are consistent for it, but the local one
typically underestimates, which makes the reported ESS conservative and so
guards against stopping a simulation too early.
"""

from dataclasses import dataclass

import numpy as np

from ._special import chi2_quantile
from .acvf import acvf
from .chains import global_mean
from .errors import DegenerateLag0, IndefiniteSigma, SingularCovariance

# determinants at or below this are treated as nonpositive
_DET_FLOOR = 1e-300


@dataclass(frozen=True)
class EssResult:
    ess: float
    lag0: np.ndarray
    sigma: object  # SvEstimate
    mn: int


@dataclass(frozen=True)
class WaldRegion:
    """Ellipsoid {mu : (center - mu)^T scale^{-1} (center - mu) <= q}."""

    center: np.ndarray
    scale: np.ndarray
    level: float
    chi2_quantile: float


def lag0_local(chains):
    """Chain-average of per-chain locally-centered lag-0 covariances."""
    mats = [acvf(chains, s, 0, centering="local") for s in range(chains.m)]
    return np.mean(mats, axis=0)


def _logdet_psd(matrix):
    """log(det) via symmetric eigendecomposition; None when the determinant
    is nonpositive (or below the 1e-300 floor)."""
    vals = np.linalg.eigvalsh(matrix)
    if vals.min() <= 0.0:
        return None
    logdet = float(np.log(vals).sum())
    if logdet <= np.log(_DET_FLOOR):
        return None
    return logdet


def ess(chains, sigma):
    """Effective sample size mn * (det lag0 / det Sigma-hat)^(1/p).

    ``sigma`` is an SvEstimate (A-SV for the locally-centered variant,
    G-SV for the globally-centered one).
    """
    lag0 = lag0_local(chains)
    ld0 = _logdet_psd(lag0)
    if ld0 is None:
        raise DegenerateLag0("lag-0 covariance has nonpositive determinant")
    lds = _logdet_psd(sigma.matrix)
    if lds is None:
        raise IndefiniteSigma(
            "long-run covariance estimate has nonpositive determinant; "
            "increase n")
    mn = chains.m * chains.n
    value = mn * np.exp((ld0 - lds) / chains.p)
    return EssResult(ess=float(value), lag0=lag0, sigma=sigma, mn=mn)


def wald_region(chains, sigma, level=0.95):
    """95%-style Wald region for the mean: center at the global mean, scale
    Sigma-hat/(mn), threshold the chi-square quantile at ``level``."""
    mn = chains.m * chains.n
    return WaldRegion(center=global_mean(chains),
                      scale=sigma.matrix / mn,
                      level=level,
                      chi2_quantile=chi2_quantile(level, chains.p))


def wald_covers(region, mu):
    """True iff ``mu`` lies inside the Wald region."""
    if _logdet_psd(region.scale) is None:
        raise SingularCovariance("scale matrix is singular or indefinite")
    diff = np.asarray(mu, dtype=np.float64) - region.center
    try:
        form = float(diff @ np.linalg.solve(region.scale, diff))
    except np.linalg.LinAlgError:
        raise SingularCovariance("scale matrix is singular") from None
    return form <= region.chi2_quantile
