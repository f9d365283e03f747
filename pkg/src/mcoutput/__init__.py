"""Output analysis for parallel-chain MCMC.

Globally-centered autocovariance/autocorrelation estimation, locally- and
globally-centered spectral variance estimators with a fast circulant
computation path, multivariate effective sample size, built-in seeded
samplers, analytic oracles, and an experiment harness.
"""

__version__ = "0.1.0"

from ._backend import backend
from .acvf import (AcvfSequence, BiasTarget, acf, acvf, acvf_sequence,
                   averaged_global_acf, averaged_global_acvf, default_max_lag,
                   gacvf_bias_target)
from .chains import (ChainSet, MeanSummary, chain_mean, chain_means,
                     global_mean, load_chains, load_csv, load_json,
                     mean_summary, save_csv, save_json)
from .ess import EssResult, WaldRegion, ess, lag0_local, wald_covers, wald_region
from .oracles import (OracleVar, boomerang_logdensity, boomerang_mean,
                      var_acvf, var_longrun, var_oracle, var_stationary_cov)
from .samplers import (BOOMERANG_SETTING1, BOOMERANG_SETTING2, BoomerangTarget,
                       MixtureTarget, VarProcess, gibbs_boomerang,
                       mixture_density, rwm_mixture, simulate_var1)
from .spectral import (CirculantEmbedding, SvEstimate, asv, build_embedding,
                       fast_sv, gsv, gsv_fast, sv_estimate, sv_naive)
from .windows import (BARTLETT, Bandwidth, LagWindow, WindowCheckReport,
                      bartlett, default_bandwidth, get_window,
                      resolve_bandwidth, window_check)

__all__ = [name for name in dir() if not name.startswith("_")]
