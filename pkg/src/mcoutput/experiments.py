"""Experiment harness: simulation presets, coverage tables, running plots,
and the naive-vs-fast benchmark.

Experiments are driven by an :class:`ExperimentConfig` (from a TOML/JSON
file plus flag overrides). Replication r of an experiment uses seed + r, so
replications are independent, can run in parallel, and reproduce exactly;
aggregation order is fixed by r. All emitters produce tidy CSV rows; plot
rendering is out of scope.
"""

import concurrent.futures
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .acvf import acf_rows, default_max_lag
from .chains import ChainSet
from .errors import ConfigError, DegenerateLag0, IndefiniteSigma, SingularCovariance
from .ess import ess, wald_covers, wald_region
from .oracles import boomerang_mean, var_acvf, var_oracle
from .samplers import (BOOMERANG_SETTING1, BOOMERANG_SETTING2, BoomerangTarget,
                       MixtureTarget, VarProcess, gibbs_boomerang, rwm_mixture,
                       simulate_var1)
from .windows import get_window, resolve_bandwidth

MODELS = ("var1", "mixture", "boomerang")


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one experiment run; see the README for the file schema."""

    model: str = "var1"
    m: int = 5
    n: int = 1000
    n_grid: tuple = ()
    replications: int = 300
    seed: int = 0
    estimators: tuple = ("asv", "gsv")
    bandwidth: object = "sqrt"  # "sqrt" or an explicit integer
    window: str = "bartlett"
    max_lag: object = None
    workers: int = 1
    model_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.m < 1:
            raise ConfigError("m must be >= 1")
        grid = tuple(int(v) for v in self.n_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "estimators", tuple(self.estimators))

    @property
    def ns(self):
        return self.n_grid if self.n_grid else (self.n,)


def config_from_mapping(doc, **overrides):
    """Build a config from a parsed TOML/JSON mapping plus overrides."""
    known = {f for f in ExperimentConfig.__dataclass_fields__}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(doc)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


# -- model construction -----------------------------------------------------

def rotation(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def default_var_process(params=None):
    """The 2-d demo process: eigenvalues (.999, .001) in a pi/4-rotated
    frame, innovation correlation 0.9. ``params`` may override "phi",
    "omega", "eigenvalues", or "omega_rho"."""
    params = dict(params or {})
    if "phi" in params:
        phi = np.asarray(params["phi"], dtype=np.float64)
    else:
        eigs = np.asarray(params.get("eigenvalues", (0.999, 0.001)))
        q = rotation(math.pi / 4.0)
        phi = q @ np.diag(eigs) @ q.T
    if "omega" in params:
        omega = np.asarray(params["omega"], dtype=np.float64)
    else:
        rho = float(params.get("omega_rho", 0.9))
        p = phi.shape[0]
        omega = rho ** np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    return VarProcess(phi=phi, omega=omega)


def mixture_target(params=None):
    params = dict(params or {})
    kwargs = {}
    for key in ("weights", "means", "variances"):
        if key in params:
            kwargs[key] = tuple(params[key])
    if "proposal_sd" in params:
        kwargs["proposal_sd"] = float(params["proposal_sd"])
    return MixtureTarget(**kwargs)


def boomerang_target(params=None):
    params = dict(params or {})
    setting = params.get("setting")
    if setting == 1:
        return BOOMERANG_SETTING1
    if setting == 2:
        return BOOMERANG_SETTING2
    if {"a", "b", "c"} <= set(params):
        return BoomerangTarget(a=float(params["a"]), b=float(params["b"]),
                               c=float(params["c"]))
    if setting is None and not params:
        return BOOMERANG_SETTING1
    raise ConfigError("boomerang model needs setting=1|2 or explicit a, b, c")


# -- starting-value presets (recorded here for reproducibility) -------------

_ORACLE_CACHE = {}


def _var_oracle_cached(phi, omega):
    """var_oracle is pure but the certified tail sum is not free; the
    harness calls it once per replication, so memoize per process."""
    key = (phi.tobytes(), omega.tobytes(), phi.shape[0])
    if key not in _ORACLE_CACHE:
        _ORACLE_CACHE[key] = var_oracle(phi, omega)
    return _ORACLE_CACHE[key]


def var_start_preset(process, m):
    """Dispersed starts: +/-3 marginal stationary standard deviations along
    each axis in turn, then the origin, cycling for larger m."""
    psi = _var_oracle_cached(process.phi, process.omega).psi
    sd = np.sqrt(np.diag(psi))
    p = len(sd)
    points = []
    for i in range(p):
        for sign in (1.0, -1.0):
            e = np.zeros(p)
            e[i] = sign * 3.0 * sd[i]
            points.append(e)
    points.append(np.zeros(p))
    return np.array([points[s % len(points)] for s in range(m)])


def mixture_start_preset(target, m):
    """Alternate the chains over the two mode locations."""
    return np.array([target.means[s % 2] for s in range(m)], dtype=np.float64)


def boomerang_start_preset(target, m):
    """Fixed spread over both arms of the target and the saddle region."""
    pts = np.array([(0.0, 8.0), (8.0, 0.0), (2.0, 2.0), (0.0, 0.0), (6.0, 6.0)])
    return np.array([pts[s % len(pts)] for s in range(m)])


def simulate_model(config, seed, n=None):
    """Simulate one replication of the configured model."""
    n = int(n if n is not None else max(config.ns))
    params = config.model_params
    if config.model == "var1":
        proc = default_var_process(params)
        starts = params.get("starts")
        starts = (np.asarray(starts, dtype=np.float64) if starts is not None
                  else var_start_preset(proc, config.m))
        return simulate_var1(proc, config.m, n, starts, seed)
    if config.model == "mixture":
        target = mixture_target(params)
        starts = params.get("starts")
        starts = (np.asarray(starts, dtype=np.float64) if starts is not None
                  else mixture_start_preset(target, config.m))
        return rwm_mixture(target, config.m, n, starts, seed)
    target = boomerang_target(params)
    starts = params.get("starts")
    starts = (np.asarray(starts, dtype=np.float64) if starts is not None
              else boomerang_start_preset(target, config.m))
    return gibbs_boomerang(target, config.m, n, starts, seed)


def true_mean(config):
    """Known mean of the configured target (VAR: 0; mixture: weighted mode
    mean; boomerang: quadrature oracle)."""
    if config.model == "var1":
        p = default_var_process(config.model_params).p
        return np.zeros(p)
    if config.model == "mixture":
        t = mixture_target(config.model_params)
        return np.array([sum(w * mu for w, mu in zip(t.weights, t.means))])
    return boomerang_mean(boomerang_target(config.model_params))


def model_oracle(config):
    """OracleVar bundle for VAR configs, None otherwise."""
    if config.model != "var1":
        return None
    proc = default_var_process(config.model_params)
    return _var_oracle_cached(proc.phi, proc.omega)


# -- ACF emission ------------------------------------------------------------

ACF_HEADER = ("lag", "chain", "component", "centering", "value", "oracle")


def run_acf(config, chains=None, include_oracle=True):
    """Rows (lag, chain, component, centering, value, oracle) for ACF plots.

    Averaged rows use chain id 0; the oracle column holds the true
    autocorrelation when the model has one (VAR), else the empty string.
    """
    if chains is None:
        chains = simulate_model(config, config.seed)
    max_lag = config.max_lag if config.max_lag else default_max_lag(chains.n)
    rows = acf_rows(chains, max_lag=max_lag)
    oracle = model_oracle(config) if include_oracle else None
    if oracle is not None and oracle.psi.shape[0] != chains.p:
        oracle = None
    truth = {}
    if oracle is not None:
        gamma0 = np.diag(oracle.psi)
        for k in range(max_lag + 1):
            gk = np.diag(var_acvf(oracle, k))
            for i in range(chains.p):
                truth[(k, i + 1)] = gk[i] / gamma0[i]
    out = []
    for (lag, chain, component, centering, value) in rows:
        out.append((lag, chain, component, centering, value,
                    truth.get((lag, component), "")))
    return out


# -- coverage ----------------------------------------------------------------

@dataclass(frozen=True)
class CoverageRow:
    n: int
    m: int
    estimator: str
    coverage: float
    replications: int
    std_error: float
    indefinite: int


@dataclass(frozen=True)
class CoverageTable:
    rows: tuple

    HEADER = ("n", "m", "estimator", "coverage", "replications",
              "std_error", "indefinite")

    def as_records(self):
        return [(r.n, r.m, r.estimator, r.coverage, r.replications,
                 r.std_error, r.indefinite) for r in self.rows]


def _coverage_one(config, n, r, mu, level):
    chains = simulate_model(config, config.seed + r, n=n)
    window = get_window(config.window)
    bandwidth = resolve_bandwidth(config.bandwidth, n)
    out = {}
    for estimator in config.estimators:
        sv = spectral.sv_estimate(chains, window, bandwidth,
                                  estimator=estimator, path="fast")
        try:
            out[estimator] = wald_covers(wald_region(chains, sv, level), mu)
        except SingularCovariance:
            out[estimator] = None
    return out


def run_coverage(config, level=0.95):
    """Empirical Wald-region coverage of the known mean, per (n, estimator).

    Replications with an indefinite covariance estimate are counted in the
    ``indefinite`` column and excluded from the coverage denominator.
    """
    mu = true_mean(config)
    rows = []
    for n in config.ns:
        results = _map_replications(
            _coverage_one, config, [(config, n, r, mu, level)
                                    for r in range(config.replications)])
        for estimator in config.estimators:
            vals = [res[estimator] for res in results]
            bad = sum(1 for v in vals if v is None)
            good = [v for v in vals if v is not None]
            denom = len(good)
            cov = sum(good) / denom if denom else math.nan
            se = math.sqrt(cov * (1.0 - cov) / denom) if denom else math.nan
            rows.append(CoverageRow(n=n, m=config.m, estimator=estimator,
                                    coverage=cov, replications=denom,
                                    std_error=se, indefinite=bad))
    return CoverageTable(rows=tuple(rows))


def _map_replications(fn, config, argtuples):
    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(config.workers) as pool:
            return list(pool.map(_star(fn), argtuples))
    return [fn(*args) for args in argtuples]


class _star:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, args):
        return self.fn(*args)


# -- running plots -----------------------------------------------------------

RUNNING_HEADER = ("n", "replication", "estimator", "log_frobenius",
                  "log_ess_per_mn")


def _running_one(config, r):
    n_max = max(config.ns)
    chains = simulate_model(config, config.seed + r, n=n_max)
    window = get_window(config.window)
    rows = []
    for n in config.ns:
        prefix = ChainSet(chains.data[:, :n, :])
        bandwidth = resolve_bandwidth(config.bandwidth, n)
        for estimator in config.estimators:
            sv = spectral.sv_estimate(prefix, window, bandwidth,
                                      estimator=estimator, path="fast")
            log_frob = math.log(np.linalg.norm(sv.matrix))
            try:
                log_ess = math.log(ess(prefix, sv).ess / (prefix.m * prefix.n))
            except (IndefiniteSigma, DegenerateLag0):
                log_ess = math.nan
            rows.append((n, r, estimator, log_frob, log_ess))
    return rows


def run_running_plots(config):
    """Rows (n, replication, estimator, log ||Sigma-hat||_F, log(ESS/mn))
    at each checkpoint of the n-grid, using prefixes of one long run per
    replication."""
    if len(config.ns) < 2:
        raise ConfigError("running plots need an n_grid with >= 2 checkpoints")
    results = _map_replications(
        _running_one, config,
        [(config, r) for r in range(config.replications)])
    rows = []
    for chunk in results:
        rows.extend(chunk)
    return rows


# -- benchmark ---------------------------------------------------------------

BENCH_HEADER = ("op", "backend", "path", "n", "p", "b_n", "m", "seconds")


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def run_benchmark(sizes=((10_000, 2), (100_000, 2)), m=2, bandwidths=("sqrt",),
                  repeats=5, seed=0, compare_backends=True):
    """Naive-vs-fast wall time for the globally-centered estimator.

    Returns rows (op, backend, path, n, p, b_n, m, seconds). When the
    compiled kernels are available and ``compare_backends`` is set, the
    naive path is timed under both backends.
    """
    from ._backend import BACKEND

    window = get_window("bartlett")
    rng = np.random.default_rng(seed)
    rows = []
    for n, p in sizes:
        data = rng.standard_normal((m, n, p))
        chains = ChainSet(data)
        for bw in bandwidths:
            bandwidth = resolve_bandwidth(bw, n)
            rows.append(("gsv", BACKEND, "fast", n, p, bandwidth.b_n, m,
                         _median_time(lambda: spectral.gsv_fast(
                             chains, window, bandwidth), repeats)))
            backends = [None]
            if compare_backends and BACKEND == "compiled":
                backends = ["compiled", "pure"]
            for be in backends:
                label = be if be is not None else BACKEND
                rows.append(("gsv", label, "naive", n, p, bandwidth.b_n, m,
                             _median_time(lambda: spectral.gsv(
                                 chains, window, bandwidth, backend=be),
                                 repeats)))
    return rows


def benchmark_speedup(rows, n, b_n):
    """Fast-path speedup over the active backend's naive path at (n, b_n)."""
    fast = [r[-1] for r in rows if r[2] == "fast" and r[3] == n and r[5] == b_n]
    naive = [r[-1] for r in rows
             if r[2] == "naive" and r[3] == n and r[5] == b_n and r[1] != "pure"]
    if not naive:
        naive = [r[-1] for r in rows
                 if r[2] == "naive" and r[3] == n and r[5] == b_n]
    if not fast or not naive:
        raise ValueError("no benchmark rows for the requested size")
    return naive[0] / fast[0]
