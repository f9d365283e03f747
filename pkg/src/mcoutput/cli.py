"""Command-line interface.

Subcommands: simulate, acf, sv, ess, coverage, running, bench, oracle.
Experiment subcommands read an optional TOML/JSON config file; flags
override file values, and --seed is mandatory wherever simulation happens.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from ._backend import backend
from .chains import load_chains, save_csv
from .errors import ConfigError, McOutputError
from .experiments import (ACF_HEADER, BENCH_HEADER, RUNNING_HEADER,
                          CoverageTable, benchmark_speedup,
                          config_from_mapping, model_oracle, run_acf,
                          run_benchmark, run_coverage, run_running_plots,
                          simulate_model)
from .ess import ess
from .oracles import var_acvf
from .spectral import sv_estimate
from .windows import get_window, resolve_bandwidth


def _load_config_file(path):
    if path is None:
        return {}
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    with open(path, "rb") as f:
        return tomllib.load(f)


def _experiment_config(args, require_seed=True):
    doc = _load_config_file(getattr(args, "config", None))
    overrides = {}
    for key in ("model", "m", "n", "replications", "seed", "bandwidth",
                "window", "max_lag", "workers"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "n_grid", None):
        overrides["n_grid"] = tuple(args.n_grid)
    if getattr(args, "estimator", None):
        overrides["estimators"] = (args.estimator,)
    if getattr(args, "params", None):
        doc = dict(doc)
        doc.setdefault("model_params", {})
        doc["model_params"] = {**doc["model_params"],
                               **_load_config_file(args.params)}
    config = config_from_mapping(doc, **overrides)
    if require_seed and "seed" not in doc and getattr(args, "seed", None) is None:
        raise ConfigError("--seed is required for experiment subcommands")
    return config


def _bandwidth_arg(text):
    return text if text == "sqrt" else int(text)


def _write_rows(path, header, rows):
    def fmt(v):
        if isinstance(v, float):
            return repr(v)
        return v

    out = sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8",
                                                      newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    finally:
        if out is not sys.stdout:
            out.close()


def _matrix_list(mat):
    return np.asarray(mat).tolist()


# -- subcommand handlers -----------------------------------------------------

def _cmd_simulate(args):
    config = _experiment_config(args)
    chains = simulate_model(config, config.seed)
    save_csv(chains, args.out if args.out else sys.stdout)
    return 0


def _cmd_acf(args):
    if args.input:
        chains = load_chains(args.input)
        declared = bool(args.model or args.config)
        config = _experiment_config(args, require_seed=False)
        rows = run_acf(config, chains=chains, include_oracle=declared)
    else:
        config = _experiment_config(args)
        rows = run_acf(config)
    _write_rows(args.out, ACF_HEADER, rows)
    return 0


def _sv_from_args(args, chains):
    window = get_window(args.window)
    bandwidth = resolve_bandwidth(args.bandwidth, chains.n)
    return sv_estimate(chains, window, bandwidth, estimator=args.estimator,
                       path=args.path)


def _cmd_sv(args):
    chains = load_chains(args.input)
    sv = _sv_from_args(args, chains)
    json.dump({
        "estimator": sv.estimator,
        "path": sv.path,
        "window": sv.window,
        "b_n": sv.b_n,
        "matrix": _matrix_list(sv.matrix),
        "min_eigenvalue": sv.min_eigenvalue,
        "indefinite": sv.min_eigenvalue <= 0.0,
    }, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_ess(args):
    chains = load_chains(args.input)
    sv = _sv_from_args(args, chains)
    result = ess(chains, sv)
    json.dump({
        "ess": result.ess,
        "ess_per_mn": result.ess / result.mn,
        "b_n": sv.b_n,
        "estimator": sv.estimator,
    }, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_coverage(args):
    config = _experiment_config(args)
    table = run_coverage(config, level=args.level)
    _write_rows(args.out, CoverageTable.HEADER, table.as_records())
    return 0


def _cmd_running(args):
    config = _experiment_config(args)
    rows = run_running_plots(config)
    _write_rows(args.out, RUNNING_HEADER, rows)
    return 0


def _cmd_bench(args):
    sizes = [(n, args.p) for n in (args.n_list or [10_000, 100_000])]
    rows = run_benchmark(sizes=sizes, m=args.m or 2,
                         bandwidths=args.bandwidths or ["sqrt"],
                         repeats=args.repeats)
    _write_rows(args.out, BENCH_HEADER, rows)
    for n, p in sizes:
        b_n = resolve_bandwidth((args.bandwidths or ["sqrt"])[0], n).b_n
        ratio = benchmark_speedup(rows, n, b_n)
        note = "" if (n < 10_000 or ratio > 1.0) else "  [expected fast < naive]"
        print(f"# n={n} b_n={b_n}: fast speedup {ratio:.1f}x{note}",
              file=sys.stderr)
    return 0


def _cmd_oracle(args):
    config = _experiment_config(args, require_seed=False)
    oracle = model_oracle(config)
    if oracle is None:
        raise ConfigError(f"model {config.model!r} has no closed-form oracle")
    max_lag = args.max_lag if args.max_lag is not None else 5
    json.dump({
        "psi": _matrix_list(oracle.psi),
        "gamma": [_matrix_list(var_acvf(oracle, k)) for k in range(max_lag + 1)],
        "sigma": _matrix_list(oracle.sigma),
        "sigma_tail": oracle.sigma_tail,
        "phi1": _matrix_list(oracle.phi1),
        "phi1_tail": oracle.phi1_tail,
    }, sys.stdout)
    sys.stdout.write("\n")
    return 0


# -- parser ------------------------------------------------------------------

def _add_config_flags(sub, seed=True):
    sub.add_argument("--config", help="TOML or JSON experiment config file")
    sub.add_argument("--params", help="TOML/JSON file with model parameters")
    sub.add_argument("--model", choices=("var1", "mixture", "boomerang"))
    sub.add_argument("--m", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--replications", type=int)
    sub.add_argument("--workers", type=int)
    sub.add_argument("--bandwidth", type=_bandwidth_arg,
                     help='truncation point: integer or "sqrt"')
    sub.add_argument("--window", choices=("bartlett",))
    if seed:
        sub.add_argument("--seed", type=int)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcoutput",
        description="Output analysis for parallel-chain MCMC "
                    f"(kernel backend: {backend()})")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="simulate chains, write chain CSV")
    _add_config_flags(sim)
    sim.add_argument("--out", help="output CSV path (default stdout)")
    sim.set_defaults(handler=_cmd_simulate)

    acf_p = subs.add_parser("acf", help="emit ACF CSV (simulated or from file)")
    _add_config_flags(acf_p)
    acf_p.add_argument("--input", help="existing chain CSV/JSON instead of simulating")
    acf_p.add_argument("--max-lag", dest="max_lag", type=int)
    acf_p.add_argument("--out", help="output CSV path (default stdout)")
    acf_p.set_defaults(handler=_cmd_acf)

    for name, handler, help_text in (
            ("sv", _cmd_sv, "long-run covariance estimate as JSON"),
            ("ess", _cmd_ess, "effective sample size as JSON")):
        p = subs.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="chain CSV/JSON file")
        p.add_argument("--estimator", choices=("asv", "gsv"), default="gsv")
        p.add_argument("--path", choices=("naive", "fast"), default="fast")
        p.add_argument("--window", choices=("bartlett",), default="bartlett")
        p.add_argument("--bandwidth", type=_bandwidth_arg, default="sqrt")
        p.set_defaults(handler=handler)

    cov = subs.add_parser("coverage", help="Wald-region coverage table")
    _add_config_flags(cov)
    cov.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    cov.add_argument("--estimator", choices=("asv", "gsv"),
                     help="restrict to a single estimator")
    cov.add_argument("--level", type=float, default=0.95)
    cov.add_argument("--out", help="output CSV path (default stdout)")
    cov.set_defaults(handler=_cmd_coverage)

    run = subs.add_parser("running", help="running-plot data over an n-grid")
    _add_config_flags(run)
    run.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    run.add_argument("--out", help="output CSV path (default stdout)")
    run.set_defaults(handler=_cmd_running)

    bench = subs.add_parser("bench", help="naive vs fast (and backend) timings")
    bench.add_argument("--n-list", type=int, nargs="+")
    bench.add_argument("--p", type=int, default=2)
    bench.add_argument("--m", type=int)
    bench.add_argument("--bandwidths", type=_bandwidth_arg, nargs="+")
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--out", help="output CSV path (default stdout)")
    bench.set_defaults(handler=_cmd_bench)

    orc = subs.add_parser("oracle", help="closed-form VAR truth as JSON")
    _add_config_flags(orc, seed=False)
    orc.add_argument("--max-lag", dest="max_lag", type=int)
    orc.set_defaults(handler=_cmd_oracle)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except McOutputError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
