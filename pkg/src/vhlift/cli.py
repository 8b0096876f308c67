"""Command-line front end: synthesis, solving, frequency estimation, and
the two Monte Carlo experiment harnesses.

Every subcommand is a thin adapter around the library modules; it parses
and validates options, calls the library, and writes files.  Option
precedence is flags over --config JSON over built-in defaults.  Exit codes:
0 success, 2 usage or validation problem, 3 solver hit the iteration cap,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .bench import (
    PhaseTransitionConfig,
    SweepConfig,
    grid_to_csv,
    grid_to_svg,
    run_phase_transition,
    run_snr_sweep,
    sweep_to_csv,
    sweep_to_svg,
)
from .estimate import (
    default_grid,
    noise_subspace_mmv,
    noise_subspace_single,
    noise_subspace_vhm,
    pick_peaks,
    pseudospectrum,
    recover_amplitudes,
    save_pseudospectrum_csv,
    sources_to_dict,
)
from .figures import curve_svg
from .lift import LiftShape
from .model import (
    add_noise,
    apply_measurement,
    incoherence_diagnostic,
    load_problem,
    sample_model,
    sample_subspace,
    save_problem,
    synthesize_data_matrix,
)
from .solver import SolverConfig, save_report, solve_vhl

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONV = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _merged(args, defaults: dict) -> dict:
    """flags > config-file keys > defaults."""
    opts = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise CliError("config file must hold a JSON object")
        unknown = sorted(set(doc) - set(defaults))
        if unknown:
            raise CliError("unknown config keys: %s" % ", ".join(unknown))
        opts.update(doc)
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _positive_int(opts, key) -> int:
    try:
        v = int(opts[key])
    except (TypeError, ValueError):
        raise CliError("%s must be an integer" % key) from None
    if v < 1:
        raise CliError("%s must be positive, got %d" % (key, v))
    return v


def _int_list(text) -> tuple:
    try:
        vals = tuple(int(tok) for tok in str(text).split(","))
    except ValueError:
        raise CliError("expected a comma-separated integer list, got %r"
                       % (text,)) from None
    if not vals:
        raise CliError("empty value list")
    return vals


def _float_list(text) -> tuple:
    try:
        return tuple(float(tok) for tok in str(text).split(","))
    except ValueError:
        raise CliError("expected a comma-separated number list, got %r"
                       % (text,)) from None


def _solver_config(opts) -> SolverConfig:
    try:
        return SolverConfig(rho=float(opts["rho"]),
                            max_iters=_positive_int(opts, "max_iters"),
                            tol_rel=float(opts["tol"]),
                            svt_rank_cap=None if opts.get("rank_cap") is None
                            else _positive_int(opts, "rank_cap"))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _shape(n, s, n1) -> LiftShape:
    try:
        return LiftShape.default(n, s, n1=None if n1 is None else int(n1))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _out(opts, name: str) -> str:
    return os.path.join(opts["out_dir"], name)


# ---------------------------------------------------------------- synth

SYNTH_DEFAULTS = {
    "n": 64, "s": 3, "r": 4, "seed": 0, "distribution": "gaussian",
    "snr": None, "delta": None, "orient_law": "gaussian", "out_dir": ".",
}


def cmd_synth(args) -> int:
    opts = _merged(args, SYNTH_DEFAULTS)
    n = _positive_int(opts, "n")
    s = _positive_int(opts, "s")
    r = _positive_int(opts, "r")
    if n < s:
        raise CliError("need n >= s, got n=%d s=%d" % (n, s))
    seed = int(opts["seed"])
    rng = np.random.default_rng(seed)
    try:
        model = sample_model(r, s, seed=rng,
                             delta=None if opts["delta"] is None
                             else float(opts["delta"]),
                             orient_law=str(opts["orient_law"]))
        subspace = sample_subspace(str(opts["distribution"]), n, s, seed=rng)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    subspace.seed = seed
    X = synthesize_data_matrix(model, n)
    y = apply_measurement(X, subspace)
    X_out = X if opts["snr"] is None else add_noise(X, float(opts["snr"]),
                                                    seed=rng)
    diag = incoherence_diagnostic(model, _shape(n, s, None))
    save_problem(_out(opts, "model.json"), model, subspace)
    io.write_complex_matrix_csv(_out(opts, "X.csv"), X_out)
    io.write_complex_vector_csv(_out(opts, "y.csv"), y)
    print("synth: n=%d s=%d r=%d dist=%s mu1=%.4g -> model.json X.csv y.csv"
          % (n, s, r, subspace.distribution, diag.mu1))
    return EXIT_OK


# ---------------------------------------------------------------- solve

SOLVE_DEFAULTS = {
    "model": "model.json", "y": "y.csv", "out_dir": ".",
    "rho": 1.0, "tol": 1e-7, "max_iters": 5000, "rank_cap": None, "n1": None,
}


def cmd_solve(args) -> int:
    opts = _merged(args, SOLVE_DEFAULTS)
    _, subspace = load_problem(opts["model"])
    y = io.read_complex_vector_csv(opts["y"])
    if y.shape[0] != subspace.n:
        raise CliError("measurement length %d does not match the sensing "
                       "matrix (%d rows)" % (y.shape[0], subspace.n))
    shape = _shape(subspace.n, subspace.s, opts["n1"])
    report = solve_vhl(y, subspace, shape, _solver_config(opts))
    save_report(_out(opts, "report.json"), report)
    io.write_complex_matrix_csv(_out(opts, "Xhat.csv"), report.X_hat)
    print("solve: %s in %d iters, primal %.3e, dual %.3e, nuclear norm %.6g"
          % ("converged" if report.converged else "stopped",
             report.iters, report.primal_residual, report.dual_residual,
             report.nuclear_norm))
    return EXIT_OK if report.converged else EXIT_NONCONV


# ---------------------------------------------------------------- music

MUSIC_DEFAULTS = {
    "x": "X.csv", "r": None, "estimator": "vhm", "row": 0, "rows": None,
    "grid_step": 1e-4, "n1": None, "out_dir": ".", "svg": False,
}


def cmd_music(args) -> int:
    opts = _merged(args, MUSIC_DEFAULTS)
    if opts["r"] is None:
        raise CliError("--r (model order) is required")
    r = _positive_int(opts, "r")
    X = io.read_complex_matrix_csv(opts["x"])
    s, n = X.shape
    estimator = str(opts["estimator"])
    try:
        if estimator == "vhm":
            rows = s if opts["rows"] is None else _positive_int(opts, "rows")
            if rows > s:
                raise ValueError("--rows exceeds the %d data rows" % s)
            ns = noise_subspace_vhm(X[:rows], r, _shape(n, rows, opts["n1"]))
        elif estimator == "single":
            row = int(opts["row"])
            if not 0 <= row < s:
                raise ValueError("--row out of range for %d data rows" % s)
            ns = noise_subspace_single(X[row], r, _shape(n, 1, opts["n1"]))
        elif estimator == "mmv":
            ns = noise_subspace_mmv(X, r)
        else:
            raise ValueError("unknown estimator %r" % estimator)
        grid = default_grid(float(opts["grid_step"]))
        curve = pseudospectrum(ns, grid)
        peaks = pick_peaks(curve, r)
        sources = recover_amplitudes(X, peaks.taus)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    save_pseudospectrum_csv(_out(opts, "pseudospectrum.csv"), curve)
    doc = sources_to_dict(sources)
    doc["estimator"] = estimator
    doc["padded_peaks"] = peaks.padded
    with open(_out(opts, "sources.json"), "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    if opts["svg"]:
        svg = curve_svg(curve.grid, curve.values, peaks=peaks.taus,
                        title="pseudospectrum (%s, r=%d)" % (estimator, r))
        with open(_out(opts, "pseudospectrum.svg"), "w") as fh:
            fh.write(svg)
    print("music: estimator=%s taus_hat=%s residual=%.3e"
          % (estimator,
             " ".join("%.6f" % t for t in np.sort(sources.taus_hat)),
             sources.residual))
    return EXIT_OK


# ---------------------------------------------------------------- grids

PHASE_DEFAULTS = {
    "axis1": "r", "values1": "1,2,4,8", "axis2": "s", "values2": "1,2,4,8",
    "fixed": "n=64", "trials": 20, "threshold": 1e-3, "seed": 0,
    "distribution": "gaussian", "delta": None, "orient_law": "gaussian",
    "rho": 1.0, "tol": 1e-7, "max_iters": 5000, "rank_cap": None,
    "threads": 1, "out_dir": ".",
}


def _parse_fixed(text) -> dict:
    parts = str(text).split("=")
    if len(parts) != 2:
        raise CliError("--fixed must look like name=value, got %r" % (text,))
    try:
        return {parts[0].strip(): int(parts[1])}
    except ValueError:
        raise CliError("--fixed value must be an integer") from None


def cmd_phase_transition(args) -> int:
    opts = _merged(args, PHASE_DEFAULTS)
    try:
        config = PhaseTransitionConfig(
            axis1_name=str(opts["axis1"]),
            axis1_values=_int_list(opts["values1"]),
            axis2_name=str(opts["axis2"]),
            axis2_values=_int_list(opts["values2"]),
            fixed=_parse_fixed(opts["fixed"]),
            trials=_positive_int(opts, "trials"),
            threshold=float(opts["threshold"]),
            base_seed=int(opts["seed"]),
            distribution=str(opts["distribution"]),
            delta=None if opts["delta"] is None else float(opts["delta"]),
            orient_law=str(opts["orient_law"]),
            solver=_solver_config(opts),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    grid = run_phase_transition(config, workers=_positive_int(opts, "threads"),
                                progress=_stderr_progress)
    grid_to_csv(grid, _out(opts, "grid.csv"))
    grid_to_svg(grid, _out(opts, "grid.svg"))
    cells = len(config.axis1_values) * len(config.axis2_values)
    print("phase-transition: %d cells x %d trials -> grid.csv grid.svg"
          % (cells, config.trials))
    return EXIT_OK


SWEEP_DEFAULTS = {
    "n": 64, "s": 6, "r": 4, "snr": "0,5,10,15,20,25,30",
    "estimators": "vhm:1,vhm:2,vhm:4,vhm:6", "trials": 100,
    "delta": 1.0 / 64, "orient_law": "gaussian", "metric": "plain",
    "grid_step": 1e-4, "seed": 0, "threads": 1, "out_dir": ".",
}


def cmd_snr_sweep(args) -> int:
    opts = _merged(args, SWEEP_DEFAULTS)
    try:
        config = SweepConfig(
            n=_positive_int(opts, "n"),
            s=_positive_int(opts, "s"),
            r=_positive_int(opts, "r"),
            snr_db=_float_list(opts["snr"]),
            estimators=tuple(str(opts["estimators"]).split(",")),
            trials=_positive_int(opts, "trials"),
            delta=None if opts["delta"] is None else float(opts["delta"]),
            orient_law=str(opts["orient_law"]),
            metric=str(opts["metric"]),
            grid_step=float(opts["grid_step"]),
            base_seed=int(opts["seed"]),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    result = run_snr_sweep(config, workers=_positive_int(opts, "threads"),
                           progress=_stderr_progress)
    sweep_to_csv(result, _out(opts, "sweep.csv"))
    sweep_to_svg(result, _out(opts, "sweep.svg"))
    print("snr-sweep: %d SNR levels x %d estimators x %d trials -> "
          "sweep.csv sweep.svg" % (len(config.snr_db),
                                   len(config.estimators), config.trials))
    return EXIT_OK


def _stderr_progress(line: str) -> None:
    print(line, file=sys.stderr)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vhlift",
        description="Blind super-resolution via a lifted block-Hankel "
                    "nuclear-norm program, with MUSIC-style frequency "
                    "retrieval and Monte Carlo experiment harnesses.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON file with option defaults")
        p.add_argument("--out-dir", dest="out_dir",
                       help="directory for output files (default .)")
        p.set_defaults(func=func)
        return p

    p = add("synth", cmd_synth, "sample a model and write model/data files")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--distribution",
                   choices=["gaussian", "rademacher", "dftrows"])
    p.add_argument("--snr", type=float, help="add noise to X.csv at this SNR")
    p.add_argument("--delta", type=float, help="minimum wraparound separation")
    p.add_argument("--orient-law", dest="orient_law",
                   choices=["gaussian", "bernoulli"])

    p = add("solve", cmd_solve, "recover the data matrix from measurements")
    p.add_argument("--model", help="problem JSON from synth")
    p.add_argument("--y", help="measurement CSV")
    p.add_argument("--rho", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--rank-cap", dest="rank_cap", type=int)
    p.add_argument("--n1", type=int, help="override the lift split")

    p = add("music", cmd_music, "estimate frequencies from a data matrix")
    p.add_argument("--x", help="data matrix CSV")
    p.add_argument("--r", type=int, help="model order (required)")
    p.add_argument("--estimator", choices=["vhm", "single", "mmv"])
    p.add_argument("--row", type=int, help="row used by --estimator single")
    p.add_argument("--rows", type=int, help="leading rows used by vhm")
    p.add_argument("--grid-step", dest="grid_step", type=float)
    p.add_argument("--n1", type=int)
    p.add_argument("--svg", action="store_const", const=True,
                   help="also write pseudospectrum.svg")

    p = add("phase-transition", cmd_phase_transition,
            "success-count grid over two of n, r, s")
    p.add_argument("--axis1")
    p.add_argument("--values1")
    p.add_argument("--axis2")
    p.add_argument("--values2")
    p.add_argument("--fixed", help="remaining parameter, e.g. n=64")
    p.add_argument("--trials", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--distribution",
                   choices=["gaussian", "rademacher", "dftrows"])
    p.add_argument("--delta", type=float)
    p.add_argument("--orient-law", dest="orient_law",
                   choices=["gaussian", "bernoulli"])
    p.add_argument("--rho", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--rank-cap", dest="rank_cap", type=int)
    p.add_argument("--threads", type=int)

    p = add("snr-sweep", cmd_snr_sweep,
            "estimator error vs SNR on noisy data matrices")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--snr", help="comma list of SNR dB values (inf allowed)")
    p.add_argument("--estimators",
                   help="comma list from vhm, vhm:K, single, mmv")
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--orient-law", dest="orient_law",
                   choices=["gaussian", "bernoulli"])
    p.add_argument("--metric", choices=["plain", "wraparound"])
    p.add_argument("--grid-step", dest="grid_step", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.code
    except OSError as exc:
        print("I/O error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
