"""Metrics and Monte Carlo experiment harnesses.

Two experiment drivers: a phase-transition grid that sweeps two of (n, r, s)
while the third is fixed, counting exact-recovery successes of the convex
program per cell, and an SNR sweep that measures frequency-estimation error
(Hausdorff distance) of several estimators on a shared noisy instance per
trial.

Determinism contract: trial t of cell c draws its generator from
SeedSequence((base_seed, c, t)), and per-trial results land in preallocated
arrays indexed by (cell, trial) before any reduction, so outputs are
byte-identical regardless of worker count or scheduling order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from .estimate import (
    default_grid,
    noise_subspace_mmv,
    noise_subspace_single,
    noise_subspace_vhm,
    pick_peaks,
    pseudospectrum,
)
from .figures import heatmap_svg, sweep_svg
from .lift import LiftShape
from .model import (
    add_noise,
    apply_measurement,
    sample_model,
    sample_subspace,
    synthesize_data_matrix,
)
from .solver import SolverConfig, solve_vhl

__all__ = [
    "PhaseTransitionConfig",
    "TrialGrid",
    "SweepConfig",
    "SweepResult",
    "relative_error",
    "hausdorff_distance",
    "run_phase_transition",
    "run_snr_sweep",
    "grid_to_csv",
    "grid_to_svg",
    "sweep_to_csv",
    "sweep_to_svg",
]


# ---------------------------------------------------------------- metrics

def relative_error(X_hat: np.ndarray, X_ref: np.ndarray) -> float:
    """||X_hat - X_ref||_F / ||X_ref||_F, with 0/0 = 0 and x/0 = inf."""
    X_hat = np.asarray(X_hat)
    X_ref = np.asarray(X_ref)
    if X_hat.shape != X_ref.shape:
        raise ValueError("shape mismatch")
    ref = np.linalg.norm(X_ref)
    diff = np.linalg.norm(X_hat - X_ref)
    if ref == 0.0:
        return 0.0 if diff == 0.0 else np.inf
    return float(diff / ref)


def hausdorff_distance(taus, taus_hat, metric: str = "plain") -> float:
    """Symmetric worst-case nearest-neighbor distance between two
    frequency sets; metric "plain" uses |a - b|, "wraparound" the circular
    distance min(|a - b|, 1 - |a - b|)."""
    if metric not in ("plain", "wraparound"):
        raise ValueError("metric must be 'plain' or 'wraparound'")
    a = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    b = np.atleast_1d(np.asarray(taus_hat, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("frequency sets must be nonempty")
    D = np.abs(a[:, None] - b[None, :])
    if metric == "wraparound":
        D = np.minimum(D, 1.0 - D)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


# ---------------------------------------------------------------- phase grid

PARAM_NAMES = ("n", "r", "s")


@dataclass
class PhaseTransitionConfig:
    """Grid over two of (n, r, s); the remaining parameter sits in fixed."""

    axis1_name: str = "r"
    axis1_values: tuple = (1, 2, 4, 8)
    axis2_name: str = "s"
    axis2_values: tuple = (1, 2, 4, 8)
    fixed: dict = field(default_factory=lambda: {"n": 64})
    trials: int = 20
    threshold: float = 1e-3
    base_seed: int = 0
    distribution: str = "gaussian"
    delta: float | None = None
    orient_law: str = "gaussian"
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        self.axis1_values = tuple(int(v) for v in self.axis1_values)
        self.axis2_values = tuple(int(v) for v in self.axis2_values)
        names = {self.axis1_name, self.axis2_name, *self.fixed}
        if names != set(PARAM_NAMES) or len(self.fixed) != 1 \
                or self.axis1_name == self.axis2_name:
            raise ValueError("axes plus fixed must cover n, r, s exactly once")
        if not self.axis1_values or not self.axis2_values:
            raise ValueError("axis value lists must be nonempty")
        if min(self.axis1_values + self.axis2_values) < 1 \
                or min(self.fixed.values()) < 1:
            raise ValueError("grid parameters must be positive")
        if self.trials < 1:
            raise ValueError("need at least one trial per cell")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")

    def cell_params(self, i: int, j: int) -> dict:
        p = dict(self.fixed)
        p[self.axis1_name] = self.axis1_values[i]
        p[self.axis2_name] = self.axis2_values[j]
        return p


@dataclass
class TrialGrid:
    """Per-trial relative errors for every grid cell, plus the producing
    config; success counts derive from the stored errors."""

    config: PhaseTransitionConfig
    errors: np.ndarray  # (len(axis1), len(axis2), trials)

    @property
    def counts(self) -> np.ndarray:
        return self.counts_at(self.config.threshold)

    def counts_at(self, threshold: float) -> np.ndarray:
        return (self.errors < threshold).sum(axis=2)


def _phase_trial(config: PhaseTransitionConfig, cell: int, params: dict,
                 t: int) -> float:
    rng = np.random.default_rng(
        np.random.SeedSequence((config.base_seed, cell, t)))
    n, r, s = params["n"], params["r"], params["s"]
    try:
        model = sample_model(r, s, seed=rng, delta=config.delta,
                             orient_law=config.orient_law)
        B = sample_subspace(config.distribution, n, s, seed=rng)
        X = synthesize_data_matrix(model, n)
        y = apply_measurement(X, B)
        rep = solve_vhl(y, B, LiftShape.default(n, s), config.solver)
        return relative_error(rep.X_hat, X)
    except Exception:
        # a failed trial is a non-success, never a dead grid
        return np.inf


def _run_tasks(tasks, runner, workers, progress):
    """Execute (slot, label) tasks; results keyed by slot so scheduling
    order never affects the output arrays."""
    if workers <= 1:
        for slot, label in tasks:
            value = runner(slot)
            yield slot, value
            if progress is not None:
                progress("%s: %.3e" % (label, np.max(value)))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(runner, slot): (slot, label)
                       for slot, label in tasks}
            for fut in as_completed(futures):
                slot, label = futures[fut]
                value = fut.result()
                yield slot, value
                if progress is not None:
                    progress("%s: %.3e" % (label, np.max(value)))


def run_phase_transition(config: PhaseTransitionConfig, workers: int = 1,
                         progress=None) -> TrialGrid:
    """Run the success-count grid; per-trial failures count as errors of
    +inf (non-success) and never abort the run."""
    n1, n2 = len(config.axis1_values), len(config.axis2_values)
    errors = np.full((n1, n2, config.trials), np.inf)
    tasks = []
    for i in range(n1):
        for j in range(n2):
            cell = i * n2 + j
            params = config.cell_params(i, j)
            label = " ".join("%s=%d" % (k, params[k]) for k in PARAM_NAMES)
            for t in range(config.trials):
                tasks.append(((i, j, t),
                              "%s trial %d/%d" % (label, t + 1, config.trials)))

    def runner(slot):
        i, j, t = slot
        return _phase_trial(config, i * n2 + j, config.cell_params(i, j), t)

    for (i, j, t), err in _run_tasks(tasks, runner, workers, progress):
        errors[i, j, t] = err
    return TrialGrid(config=config, errors=errors)


# ---------------------------------------------------------------- SNR sweep

def parse_estimator(name: str, s: int, r: int) -> tuple[str, int]:
    """Validate an estimator tag against the instance dimensions.

    Tags: "vhm" (all rows), "vhm:K" (first K rows), "single" (first row),
    "mmv" (needs r <= s).  Returns (kind, rows).
    """
    if name == "mmv":
        if r > s:
            raise ValueError("mmv needs r <= s")
        return "mmv", s
    if name == "single":
        return "single", 1
    if name == "vhm":
        return "vhm", s
    if name.startswith("vhm:"):
        try:
            rows = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError("bad estimator tag %r" % name) from None
        if not 1 <= rows <= s:
            raise ValueError("estimator %r wants %d rows but s=%d"
                             % (name, rows, s))
        return "vhm", rows
    raise ValueError("unknown estimator %r" % name)


def estimate_frequencies(X: np.ndarray, r: int, estimator: str,
                         grid: np.ndarray | None = None) -> np.ndarray:
    """Run one named estimator on a data matrix and return r frequencies."""
    X = np.atleast_2d(np.asarray(X))
    s, n = X.shape
    kind, rows = parse_estimator(estimator, s, r)
    if kind == "mmv":
        ns = noise_subspace_mmv(X, r)
    elif kind == "single":
        ns = noise_subspace_single(X[0], r, LiftShape.default(n, 1))
    else:
        ns = noise_subspace_vhm(X[:rows], r, LiftShape.default(n, rows))
    return pick_peaks(pseudospectrum(ns, grid), r).taus


@dataclass
class SweepConfig:
    """Estimator comparison across SNR levels on a shared noisy instance
    per trial."""

    n: int = 64
    s: int = 6
    r: int = 4
    snr_db: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    estimators: tuple = ("vhm:1", "vhm:2", "vhm:4", "vhm:6")
    trials: int = 100
    delta: float | None = 1.0 / 64
    orient_law: str = "gaussian"
    metric: str = "plain"
    grid_step: float = 1e-4
    base_seed: int = 0

    def __post_init__(self):
        self.snr_db = tuple(float(v) for v in self.snr_db)
        self.estimators = tuple(self.estimators)
        if self.n < 1 or self.s < 1 or self.r < 1 or self.trials < 1:
            raise ValueError("n, s, r, trials must be positive")
        if not self.snr_db or not self.estimators:
            raise ValueError("need at least one SNR level and one estimator")
        if self.metric not in ("plain", "wraparound"):
            raise ValueError("metric must be 'plain' or 'wraparound'")
        for est in self.estimators:
            parse_estimator(est, self.s, self.r)


@dataclass
class SweepResult:
    config: SweepConfig
    errors: np.ndarray  # (len(estimators), len(snr_db), trials)

    @property
    def mean_errors(self) -> np.ndarray:
        return self.errors.mean(axis=2)


def _sweep_trial(config: SweepConfig, grid: np.ndarray, si: int,
                 t: int) -> np.ndarray:
    rng = np.random.default_rng(
        np.random.SeedSequence((config.base_seed, si, t)))
    model = sample_model(config.r, config.s, seed=rng, delta=config.delta,
                         orient_law=config.orient_law)
    X = synthesize_data_matrix(model, config.n)
    Xn = add_noise(X, config.snr_db[si], seed=rng)
    out = np.empty(len(config.estimators))
    for e, est in enumerate(config.estimators):
        taus_hat = estimate_frequencies(Xn, config.r, est, grid)
        out[e] = hausdorff_distance(model.taus, taus_hat, config.metric)
    return out


def run_snr_sweep(config: SweepConfig, workers: int = 1,
                  progress=None) -> SweepResult:
    """All estimators see the same noisy matrix within a trial, so the
    comparison across estimators is paired."""
    grid = default_grid(config.grid_step)
    errors = np.full((len(config.estimators), len(config.snr_db),
                      config.trials), np.inf)
    tasks = [((si, t), "snr=%g trial %d/%d" % (snr, t + 1, config.trials))
             for si, snr in enumerate(config.snr_db)
             for t in range(config.trials)]

    def runner(slot):
        si, t = slot
        return _sweep_trial(config, grid, si, t)

    for (si, t), vals in _run_tasks(tasks, runner, workers, progress):
        errors[:, si, t] = vals
    return SweepResult(config=config, errors=errors)


# ---------------------------------------------------------------- output

def grid_to_csv(grid: TrialGrid, path) -> None:
    cfg = grid.config
    counts = grid.counts
    lines = ["%s,%s,count" % (cfg.axis1_name, cfg.axis2_name)]
    for i, v1 in enumerate(cfg.axis1_values):
        for j, v2 in enumerate(cfg.axis2_values):
            lines.append("%d,%d,%d" % (v1, v2, counts[i, j]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def grid_to_svg(grid: TrialGrid, path) -> None:
    cfg = grid.config
    fixed = ", ".join("%s=%d" % kv for kv in sorted(cfg.fixed.items()))
    title = "successful recoveries out of %d trials (%s)" \
        % (cfg.trials, fixed)
    svg = heatmap_svg(cfg.axis1_name, cfg.axis1_values, cfg.axis2_name,
                      cfg.axis2_values, grid.counts, cfg.trials, title)
    with open(path, "w") as fh:
        fh.write(svg)


def sweep_to_csv(result: SweepResult, path) -> None:
    cfg = result.config
    me = result.mean_errors
    lines = ["snr,estimator,mean_error"]
    for si, snr in enumerate(cfg.snr_db):
        for e, est in enumerate(cfg.estimators):
            lines.append("%g,%s,%r" % (snr, est, float(me[e, si])))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def sweep_to_svg(result: SweepResult, path) -> None:
    cfg = result.config
    title = "mean frequency error vs SNR (n=%d, s=%d, r=%d, %d trials)" \
        % (cfg.n, cfg.s, cfg.r, cfg.trials)
    svg = sweep_svg(cfg.snr_db, cfg.estimators, result.mean_errors, title)
    with open(path, "w") as fh:
        fh.write(svg)
