"""Frequency retrieval and amplitude recovery.

Three ways to build a MUSIC-style noise subspace from an s x n data matrix:
from the transposed block-Hankel lift (pooling all rows through the lifted
structure), from the scalar Hankel lift of a single row, and from the
transposed data matrix itself (classical multiple-measurement-vector MUSIC,
which needs at least as many rows as sources).  The pseudospectrum
1/||U_perp^* a_tau||^2 is evaluated on a uniform grid and frequencies are
picked as the largest strict local maxima on the circular grid.  Amplitudes
and orientations are then recovered by least squares against the steering
matrix at the estimated frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import json

import numpy as np

from .lift import LiftShape, vec_hankel
from .model import steering_matrix

__all__ = [
    "NoiseSubspace",
    "PseudospectrumCurve",
    "PeakSelection",
    "RecoveredSources",
    "noise_subspace_vhm",
    "noise_subspace_single",
    "noise_subspace_mmv",
    "default_grid",
    "pseudospectrum",
    "pick_peaks",
    "recover_amplitudes",
    "sources_to_dict",
    "save_sources",
    "save_pseudospectrum_csv",
]

COND_LIMIT = 1e12  # least-squares steering matrices beyond this are flagged


@dataclass
class NoiseSubspace:
    """Orthonormal basis of the orthogonal complement of the signal space."""

    u_perp: np.ndarray  # (m, m - r), orthonormal columns
    r: int              # assumed model order

    @property
    def m(self) -> int:
        return self.u_perp.shape[0]


@dataclass
class PseudospectrumCurve:
    grid: np.ndarray
    values: np.ndarray


@dataclass
class PeakSelection:
    """Picked frequencies, their curve heights, and whether padding with
    non-maxima grid points was needed to reach the requested count."""

    taus: np.ndarray
    values: np.ndarray
    padded: bool


@dataclass
class RecoveredSources:
    """Least-squares source estimates; amplitudes are nonnegative reals and
    all phase is carried by the unit-norm orientation columns."""

    taus_hat: np.ndarray
    amps_hat: np.ndarray
    orients_hat: np.ndarray
    residual: float
    ill_conditioned: bool


def _left_singular(M: np.ndarray) -> np.ndarray:
    # full U only when the matrix is wider than tall would truncate it
    full = M.shape[0] > M.shape[1]
    return np.linalg.svd(M, full_matrices=full)[0]


def noise_subspace_vhm(X: np.ndarray, r: int, shape: LiftShape) -> NoiseSubspace:
    """Noise subspace of the transposed block-Hankel lift of X.

    The signal space is spanned by the top r left singular vectors of
    vec_hankel(X).T; the remaining n2 - r columns form the noise subspace.
    """
    X = np.asarray(X)
    if not 0 <= r < shape.n2:
        raise ValueError("model order must satisfy 0 <= r < n2")
    if np.linalg.norm(X) == 0.0:
        raise ValueError("data matrix is zero; its singular subspaces "
                         "are undefined")
    U = _left_singular(vec_hankel(X, shape).T)
    return NoiseSubspace(u_perp=U[:, r:], r=r)


def noise_subspace_single(x_row: np.ndarray, r: int,
                          shape: LiftShape) -> NoiseSubspace:
    """Single-row variant: the scalar Hankel lift of one length-n vector."""
    x_row = np.asarray(x_row).ravel()
    if x_row.shape[0] != shape.n:
        raise ValueError("row length must equal n")
    one = LiftShape(n=shape.n, s=1, n1=shape.n1, n2=shape.n2)
    return noise_subspace_vhm(x_row[None, :], r, one)


def noise_subspace_mmv(X: np.ndarray, r: int) -> NoiseSubspace:
    """Classical MMV MUSIC subspace from the transposed data matrix.

    Works only when the row count is at least the model order; the steering
    space has length n here, not n2.
    """
    X = np.asarray(X)
    s, n = X.shape
    if r > s:
        raise ValueError("MMV subspace needs at least r rows (r <= s)")
    if not 0 <= r < n:
        raise ValueError("model order must satisfy 0 <= r < n")
    if np.linalg.norm(X) == 0.0:
        raise ValueError("data matrix is zero; its singular subspaces "
                         "are undefined")
    U = _left_singular(X.T)
    return NoiseSubspace(u_perp=U[:, r:], r=r)


def default_grid(step: float = 1e-4) -> np.ndarray:
    """Uniform frequency grid over [0, 1) with the given step."""
    count = int(round(1.0 / step))
    if count < 1:
        raise ValueError("grid step too large")
    return np.arange(count) * (1.0 / count)


def pseudospectrum(subspace: NoiseSubspace, grid: np.ndarray | None = None
                   ) -> PseudospectrumCurve:
    """Evaluate f(tau) = 1 / ||U_perp^* a_tau||^2 on the grid.

    Values blow up (possibly to inf) near true frequencies of exact
    low-rank data; that is the signal being looked for.
    """
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size and (grid.min() < 0.0 or grid.max() >= 1.0):
        raise ValueError("grid frequencies must lie in [0, 1)")
    A = steering_matrix(grid, subspace.m)
    proj = subspace.u_perp.conj().T @ A
    power = np.sum(np.abs(proj) ** 2, axis=0)
    with np.errstate(divide="ignore"):
        values = 1.0 / power
    return PseudospectrumCurve(grid=grid, values=values)


def pick_peaks(curve: PseudospectrumCurve, r: int) -> PeakSelection:
    """Select the r largest strict local maxima on the circular grid.

    Ties break toward smaller tau.  If fewer than r strict local maxima
    exist, the remaining slots are filled with the highest non-maxima grid
    points and the result is flagged as padded.
    """
    v = np.asarray(curve.values, dtype=np.float64)
    g = np.asarray(curve.grid, dtype=np.float64)
    if r < 1:
        raise ValueError("need r >= 1 peaks")
    if r > v.size:
        raise ValueError("cannot pick more peaks than grid points")
    is_max = (v > np.roll(v, 1)) & (v > np.roll(v, -1))
    order = np.lexsort((g, -v))  # value descending, then tau ascending
    maxima = order[is_max[order]]
    if maxima.size >= r:
        chosen = maxima[:r]
        padded = False
    else:
        rest = order[~is_max[order]]
        chosen = np.concatenate([maxima, rest[:r - maxima.size]])
        padded = True
    return PeakSelection(taus=g[chosen], values=v[chosen], padded=padded)


def recover_amplitudes(X: np.ndarray, taus_hat, n: int | None = None
                       ) -> RecoveredSources:
    """Least-squares amplitude/orientation recovery at fixed frequencies.

    Solves min_W ||X - W A^T||_F with A the n x r steering matrix of
    taus_hat, then splits each column of W into a nonnegative amplitude and
    a unit-norm orientation.  A steering matrix with condition number above
    1e12 (near-coincident frequencies) sets the ill_conditioned flag; the
    solve still runs via the pseudoinverse path of lstsq.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.complex128))
    taus_hat = np.atleast_1d(np.asarray(taus_hat, dtype=np.float64))
    r = taus_hat.shape[0]
    if n is None:
        n = X.shape[1]
    elif n != X.shape[1]:
        raise ValueError("n disagrees with the data matrix width")
    if len(set(taus_hat.tolist())) != r:
        raise ValueError("estimated frequencies must be distinct")
    if r > n:
        raise ValueError("more frequencies than samples")
    A = steering_matrix(taus_hat, n)
    cond = np.linalg.cond(A)
    Wt, *_ = np.linalg.lstsq(A, X.T, rcond=None)
    W = Wt.T
    amps = np.linalg.norm(W, axis=0)
    orients = np.empty_like(W)
    for k in range(r):
        if amps[k] > 0.0:
            orients[:, k] = W[:, k] / amps[k]
        else:
            orients[:, k] = 0.0
            orients[0, k] = 1.0
    residual = float(np.linalg.norm(X - W @ A.T))
    return RecoveredSources(taus_hat=taus_hat, amps_hat=amps,
                            orients_hat=orients, residual=residual,
                            ill_conditioned=bool(cond > COND_LIMIT))


# ----------------------------------------------------------- serialization

def sources_to_dict(src: RecoveredSources) -> dict:
    flat = src.orients_hat.ravel(order="F")
    return {
        "taus_hat": [float(t) for t in src.taus_hat],
        "amps_hat": [float(a) for a in src.amps_hat],
        "orients_hat": [[float(z.real), float(z.imag)] for z in flat],
        "s": int(src.orients_hat.shape[0]),
        "r": int(src.orients_hat.shape[1]),
        "residual": src.residual,
        "ill_conditioned": src.ill_conditioned,
    }


def save_sources(path, src: RecoveredSources) -> None:
    with open(path, "w") as fh:
        json.dump(sources_to_dict(src), fh, indent=1)
        fh.write("\n")


def save_pseudospectrum_csv(path, curve: PseudospectrumCurve) -> None:
    lines = ["tau,f"]
    for t, f in zip(curve.grid, curve.values):
        lines.append("%r,%r" % (float(t), float(f)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
