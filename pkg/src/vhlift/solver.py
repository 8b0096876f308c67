"""First-order solver for the lifted nuclear-norm recovery program.

The program is

    minimize ||vec_hankel(X)||_*   subject to   B[j, :] X[:, j] = y[j]

solved by ADMM on the splitting min_{X, Z} ||Z||_* s.t. Z = vec_hankel(X)
with the affine measurement constraint folded into the X-update.  Because
the adjoint-lift composition is a diagonal column weighting, the X-update
has a per-column closed form: the unconstrained minimizer of
||(Z + Lam/rho) - vec_hankel(X)||_F^2 is m_j = adjoint(Z + Lam/rho)_j / w_j,
and re-imposing the scalar constraint on column j is a rank-one Euclidean
projection.  The Z-update is singular value thresholding at 1/rho and the
dual update is Lam <- Lam + rho (Z - vec_hankel(X)) (unscaled dual; the
quantities Lam/rho appearing in the updates are the scaled dual variable).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import json

import numpy as np

from .lift import LiftShape, hankel_weights, vec_hankel, vec_hankel_adjoint
from .model import SubspaceMatrix

__all__ = [
    "SolverConfig",
    "SolveReport",
    "svt",
    "nuclear_norm",
    "solve_vhl",
    "report_to_dict",
    "save_report",
]


@dataclass
class SolverConfig:
    rho: float = 1.0
    max_iters: int = 5000
    tol_rel: float = 1e-7
    svt_rank_cap: int | None = None

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.tol_rel > 0:
            raise ValueError("tol_rel must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class SolveReport:
    """Solver outcome: the iterate, residuals at exit, and the objective."""

    X_hat: np.ndarray
    iters: int
    primal_residual: float
    dual_residual: float
    nuclear_norm: float
    converged: bool
    primal_history: np.ndarray | None = field(default=None, repr=False)
    dual_history: np.ndarray | None = field(default=None, repr=False)


def svt(M: np.ndarray, threshold: float,
        rank_cap: int | None = None) -> np.ndarray:
    """Singular value soft-thresholding, the proximal map of the nuclear norm.

    Optionally zeroes all singular values beyond rank_cap.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    U, sig, Vh = np.linalg.svd(M, full_matrices=False)
    shrunk = np.maximum(sig - threshold, 0.0)
    if rank_cap is not None:
        shrunk[rank_cap:] = 0.0
    return (U * shrunk) @ Vh


def nuclear_norm(M: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(M, compute_uv=False).sum())


def solve_vhl(y: np.ndarray, B, shape: LiftShape,
              config: SolverConfig | None = None,
              keep_history: bool = False) -> SolveReport:
    """Recover the data matrix from scalar measurements by ADMM.

    Every X iterate satisfies the measurement constraint exactly, so the
    returned X_hat is always feasible; converged=False only means the
    primal/dual residuals did not both reach tol_rel within max_iters.
    """
    if config is None:
        config = SolverConfig()
    Bm = B.entries if isinstance(B, SubspaceMatrix) else np.asarray(B, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128).ravel()
    if Bm.shape != (shape.n, shape.s):
        raise ValueError("sensing matrix must be n x s for the given shape")
    if y.shape[0] != shape.n:
        raise ValueError("measurement vector must have length n")
    row_sq = np.sum(np.abs(Bm) ** 2, axis=1)
    if np.any(row_sq == 0.0):
        raise ValueError("sensing matrix has a zero row; that measurement "
                         "constrains nothing")

    w = hankel_weights(shape).astype(np.float64)
    Bc = np.conj(Bm)
    rho = config.rho

    def project_feasible(M):
        # rank-one correction per column: enforce B[j,:] x_j = y[j]
        resid = y - np.einsum("jl,lj->j", Bm, M)
        return M + (Bc * (resid / row_sq)[:, None]).T

    # least-norm feasible start
    X = project_feasible(np.zeros((shape.s, shape.n), dtype=np.complex128))
    Z = vec_hankel(X, shape)
    Lam = np.zeros_like(Z)

    hist_p = []
    hist_d = []
    primal = np.inf
    dual = np.inf
    it = 0
    converged = False
    for it in range(1, config.max_iters + 1):
        M = vec_hankel_adjoint(Z + Lam / rho, shape) / w
        X_new = project_feasible(M)
        HX = vec_hankel(X_new, shape)
        Z = svt(HX - Lam / rho, 1.0 / rho, config.svt_rank_cap)
        Lam += rho * (Z - HX)

        primal = np.linalg.norm(Z - HX) / max(1.0, np.linalg.norm(HX))
        # ||vec_hankel(dX)||_F via the diagonal weighting, no lift needed
        dX = X_new - X
        dual = rho * np.sqrt(np.sum(w * np.abs(dX) ** 2)) \
            / max(1.0, np.linalg.norm(Lam))
        X = X_new
        if keep_history:
            hist_p.append(primal)
            hist_d.append(dual)
        if primal <= config.tol_rel and dual <= config.tol_rel:
            converged = True
            break

    return SolveReport(
        X_hat=X,
        iters=it,
        primal_residual=float(primal),
        dual_residual=float(dual),
        nuclear_norm=nuclear_norm(vec_hankel(X, shape)),
        converged=converged,
        primal_history=np.array(hist_p) if keep_history else None,
        dual_history=np.array(hist_d) if keep_history else None,
    )


def report_to_dict(report: SolveReport) -> dict:
    s, n = report.X_hat.shape
    flat = report.X_hat.ravel(order="F")
    return {
        "s": int(s),
        "n": int(n),
        "iters": report.iters,
        "primal_residual": report.primal_residual,
        "dual_residual": report.dual_residual,
        "nuclear_norm": report.nuclear_norm,
        "converged": report.converged,
        "X_hat": [[float(z.real), float(z.imag)] for z in flat],
    }


def save_report(path, report: SolveReport) -> None:
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh, indent=1)
        fh.write("\n")
