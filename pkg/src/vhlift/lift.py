"""Block-Hankel lifting of multi-row signals and the associated operator algebra.

The central map sends an s-by-n data matrix X to the (s*n1)-by-n2 matrix
whose (j, k) block (an s-vector) is column j+k of X, with n1 + n2 = n + 1.
Around it the module provides the adjoint, the diagonal weight operator D
induced by the composition adjoint-after-lift, the isometric rescaling G,
the orthonormal basis of weighted Hankel matrices, the per-row stacked
variant (a row permutation of the block lift), and a two-level lift for
data indexed by two frequency axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LiftShape",
    "hankel_weights",
    "vec_hankel",
    "vec_hankel_adjoint",
    "lifted_block",
    "apply_weights",
    "iso_lift",
    "iso_lift_adjoint",
    "hankel_basis_matrix",
    "stacked_hankel",
    "stack_permutation",
    "two_level_lift",
]


@dataclass(frozen=True)
class LiftShape:
    """Dimensions of the lift: s rows, n samples, split into n1 + n2 = n + 1."""

    n: int
    s: int
    n1: int
    n2: int

    def __post_init__(self):
        if self.n < 1 or self.s < 1:
            raise ValueError("n and s must be positive")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive")
        if self.n1 + self.n2 != self.n + 1:
            raise ValueError("need n1 + n2 == n + 1, got %d + %d != %d + 1"
                             % (self.n1, self.n2, self.n))

    @classmethod
    def default(cls, n, s, n1=None):
        """Near-square split: n1 = floor((n+1)/2) unless overridden."""
        if n1 is None:
            n1 = (n + 1) // 2
        return cls(n=n, s=s, n1=n1, n2=n + 1 - n1)


def hankel_weights(shape: LiftShape) -> np.ndarray:
    """Anti-diagonal multiplicities w_i = #{(j, k): j + k = i}, length n."""
    ones1 = np.ones(shape.n1, dtype=np.int64)
    ones2 = np.ones(shape.n2, dtype=np.int64)
    return np.convolve(ones1, ones2)


def _check_data(X, shape):
    X = np.asarray(X)
    if X.shape != (shape.s, shape.n):
        raise ValueError("data matrix must be %d x %d, got %r"
                         % (shape.s, shape.n, X.shape))
    return X


def vec_hankel(X: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Lift an s x n matrix to the (s*n1) x n2 block-Hankel matrix.

    Block (j, k), i.e. rows j*s..(j+1)*s-1 of column k, equals column
    j + k of X.
    """
    X = _check_data(X, shape)
    idx = np.arange(shape.n1)[:, None] + np.arange(shape.n2)[None, :]
    blocks = X[:, idx]  # (s, n1, n2)
    return blocks.transpose(1, 0, 2).reshape(shape.s * shape.n1, shape.n2)


def _check_lifted(Z, shape):
    Z = np.asarray(Z)
    if Z.shape != (shape.s * shape.n1, shape.n2):
        raise ValueError("lifted matrix must be %d x %d, got %r"
                         % (shape.s * shape.n1, shape.n2, Z.shape))
    return Z


def vec_hankel_adjoint(Z: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Adjoint of the lift: column i of the output sums blocks with j + k = i."""
    Z = _check_lifted(Z, shape)
    blocks = Z.reshape(shape.n1, shape.s, shape.n2)
    out = np.zeros((shape.s, shape.n), dtype=np.result_type(Z.dtype, np.float64))
    for j in range(shape.n1):
        out[:, j:j + shape.n2] += blocks[j]
    return out


def lifted_block(Z: np.ndarray, shape: LiftShape, j: int, k: int) -> np.ndarray:
    """Return block (j, k) of a lifted matrix as an s-vector."""
    Z = _check_lifted(Z, shape)
    if not (0 <= j < shape.n1 and 0 <= k < shape.n2):
        raise IndexError("block index out of range")
    return Z[j * shape.s:(j + 1) * shape.s, k]


def apply_weights(X: np.ndarray, w: np.ndarray, power: int) -> np.ndarray:
    """Scale column i of X by w_i^(power/2); power in {2, 1, -1, -2}.

    With w = hankel_weights(shape), power=2 equals the composition
    adjoint-after-lift and power=-1 is the inverse square-root weighting
    used by the isometric lift.
    """
    if power not in (2, 1, -1, -2):
        raise ValueError("power must be one of 2, 1, -1, -2")
    X = np.asarray(X)
    w = np.asarray(w, dtype=np.float64)
    if X.ndim != 2 or w.ndim != 1 or X.shape[1] != w.shape[0]:
        raise ValueError("weight length must match column count")
    return X * w ** (power / 2.0)


def iso_lift(X: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Isometric lift: vec_hankel after inverse square-root weighting."""
    return vec_hankel(apply_weights(X, hankel_weights(shape), -1), shape)


def iso_lift_adjoint(Z: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Adjoint of iso_lift; iso_lift_adjoint(iso_lift(X)) == X."""
    return apply_weights(vec_hankel_adjoint(Z, shape), hankel_weights(shape), -1)


def hankel_basis_matrix(i: int, shape: LiftShape) -> np.ndarray:
    """i-th orthonormal Hankel basis matrix, n1 x n2, supported on j + k = i."""
    if not 0 <= i < shape.n:
        raise IndexError("anti-diagonal index out of range")
    w = hankel_weights(shape)
    G = np.zeros((shape.n1, shape.n2))
    j = np.arange(max(0, i - shape.n2 + 1), min(shape.n1 - 1, i) + 1)
    G[j, i - j] = 1.0 / np.sqrt(w[i])
    return G


def stacked_hankel(X: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Per-row stacked lift: the s scalar Hankel matrices of the rows of X,
    stacked vertically.  A fixed row permutation of vec_hankel(X)."""
    X = _check_data(X, shape)
    idx = np.arange(shape.n1)[:, None] + np.arange(shape.n2)[None, :]
    return X[:, idx].reshape(shape.s * shape.n1, shape.n2)


def stack_permutation(shape: LiftShape) -> np.ndarray:
    """Row indices p with stacked_hankel(X) == vec_hankel(X)[p].

    Row l*n1 + j of the stacked layout is row j*s + l of the block layout.
    """
    l = np.arange(shape.s)[:, None]
    j = np.arange(shape.n1)[None, :]
    return (j * shape.s + l).reshape(-1)


def two_level_lift(X: np.ndarray, shape: LiftShape) -> np.ndarray:
    """Two-level lift for data indexed by two frequency axes.

    X is s x n^2, viewed as n chunks of n columns (chunk l = columns
    l*n..(l+1)*n-1, slow axis first).  The output is an n1 x n2 block-Hankel
    arrangement, along the slow axis, of the single-level lifts of the
    chunks: outer block (j, k) is vec_hankel(chunk_{j+k}).  Output size
    (s*n1*n1) x (n2*n2).
    """
    X = np.asarray(X)
    n, s, n1, n2 = shape.n, shape.s, shape.n1, shape.n2
    if X.shape != (s, n * n):
        raise ValueError("two-level data must be %d x %d, got %r"
                         % (s, n * n, X.shape))
    inner = [vec_hankel(X[:, l * n:(l + 1) * n], shape) for l in range(n)]
    rows = [np.hstack([inner[j + k] for k in range(n2)]) for j in range(n1)]
    return np.vstack(rows)
