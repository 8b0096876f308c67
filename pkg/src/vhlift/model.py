"""Ground truth and measurement model for blind point-source recovery.

A model is a set of r point sources: frequencies tau_k in [0,1), complex
amplitudes d_k, and unit-norm orientation vectors h_k in C^s.  The data
matrix collects the modulated samples X[:, j] = sum_k d_k h_k e^{-2i pi
tau_k j}; each scalar measurement pairs column j with a known sensing row,
y[j] = B[j, :] X[:, j].  The module provides samplers for the sources and
for the sensing matrix, the measurement map and its adjoint, the
Vandermonde-type factorization of the lifted data matrix, noise injection
at a prescribed SNR, conditioning diagnostics, and JSON serialization.
"""

from __future__ import annotations

from dataclasses import dataclass

import json

import numpy as np

from .lift import LiftShape

__all__ = [
    "PointSourceModel",
    "SubspaceMatrix",
    "VandermondeFactors",
    "IncoherenceReport",
    "steering_vector",
    "steering_matrix",
    "sample_model",
    "sample_subspace",
    "synthesize_data_matrix",
    "apply_measurement",
    "apply_measurement_adjoint",
    "build_vandermonde_factors",
    "noise_sigma",
    "add_noise",
    "incoherence_diagnostic",
    "wraparound_gap",
    "problem_to_dict",
    "problem_from_dict",
    "save_problem",
    "load_problem",
]

TWO_PI = 2.0 * np.pi


@dataclass
class PointSourceModel:
    """r point sources: frequencies, complex amplitudes, unit orientations."""

    taus: np.ndarray     # (r,) floats in [0, 1)
    amps: np.ndarray     # (r,) complex, all nonzero
    orients: np.ndarray  # (s, r) complex, unit-norm columns

    def __post_init__(self):
        self.taus = np.atleast_1d(np.asarray(self.taus, dtype=np.float64))
        self.amps = np.atleast_1d(np.asarray(self.amps, dtype=np.complex128))
        self.orients = np.atleast_2d(np.asarray(self.orients, dtype=np.complex128))
        r = self.taus.shape[0]
        if r < 1:
            raise ValueError("need at least one source")
        if self.amps.shape != (r,) or self.orients.shape[1] != r:
            raise ValueError("field lengths disagree on the source count")
        if np.any(self.taus < 0.0) or np.any(self.taus >= 1.0):
            raise ValueError("frequencies must lie in [0, 1)")
        if len(set(self.taus.tolist())) != r:
            raise ValueError("frequencies must be pairwise distinct")
        if np.any(self.amps == 0):
            raise ValueError("amplitudes must be nonzero")
        norms = np.linalg.norm(self.orients, axis=0)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("orientation columns must have unit norm")

    @property
    def r(self) -> int:
        return self.taus.shape[0]

    @property
    def s(self) -> int:
        return self.orients.shape[0]


@dataclass
class SubspaceMatrix:
    """Known n x s sensing matrix; row j defines the j-th measurement."""

    entries: np.ndarray
    distribution: str
    seed: int | None = None

    def __post_init__(self):
        self.entries = np.atleast_2d(np.asarray(self.entries, dtype=np.complex128))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def s(self) -> int:
        return self.entries.shape[1]


@dataclass
class VandermondeFactors:
    """Factors of the lifted data matrix: lifted_left @ diag(amps) @ right.T.

    left is the n1-point steering matrix of the frequencies, right the
    n2-point one, and lifted_left interleaves left with the orientations
    (column k is the Kronecker product of left[:, k] and h_k).
    """

    left: np.ndarray         # (n1, r)
    right: np.ndarray        # (n2, r)
    lifted_left: np.ndarray  # (s*n1, r)


@dataclass
class IncoherenceReport:
    """Smallest Gram eigenvalues of the steering factors and the implied
    conditioning constant max(n1/sigma_left, n2/sigma_right)."""

    sigma_min_left: float
    sigma_min_right: float
    mu1: float


def steering_vector(tau: float, m: int) -> np.ndarray:
    """Length-m complex sinusoid with entry j = exp(-2i pi tau j)."""
    if not 0.0 <= tau < 1.0:
        raise ValueError("frequency must lie in [0, 1)")
    return steering_matrix([tau], m)[:, 0]


def steering_matrix(taus, m: int) -> np.ndarray:
    """m x r matrix whose columns are steering vectors of the given taus."""
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    if taus.size and (taus.min() < 0.0 or taus.max() >= 1.0):
        raise ValueError("frequencies must lie in [0, 1)")
    return np.exp(-2j * np.pi * np.outer(np.arange(m), taus))


def wraparound_gap(taus) -> float:
    """Minimum pairwise circular distance min(|a-b|, 1-|a-b|); inf if r < 2."""
    taus = np.sort(np.atleast_1d(np.asarray(taus, dtype=np.float64)))
    if taus.size < 2:
        return np.inf
    gaps = np.diff(taus)
    wrap = 1.0 - (taus[-1] - taus[0])
    return float(min(gaps.min(), wrap))


def sample_model(r: int, s: int, seed=None, delta: float | None = None,
                 orient_law: str = "gaussian") -> PointSourceModel:
    """Draw a random r-source model with s-dimensional orientations.

    Frequencies are uniform on [0, 1), redrawn until the wraparound gap is
    at least max(delta, 1e-9); amplitudes follow (1 + 10^c) e^{-i psi} with
    c uniform on [0, 1] and psi uniform on [0, 2 pi), so |d_k| in [2, 11];
    orientations are normalized standard Gaussian (orient_law="gaussian")
    or normalized symmetric +-1 (orient_law="bernoulli") vectors.
    """
    if r < 1 or s < 1:
        raise ValueError("need r >= 1 and s >= 1")
    if orient_law not in ("gaussian", "bernoulli"):
        raise ValueError("orient_law must be 'gaussian' or 'bernoulli'")
    min_gap = 1e-9 if delta is None else max(float(delta), 1e-9)
    if r * min_gap > 1.0:
        raise ValueError("cannot place %d frequencies with separation %g on the circle"
                         % (r, min_gap))
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        taus = rng.random(r)
        if wraparound_gap(taus) >= min_gap:
            break
    else:
        raise RuntimeError("frequency rejection sampling did not terminate")
    psi = TWO_PI * rng.random(r)
    c = rng.random(r)
    amps = (1.0 + 10.0 ** c) * np.exp(-1j * psi)
    if orient_law == "gaussian":
        H = rng.standard_normal((s, r))
    else:
        H = 2.0 * rng.integers(0, 2, size=(s, r)) - 1.0
    H = H / np.linalg.norm(H, axis=0)
    return PointSourceModel(taus=taus, amps=amps, orients=H.astype(np.complex128))


def sample_subspace(distribution: str, n: int, s: int, seed=None,
                    complex_gaussian: bool = False) -> SubspaceMatrix:
    """Draw an n x s sensing matrix with isotropic rows E[b b*] = I_s.

    Supported distributions: "gaussian" (real standard normal entries, or
    circularly symmetric unit-variance complex with complex_gaussian=True),
    "rademacher" (+-1 equiprobable), "dftrows" (rows picked uniformly with
    replacement from the scaled n-point discrete Fourier matrix, entries
    exp(-2i pi p j / n) for an integer row index p).
    """
    if not n >= s >= 1:
        raise ValueError("need n >= s >= 1")
    tag = distribution.lower()
    rng = np.random.default_rng(seed)
    if tag == "gaussian":
        if complex_gaussian:
            Bm = (rng.standard_normal((n, s))
                  + 1j * rng.standard_normal((n, s))) / np.sqrt(2.0)
        else:
            Bm = rng.standard_normal((n, s)).astype(np.complex128)
    elif tag == "rademacher":
        Bm = (2.0 * rng.integers(0, 2, size=(n, s)) - 1.0).astype(np.complex128)
    elif tag == "dftrows":
        p = rng.integers(0, n, size=n)
        Bm = np.exp(-2j * np.pi * np.outer(p, np.arange(s)) / n)
    else:
        raise ValueError("unsupported distribution %r" % (distribution,))
    stored = seed if isinstance(seed, (int, np.integer)) else None
    return SubspaceMatrix(entries=Bm, distribution=tag,
                          seed=None if stored is None else int(stored))


def synthesize_data_matrix(model: PointSourceModel, n: int) -> np.ndarray:
    """s x n data matrix sum_k d_k h_k a_{tau_k}^T."""
    A = steering_matrix(model.taus, n)
    return (model.orients * model.amps) @ A.T


def _sensing_entries(B) -> np.ndarray:
    return B.entries if isinstance(B, SubspaceMatrix) else np.asarray(B)


def apply_measurement(X: np.ndarray, B) -> np.ndarray:
    """y[j] = B[j, :] X[:, j], length n."""
    Bm = _sensing_entries(B)
    X = np.asarray(X)
    if X.shape != (Bm.shape[1], Bm.shape[0]):
        raise ValueError("data matrix must be s x n matching the sensing matrix")
    return np.einsum("jl,lj->j", Bm, X)


def apply_measurement_adjoint(y: np.ndarray, B) -> np.ndarray:
    """Adjoint of apply_measurement: column j of the result is y[j] conj(B[j, :])."""
    Bm = _sensing_entries(B)
    y = np.asarray(y).ravel()
    if y.shape[0] != Bm.shape[0]:
        raise ValueError("measurement length must match the sensing matrix rows")
    return (np.conj(Bm) * y[:, None]).T


def build_vandermonde_factors(model: PointSourceModel,
                              shape: LiftShape) -> VandermondeFactors:
    """Steering factors of the lifted data matrix.

    vec_hankel(synthesize_data_matrix(model, n)) equals
    lifted_left @ diag(amps) @ right.T.
    """
    if shape.s != model.s:
        raise ValueError("shape row count must match the model orientation dimension")
    left = steering_matrix(model.taus, shape.n1)
    right = steering_matrix(model.taus, shape.n2)
    lifted_left = (left[:, None, :] * model.orients[None, :, :]) \
        .reshape(shape.n1 * shape.s, model.r)
    return VandermondeFactors(left=left, right=right, lifted_left=lifted_left)


def noise_sigma(X: np.ndarray, snr_db: float) -> float:
    """Per-entry noise scale sigma with SNR_dB = 20 log10(||X||_F / (sigma sqrt(s n)))."""
    X = np.asarray(X)
    return float(np.linalg.norm(X) / (np.sqrt(X.size) * 10.0 ** (snr_db / 20.0)))


def add_noise(X: np.ndarray, snr_db: float, seed=None,
              real_noise: bool = False) -> np.ndarray:
    """X plus i.i.d. Gaussian noise at the prescribed SNR.

    Complex mode (default) splits the per-entry variance sigma^2 evenly
    between real and imaginary parts; real_noise=True draws real noise with
    per-entry variance sigma^2.  snr_db = inf returns a copy of X.
    """
    X = np.asarray(X, dtype=np.complex128)
    if np.isinf(snr_db):
        return X.copy()
    sigma = noise_sigma(X, snr_db)
    rng = np.random.default_rng(seed)
    if real_noise:
        E = sigma * rng.standard_normal(X.shape)
    else:
        E = sigma / np.sqrt(2.0) * (rng.standard_normal(X.shape)
                                    + 1j * rng.standard_normal(X.shape))
    return X + E


def _gram_sigma_min(F: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(F.conj().T @ F)
    return float(max(eigs[0], 0.0))


def incoherence_diagnostic(model: PointSourceModel,
                           shape: LiftShape) -> IncoherenceReport:
    """Smallest eigenvalues of the steering Gram matrices on both factors.

    A numerically singular Gram (near-coincident frequencies) yields an
    infinite conditioning constant.
    """
    fac = build_vandermonde_factors(model, shape)
    sl = _gram_sigma_min(fac.left)
    sr = _gram_sigma_min(fac.right)
    mu_l = shape.n1 / sl if sl > shape.n1 * 1e-12 else np.inf
    mu_r = shape.n2 / sr if sr > shape.n2 * 1e-12 else np.inf
    return IncoherenceReport(sigma_min_left=sl, sigma_min_right=sr,
                             mu1=float(max(mu_l, mu_r)))


# ----------------------------------------------------------- serialization

def _complex_to_pairs(M: np.ndarray) -> list:
    """Column-major [re, im] pairs."""
    flat = np.asarray(M, dtype=np.complex128).ravel(order="F")
    return [[float(z.real), float(z.imag)] for z in flat]


def _pairs_to_complex(pairs, rows: int, cols: int) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    if arr.size != rows * cols:
        raise ValueError("serialized matrix has wrong length")
    return arr.reshape((rows, cols), order="F")


def problem_to_dict(model: PointSourceModel, subspace: SubspaceMatrix) -> dict:
    return {
        "n": subspace.n,
        "s": subspace.s,
        "r": model.r,
        "taus": [float(t) for t in model.taus],
        "amps": _complex_to_pairs(model.amps),
        "orients": _complex_to_pairs(model.orients),
        "B": _complex_to_pairs(subspace.entries),
        "distribution": subspace.distribution,
        "seed": subspace.seed,
    }


def problem_from_dict(doc: dict) -> tuple[PointSourceModel, SubspaceMatrix]:
    n, s, r = int(doc["n"]), int(doc["s"]), int(doc["r"])
    model = PointSourceModel(
        taus=np.asarray(doc["taus"], dtype=np.float64),
        amps=_pairs_to_complex(doc["amps"], r, 1).ravel(),
        orients=_pairs_to_complex(doc["orients"], s, r),
    )
    subspace = SubspaceMatrix(
        entries=_pairs_to_complex(doc["B"], n, s),
        distribution=str(doc["distribution"]),
        seed=None if doc.get("seed") is None else int(doc["seed"]),
    )
    return model, subspace


def save_problem(path, model: PointSourceModel, subspace: SubspaceMatrix) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_dict(model, subspace), fh, indent=1)
        fh.write("\n")


def load_problem(path) -> tuple[PointSourceModel, SubspaceMatrix]:
    with open(path) as fh:
        return problem_from_dict(json.load(fh))
