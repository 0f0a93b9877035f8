"""Monte Carlo ground truth from sampled band matrices.

Each matrix is drawn from its own generator seeded with ``(seed, index)``,
so any single sample can be regenerated without replaying the others.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .profile import BandModel, s_row

__all__ = [
    "EntryLaw",
    "EnsembleSpec",
    "TestFunction",
    "McEstimate",
    "variance_matrix",
    "sample_matrix",
    "local_dos",
    "local_dos_from_eigenvalues",
    "sample_dos_pairs",
    "estimate_correlation",
    "jackknife",
    "write_samples_csv",
]


class EntryLaw(str, enum.Enum):
    COMPLEX_GAUSSIAN = "complex-gaussian"


@dataclass(frozen=True)
class EnsembleSpec:
    model: BandModel
    seed: int = 0
    n_samples: int = 1
    entry_law: EntryLaw = EntryLaw.COMPLEX_GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "entry_law", EntryLaw(self.entry_law))
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class TestFunction:
    """Gaussian test function ``phi(E) = sqrt(2 pi) e^{-E^2/2}``, normalised to integrate to 2 pi."""

    kind = "gaussian-normalized"
    __test__ = False  # not a pytest class

    def __call__(self, x):
        return math.sqrt(2.0 * math.pi) * np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)

    def scaled(self, x, eta: float):
        """phi^eta(x) = phi(x / eta) / eta."""
        return self(np.asarray(x, dtype=float) / eta) / eta


GAUSSIAN_PHI = TestFunction()


def variance_matrix(model: BandModel) -> np.ndarray:
    """Dense circulant S with ``S[x, y] = S_{x-y, 0}``, sites in row-major torus order."""
    row = s_row(model)
    L = model.L
    i = np.arange(L)
    diff = (i[None, :] - i[:, None]) % L
    if model.d == 1:
        return row[diff]
    return row[diff[:, None, :, None], diff[None, :, None, :]].reshape(L * L, L * L)


def sample_matrix(spec: EnsembleSpec, index: int, S: np.ndarray | None = None) -> np.ndarray:
    """Hermitian H with ``E|H_xy|^2 = S_xy``.

    Off-diagonal entries above the diagonal are ``sqrt(S_xy) (g + i g')/sqrt(2)``
    with independent standard normals; the diagonal is real with variance ``S_xx``.
    """
    if S is None:
        S = variance_matrix(spec.model)
    n = S.shape[0]
    rng = np.random.default_rng([spec.seed, index])
    z = rng.standard_normal((2, n, n))
    A = np.sqrt(S) * (z[0] + 1j * z[1]) / math.sqrt(2.0)
    H = np.triu(A, 1)
    H = H + H.conj().T
    H[np.diag_indices(n)] = np.sqrt(np.diag(S)) * rng.standard_normal(n)
    return H


def local_dos_from_eigenvalues(lam, n_sites: int, E: float, eta: float, phi=GAUSSIAN_PHI) -> float:
    """``L^{-d} sum_k phi^eta(lambda_k / 2 - E)``."""
    return float(np.sum(phi.scaled(np.asarray(lam) / 2.0 - E, eta))) / n_sites


def local_dos(H: np.ndarray, E: float, eta: float, phi=GAUSSIAN_PHI) -> float:
    """Smoothed local density of states ``L^{-d} Tr phi^eta(H/2 - E)``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    lam = np.linalg.eigvalsh(H)
    return local_dos_from_eigenvalues(lam, H.shape[0], E, eta, phi)


def sample_dos_pairs(
    spec: EnsembleSpec, E1: float, E2: float, eta: float, phi1=GAUSSIAN_PHI, phi2=GAUSSIAN_PHI
) -> np.ndarray:
    """Array of shape (n_samples, 2) with (Y1, Y2) for sample indices 0..n-1."""
    S = variance_matrix(spec.model)
    out = np.empty((spec.n_samples, 2))
    for k in range(spec.n_samples):
        lam = np.linalg.eigvalsh(sample_matrix(spec, k, S))
        out[k, 0] = local_dos_from_eigenvalues(lam, S.shape[0], E1, eta, phi1)
        out[k, 1] = local_dos_from_eigenvalues(lam, S.shape[0], E2, eta, phi2)
    return out


def jackknife(values: np.ndarray, stat) -> tuple[float, float]:
    """Jackknife estimate and standard error of ``stat`` over the rows of ``values``.

    ``stat`` maps leave-one-out row sums and counts to the statistic; see
    :func:`estimate_correlation` for the calling convention.
    """
    n = len(values)
    total = values.sum(axis=0)
    full = stat(total, n)
    loo = np.array([stat(total - v, n - 1) for v in values])
    err = math.sqrt((n - 1) / n * np.sum((loo - loo.mean(axis=0)) ** 2, axis=0))
    return float(full), err


@dataclass(frozen=True)
class McEstimate:
    mean_Y1: float
    mean_Y2: float
    cov: float
    normalized: float  # cov / (mean_Y1 mean_Y2)
    stderr_mean_Y1: float
    stderr_mean_Y2: float
    stderr_cov: float
    stderr_normalized: float
    n_samples: int
    samples: np.ndarray

    @property
    def significance(self) -> float:
        """Normalized covariance in units of its standard error."""
        return self.normalized / self.stderr_normalized if self.stderr_normalized > 0 else math.inf


def _moment_rows(y: np.ndarray) -> np.ndarray:
    return np.column_stack([y[:, 0], y[:, 1], y[:, 0] * y[:, 1]])


def _cov_stat(s, n):
    m1, m2, m12 = s / n
    return (m12 - m1 * m2) * n / (n - 1)


def _norm_stat(s, n):
    m1, m2, _ = s / n
    return _cov_stat(s, n) / (m1 * m2)


def estimate_correlation(
    spec: EnsembleSpec,
    E1: float,
    E2: float,
    eta: float,
    phi1=GAUSSIAN_PHI,
    phi2=GAUSSIAN_PHI,
    samples: np.ndarray | None = None,
) -> McEstimate:
    """Sample covariance of (Y1, Y2) and its normalisation by the means, with jackknife errors."""
    if spec.n_samples < 50:
        raise ValueError("estimate_correlation needs at least 50 samples")
    y = samples if samples is not None else sample_dos_pairs(spec, E1, E2, eta, phi1, phi2)
    n = len(y)
    rows = _moment_rows(y)
    cov, se_cov = jackknife(rows, _cov_stat)
    norm, se_norm = jackknife(rows, _norm_stat)
    m1, m2 = y.mean(axis=0)
    se1, se2 = y.std(axis=0, ddof=1) / math.sqrt(n)
    return McEstimate(
        mean_Y1=float(m1),
        mean_Y2=float(m2),
        cov=cov,
        normalized=norm,
        stderr_mean_Y1=float(se1),
        stderr_mean_Y2=float(se2),
        stderr_cov=se_cov,
        stderr_normalized=se_norm,
        n_samples=n,
        samples=y,
    )


def write_samples_csv(stream, samples: np.ndarray) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("index", "Y1", "Y2"))
    for k, (y1, y2) in enumerate(samples):
        w.writerow((k, format(float(y1), ".17g"), format(float(y2), ".17g")))
