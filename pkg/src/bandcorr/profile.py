"""Variance profile of a random band matrix on the torus.

The profile ``S_{x0} = f([x]_L / W) / (M - 1)`` is a circulant matrix on the
discrete torus ``[-L/2, L/2)^d``.  Everything downstream (traces, moments,
Fourier symbols) is derived from the row ``S_{x0}`` computed here.

Two shipped profile functions are supported: the closed top-hat indicator of
the sup-norm unit ball and the gaussian ``exp(-|x|^2)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

__all__ = [
    "ProfileKind",
    "BandModel",
    "ProfileMoments",
    "EpsilonCutoff",
    "ModelError",
    "torus_coords",
    "build_moments",
    "s_row",
    "s_hat",
    "q_quartic",
    "epsilon_cutoff",
    "moments_report",
]

ISOTROPY_TOL = {1: 1e-9, 2: 1e-6}
EPS_GRID_POINTS = 512
# beyond this many sites the row is never materialised
_ENUMERATION_LIMIT = 1 << 24


class ModelError(ValueError):
    """Invalid band model or degenerate profile."""


class ProfileKind(str, enum.Enum):
    TOP_HAT = "top-hat"
    GAUSSIAN = "gaussian"

    def __call__(self, v: np.ndarray) -> np.ndarray:
        """Evaluate f on points ``v`` of shape ``(..., d)``."""
        v = np.asarray(v, dtype=float)
        if self is ProfileKind.TOP_HAT:
            return (np.max(np.abs(v), axis=-1) <= 1.0).astype(float)
        return np.exp(-np.sum(v * v, axis=-1))


@dataclass(frozen=True)
class BandModel:
    d: int
    L: int
    W: int
    profile: ProfileKind = ProfileKind.TOP_HAT

    def __post_init__(self):
        object.__setattr__(self, "profile", ProfileKind(self.profile))
        if self.d not in (1, 2):
            raise ModelError(f"dimension must be 1 or 2, got {self.d}")
        if int(self.L) != self.L or self.L < 2:
            raise ModelError(f"L must be an integer >= 2, got {self.L}")
        if int(self.W) != self.W or self.W < 1:
            raise ModelError(f"W must be an integer >= 1, got {self.W}")
        if self.W >= self.L:
            raise ModelError(f"band width W={self.W} must be smaller than L={self.L}")
        if self.profile is ProfileKind.TOP_HAT and 2 * self.W + 1 > self.L:
            raise ModelError(f"top-hat support 2W+1={2 * self.W + 1} exceeds L={self.L}")

    @property
    def n_sites(self) -> int:
        return self.L**self.d


@dataclass(frozen=True)
class ProfileMoments:
    M: float
    I: float
    Dmat: np.ndarray = field(repr=False)
    Dscalar: float
    Q: float
    D0: np.ndarray = field(repr=False)

    def __hash__(self):
        return hash((self.M, self.Dscalar, self.Q))


@dataclass(frozen=True)
class EpsilonCutoff:
    """Result of the quadratic-bound scan of ``a(q) = I - S_W(q)``."""

    eps: float
    c4: float
    c5: float
    delta: float


def _torus_axis(L: int) -> np.ndarray:
    start = -(L // 2)
    return np.arange(start, start + L)


def torus_coords(model: BandModel) -> np.ndarray:
    """Torus points in FFT order: entry ``k`` holds the representative of ``k mod L``.

    Shape ``(L,)`` for d=1 and ``(L, L, 2)`` for d=2.
    """
    ax = np.fft.ifftshift(_torus_axis(model.L))
    if model.d == 1:
        return ax
    return np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)


def _require_enumerable(model: BandModel):
    if model.n_sites > _ENUMERATION_LIMIT:
        raise ModelError(f"torus with {model.n_sites} sites is too large to enumerate")


def _profile_values(model: BandModel) -> np.ndarray:
    v = torus_coords(model) / model.W
    if model.d == 1:
        v = v[:, None]
    return model.profile(v)


@lru_cache(maxsize=64)
def s_row(model: BandModel) -> np.ndarray:
    """Row ``S_{x0}`` in FFT order, i.e. ``s_row(model)[x % L]`` is ``S_{x0}``."""
    _require_enumerable(model)
    fx = _profile_values(model)
    row = fx / (fx.sum() - 1.0)
    row.setflags(write=False)
    return row


def _top_hat_power_sums(W: int) -> tuple[int, int, int]:
    """Exact sums of x^0, x^2, x^4 over x = -W..W."""
    n = W
    s0 = 2 * n + 1
    s2 = n * (n + 1) * (2 * n + 1) // 3
    s4 = n * (n + 1) * (2 * n + 1) * (3 * n * n + 3 * n - 1) // 15
    return s0, s2, s4


def _moments_top_hat(model: BandModel) -> tuple[float, np.ndarray, float]:
    # closed-form lattice power sums, exact for any W
    s0, s2, s4 = _top_hat_power_sums(model.W)
    W = model.W
    if model.d == 1:
        M = s0
        Dmat = np.array([[0.5 * s2 / W**2 / (M - 1)]])
        D = Dmat[0, 0]
        Q = s4 / (32.0 * W**4 * D**2 * (M - 1))
        return float(M), Dmat, Q
    M = s0 * s0
    d11 = 0.5 * s0 * s2 / W**2 / (M - 1)
    Dmat = np.array([[d11, 0.0], [0.0, d11]])
    # sum over the square of (x1^2 + x2^2)^2
    quartic = 2 * s0 * s4 + 2 * s2 * s2
    Q = quartic / (32.0 * W**4 * d11**2 * (M - 1))
    return float(M), Dmat, Q


def _moments_enumerated(model: BandModel) -> tuple[float, np.ndarray, float]:
    _require_enumerable(model)
    fx = _profile_values(model)
    M = math.fsum(fx.ravel())
    S = fx / (M - 1.0)
    x = torus_coords(model).astype(float) / model.W
    if model.d == 1:
        x = x[:, None]
    xs = x.reshape(-1, model.d)
    Sf = S.ravel()
    Dmat = np.empty((model.d, model.d))
    for i in range(model.d):
        for j in range(model.d):
            Dmat[i, j] = 0.5 * math.fsum(xs[:, i] * xs[:, j] * Sf)
    Dinv_half = np.linalg.inv(np.linalg.cholesky(Dmat))
    y = xs @ Dinv_half.T
    Q = math.fsum(Sf * np.sum(y * y, axis=1) ** 2) / 32.0
    return M, Dmat, Q


def _continuum_covariance(model: BandModel) -> np.ndarray:
    d = model.d
    if model.profile is ProfileKind.TOP_HAT:
        # (1/2) int_{[-1,1]^d} x_i^2 dx = (1/2)(2/3) 2^(d-1)
        return np.eye(d) * (2.0 ** (d - 1) / 3.0)
    if d == 1:
        val, _ = integrate.quad(lambda x: 0.5 * x * x * math.exp(-x * x), -8, 8, epsabs=1e-14)
        return np.array([[val]])
    diag, _ = integrate.dblquad(
        lambda y, x: 0.5 * x * x * math.exp(-x * x - y * y), -8, 8, -8, 8, epsabs=1e-12
    )
    off, _ = integrate.dblquad(
        lambda y, x: 0.5 * x * y * math.exp(-x * x - y * y), -8, 8, -8, 8, epsabs=1e-12
    )
    return np.array([[diag, off], [off, diag]])


@lru_cache(maxsize=64)
def build_moments(model: BandModel) -> ProfileMoments:
    """All profile moments: M, I = M/(M-1), D_ij, the scalar D, Q and D_0.

    Top-hat moments use exact closed-form power sums (any W); the gaussian
    profile is summed site by site over the torus.

    Raises
    ------
    ModelError
        If D is not a multiple of the identity within ``ISOTROPY_TOL``, or
        D_0 is not positive definite.
    """
    if model.profile is ProfileKind.TOP_HAT:
        M, Dmat, Q = _moments_top_hat(model)
    else:
        M, Dmat, Q = _moments_enumerated(model)
    if M <= 1.0:
        raise ModelError(f"profile mass M={M} must exceed 1")
    D = float(np.trace(Dmat) / model.d)
    if D <= 0:
        raise ModelError("diffusion coefficient is not positive")
    tol = ISOTROPY_TOL[model.d]
    if np.max(np.abs(Dmat - D * np.eye(model.d))) > tol * D:
        raise ModelError(f"covariance matrix {Dmat.tolist()} is not isotropic within {tol}")
    D0 = _continuum_covariance(model)
    if np.min(np.linalg.eigvalsh(D0)) <= 0:
        raise ModelError("continuum covariance D0 is not positive definite")
    Dmat.setflags(write=False)
    D0.setflags(write=False)
    return ProfileMoments(M=M, I=M / (M - 1.0), Dmat=Dmat, Dscalar=D, Q=float(Q), D0=D0)


def _q_vector(model: BandModel, q) -> np.ndarray:
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if q.shape != (model.d,):
        raise ValueError(f"q must have {model.d} components, got shape {q.shape}")
    return q


def _dirichlet(theta: float, W: int) -> float:
    # sum_{x=-W}^{W} cos(theta x)
    half = 0.5 * theta
    s = math.sin(half)
    if abs(s) < 1e-8:
        return 2 * W + 1 - theta * theta * W * (W + 1) * (2 * W + 1) / 6.0
    return math.sin((2 * W + 1) * half) / s


def s_hat(model: BandModel, q) -> float:
    """Fourier symbol ``S_W(q) = sum_x cos(q.x / W) S_{x0}`` (real since f is even)."""
    q = _q_vector(model, q)
    if model.profile is ProfileKind.TOP_HAT:
        M = float((2 * model.W + 1) ** model.d)
        prod = 1.0
        for qi in q:
            prod *= _dirichlet(qi / model.W, model.W)
        return prod / (M - 1.0)
    # the gaussian factorises over coordinates, so one axis sum per component
    x = _torus_axis(model.L).astype(float)
    g = np.exp(-((x / model.W) ** 2))
    M = math.fsum(g) ** model.d
    prod = 1.0
    for qi in q:
        prod *= math.fsum(np.cos(qi / model.W * x) * g)
    return prod / (M - 1.0)


def q_quartic(model: BandModel, q) -> float:
    """Quartic Taylor coefficient ``(1/4!) sum_x (x.q/W)^4 S_{x0}``."""
    q = _q_vector(model, q)
    if model.profile is ProfileKind.TOP_HAT:
        s0, s2, s4 = _top_hat_power_sums(model.W)
        M = s0**model.d
        t = q / model.W
        if model.d == 1:
            total = s4 * t[0] ** 4
        else:
            # (a x + b y)^4 over the square: odd powers vanish
            a, b = t
            total = s0 * s4 * (a**4 + b**4) + 6 * s2 * s2 * a * a * b * b
        return total / (24.0 * (M - 1))
    S = s_row(model)
    x = torus_coords(model)
    proj = x * (q[0] / model.W) if model.d == 1 else x @ (q / model.W)
    return math.fsum((proj**4 * S).ravel()) / 24.0


def _scan_directions(d: int) -> list[np.ndarray]:
    if d == 1:
        return [np.array([1.0])]
    return [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2.0)]


@lru_cache(maxsize=64)
def epsilon_cutoff(model: BandModel) -> EpsilonCutoff:
    """Largest radius on which ``a(q) = I - S_W(q)`` is two-sided quadratic.

    The radial grid has ``EPS_GRID_POINTS`` points on ``[0, pi W]`` and is
    scanned along the coordinate axis (and the diagonal for d=2).  A radius
    ``r`` is admissible when ``D/2 <= a(q)/|q|^2 <= 2D`` for every grid point
    up to ``r`` and ``max a(q)/|q|^2 * r^2 <= 1``.  ``delta`` is
    ``1 - max |S_W(q)|`` over grid points beyond the cutoff; it may be
    negative for small W.
    """
    mom = build_moments(model)
    D, I = mom.Dscalar, mom.I
    radii = np.linspace(0.0, math.pi * model.W, EPS_GRID_POINTS)[1:]
    ratios, symbols, admissible = [], [], []
    for direction in _scan_directions(model.d):
        sym = np.array([s_hat(model, r * direction) for r in radii])
        ratio = (I - sym) / radii**2
        ok = (ratio >= 0.5 * D) & (ratio <= 2.0 * D)
        ok &= np.maximum.accumulate(ratio) * radii**2 <= 1.0
        admissible.append(len(ok) if ok.all() else int(np.argmin(ok)))
        ratios.append(ratio)
        symbols.append(sym)
    n = min(admissible)
    if n == 0:
        raise ModelError(f"no admissible cutoff radius >= grid step {radii[0]:.3g}")
    c4 = min(float(r[:n].min()) for r in ratios)
    c5 = max(float(r[:n].max()) for r in ratios)
    beyond = [np.abs(sym[n:]) for sym in symbols if n < len(sym)]
    delta = 1.0 - max(float(b.max()) for b in beyond) if beyond else 1.0
    return EpsilonCutoff(eps=float(radii[n - 1]), c4=c4, c5=c5, delta=delta)


def moments_report(model: BandModel, moments: ProfileMoments | None = None) -> str:
    """Flat ``key = value`` text report of the model and its moments."""
    m = moments or build_moments(model)
    lines = [
        f"dim = {model.d}",
        f"L = {model.L}",
        f"W = {model.W}",
        f"profile = {model.profile.value}",
        f"M = {m.M:.17g}",
        f"I = {m.I:.17g}",
        f"D = {m.Dscalar:.17g}",
        f"Q = {m.Q:.17g}",
    ]
    for i in range(model.d):
        for j in range(model.d):
            lines.append(f"D_{i + 1}{j + 1} = {m.Dmat[i, j]:.17g}")
    for i in range(model.d):
        for j in range(model.d):
            lines.append(f"D0_{i + 1}{j + 1} = {m.D0[i, j]:.17g}")
    return "\n".join(lines) + "\n"
