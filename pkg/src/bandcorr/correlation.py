"""Traces Tr S/(1 - alpha S)^2 and the density-density correlation built from them.

The exact trace is a finite Fourier sum over the dual torus because S is
circulant.  The closed forms below replace that sum by lattice sums of the
continuum symbol ``I - D|q|^2``; each comes with an error envelope assembled
from the corresponding O(.) terms with all constants set to one.  Envelopes
are magnitudes for reporting and scaling checks, not certified bounds.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import lattice_sums
from .profile import BandModel, ProfileMoments, build_moments, epsilon_cutoff, s_row
from .spectral import DIFFUSIVE_MIN_B, MEAN_FIELD_MAX_B, SpectralParams

__all__ = [
    "CorrelationBreakdown",
    "TraceOracle",
    "PoleError",
    "SizeLimitError",
    "ORACLE_MAX_L",
    "symbol_eigenvalues",
    "trace_oracle",
    "trace_dense",
    "trace_dim1_closed",
    "trace_dim1_envelope",
    "trace_dim2_leading",
    "trace_dim2_envelope",
    "theta_leading",
    "corr_from_trace",
    "corr_dim1",
    "corr_dim1_meanfield",
    "corr_dim1_diffusive",
    "corr_dim2",
    "CSV_FIELDS",
    "write_csv",
]

ORACLE_MAX_L = {1: 4096, 2: 2048}
_POLE_TOL = 1e-12


class PoleError(ZeroDivisionError):
    """1 - alpha * S_hat(q) vanishes at some dual-lattice point."""


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class TraceOracle:
    full: complex  # exact Tr S/(1 - alpha S)^2
    cutoff: complex  # the same sum restricted to |q| <= eps
    eps: float
    envelope: float  # L^d / (delta W^d); inf when delta <= 0

    @property
    def remainder(self) -> complex:
        return self.full - self.cutoff


@dataclass(frozen=True)
class CorrelationBreakdown:
    dim: int
    leading: float
    oscillatory_part: float
    log_part: float
    error_envelope: float
    trace_value: complex
    b: float
    terms: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.dim == 1 and self.log_part != 0.0:
            raise ValueError("log_part must vanish in d=1")
        if not self.error_envelope >= 0.0:
            raise ValueError("error envelope must be non-negative")

    @property
    def envelope_dominated(self) -> bool:
        return abs(self.leading) < self.error_envelope


# --------------------------------------------------------------------------
# Exact trace
# --------------------------------------------------------------------------


def symbol_eigenvalues(model: BandModel) -> np.ndarray:
    """Eigenvalues S_hat(p) of the circulant S on the dual torus, FFT order."""
    row = s_row(model)
    spec = np.fft.fft(row) if model.d == 1 else np.fft.fft2(row)
    return spec.real


def _dual_radius(model: BandModel) -> np.ndarray:
    # |q| with q = W p, p = 2 pi k / L, k the torus representative
    k = np.fft.fftfreq(model.L, d=1.0 / model.L)
    q = 2.0 * math.pi * model.W / model.L * k
    if model.d == 1:
        return np.abs(q)
    return np.hypot(q[:, None], q[None, :])


def trace_oracle(model: BandModel, params: SpectralParams) -> TraceOracle:
    """Exact ``Tr S/(1 - alpha S)^2`` by diagonalising the circulant S.

    Also returns the sum restricted to ``|q| <= eps`` so the cutoff
    remainder can be compared with its ``L^d/(delta W^d)`` envelope.

    Raises
    ------
    SizeLimitError
        If L exceeds 4096 (d=1) or 2048 (d=2).
    PoleError
        If ``|1 - alpha S_hat(q)|`` drops below 1e-12 at a dual point.
    """
    if model.L > ORACLE_MAX_L[model.d]:
        raise SizeLimitError(
            f"L={model.L} exceeds the oracle limit {ORACLE_MAX_L[model.d]} in d={model.d}"
        )
    lam = symbol_eigenvalues(model)
    denom = 1.0 - params.alpha * lam
    if np.min(np.abs(denom)) < _POLE_TOL:
        raise PoleError("1 - alpha * S_hat vanishes on the dual lattice")
    terms = lam / denom**2
    cut = epsilon_cutoff(model)
    inside = _dual_radius(model) <= cut.eps
    full = complex(math.fsum(terms.real.ravel()), math.fsum(terms.imag.ravel()))
    part = terms[inside]
    cutoff = complex(math.fsum(part.real), math.fsum(part.imag))
    envelope = model.n_sites / (cut.delta * model.W**model.d) if cut.delta > 0 else math.inf
    return TraceOracle(full=full, cutoff=cutoff, eps=cut.eps, envelope=envelope)


def trace_dense(model: BandModel, alpha: complex) -> complex:
    """``Tr S (1 - alpha S)^{-2}`` from the dense circulant matrix; O(L^{3d})."""
    if model.n_sites > 4096:
        raise SizeLimitError("dense trace limited to 4096 sites")
    row = s_row(model)
    if model.d == 1:
        idx = (np.arange(model.L)[None, :] - np.arange(model.L)[:, None]) % model.L
        S = row[idx]
    else:
        L = model.L
        i = np.arange(L)
        dx = (i[None, :] - i[:, None]) % L
        S = row[dx[:, None, :, None], dx[None, :, None, :]].reshape(L * L, L * L)
    A = np.eye(model.n_sites) - alpha * S
    X = np.linalg.solve(A, S)
    return complex(np.trace(np.linalg.solve(A, X)))


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------


def _lattice_prefactor(model: BandModel, moments: ProfileMoments) -> float:
    return (model.L / (2.0 * math.pi * model.W)) ** 4 / moments.Dscalar**2


def trace_dim1_envelope(model: BandModel, params: SpectralParams) -> float:
    L, W, w = model.L, model.W, params.omega
    return (
        L / W * w**-0.5
        + L / W**2 * w**-2.5
        + W**2 / (w**5 * L**3)
        + L**2 / (W**3 * w**2) * math.exp(-math.pi * math.sqrt(2.0 * w) * L / W)
    )


def trace_dim1_closed(
    model: BandModel, params: SpectralParams, moments: ProfileMoments | None = None
) -> tuple[complex, float]:
    """Closed-form d=1 trace and its four-term envelope.

    ``(1/D^2)(L/2 pi W)^4 S1(zeta b)`` with S1 summed over all of Z, which
    is ``(L^4/(32 pi^3 D^2 W^4)) (zeta b)^{-3/2} (coth + pi sqrt(zeta b) csch^2)``.
    """
    if model.d != 1:
        raise ValueError("trace_dim1_closed needs d=1")
    if params.b <= 0:
        raise ValueError("b must be positive")
    moments = moments or build_moments(model)
    value = _lattice_prefactor(model, moments) * lattice_sums.s1_closed(params.zeta * params.b)
    return value, trace_dim1_envelope(model, params)


def trace_dim2_envelope(model: BandModel, params: SpectralParams) -> float:
    return (model.L / model.W) ** 2 * (abs(math.log(params.u)) + params.eta**2 / params.omega**3)


def _s2_value(b: float, precision: str = "auto") -> complex:
    re = lattice_sums.re_s2_theta(b, precision=precision)
    # Im S2 ~ -pi/b; size R so the tail bound stays well under 1e-3 of it
    target = 1e-3 * math.pi / (2.0 * b) * 0.5
    R = max(4.0, math.sqrt(2.0 * b) + 2.0)
    while lattice_sums._tail_inverse_fourth_2d(math.floor(R)) > target:
        R *= 1.5
    im = lattice_sums.s2_direct(b, R).value.imag
    return complex(re, im)


def trace_dim2_leading(
    model: BandModel,
    params: SpectralParams,
    moments: ProfileMoments | None = None,
    precision: str = "auto",
) -> tuple[complex, float]:
    """``(1/D^2)(L/2 pi W)^4 S2(b)`` and the ``(L/W)^2 (|log u| + eta^2/omega^3)`` envelope.

    The real part of S2 comes from the theta series, the imaginary part from
    the shell sum.
    """
    if model.d != 2:
        raise ValueError("trace_dim2_leading needs d=2")
    if params.b < 1:
        raise ValueError(f"the d=2 leading term needs b >= 1, got b={params.b}")
    moments = moments or build_moments(model)
    value = _lattice_prefactor(model, moments) * _s2_value(params.b, precision)
    return value, trace_dim2_envelope(model, params)


# --------------------------------------------------------------------------
# Correlation
# --------------------------------------------------------------------------


def theta_leading(model: BandModel, params: SpectralParams, trace: complex) -> float:
    """Leading part of Theta: ``2 W^d/(pi^4 nu^4 L^d) Re trace``."""
    d = model.d
    return 2.0 * model.W**d / (math.pi**4 * params.nu**4 * model.L**d) * complex(trace).real


def corr_from_trace(model: BandModel, params: SpectralParams, trace: complex) -> float:
    """Normalized correlation ``(LW)^{-d} Theta`` for a given trace."""
    return theta_leading(model, params, trace) / (model.L * model.W) ** model.d


def _corr_dim1_envelope(model, params, c0):
    L, W, w, eta = model.L, model.W, params.omega, params.eta
    return (
        w**-0.5 / (L * W) * (1.0 + eta / w**2)
        + 1.0 / (w * L**2) * (1.0 + eta / w**2)
        + math.exp(-math.pi * math.sqrt(2.0 * w) * L / W) / (w * W**3)
        + W ** (-c0 - 1.0) / (L * math.sqrt(w + eta))
        + W**-c0 / (L**2 * (w + eta))
    )


def _require_dim(model: BandModel, d: int):
    if model.d != d:
        raise ValueError(f"needs d={d}, got d={model.d}")


def corr_dim1(
    model: BandModel,
    params: SpectralParams,
    moments: ProfileMoments | None = None,
    c0: float = 1.0,
) -> CorrelationBreakdown:
    """Normalized d=1 correlation ``f(b) / (16 (pi nu)^{5/2} sqrt(D) omega^{3/2} L W)``.

    Valid for every b > 0.  The envelope carries the five error families
    with unit constants; ``c0`` is the exponent of the W^{-c0} family.
    """
    _require_dim(model, 1)
    moments = moments or build_moments(model)
    nu, w = params.nu, params.omega
    pref = 16.0 * (math.pi * nu) ** 2.5 * math.sqrt(moments.Dscalar) * w**1.5 * model.L * model.W
    leading = lattice_sums.f_dim1(params.b) / pref
    trace, _ = trace_dim1_closed(model, params, moments)
    return CorrelationBreakdown(
        dim=1,
        leading=leading,
        oscillatory_part=leading,
        log_part=0.0,
        error_envelope=_corr_dim1_envelope(model, params, c0),
        trace_value=trace,
        b=params.b,
    )


def _regime_warning(name: str, ok: bool, b: float):
    if not ok:
        warnings.warn(f"{name} expansion used outside its regime (b={b:.4g})", stacklevel=3)


def corr_dim1_meanfield(
    model: BandModel,
    params: SpectralParams,
    moments: ProfileMoments | None = None,
    c0: float = 1.0,
) -> CorrelationBreakdown:
    """Small-b expansion: ``-(1/LW)[(W/L)/(2 pi^2 nu^2 omega^2) - (L/W)^3/(360 D^2 pi^4 nu^4)]``.

    ``terms`` holds the two bracket terms with the ``-1/(LW)`` applied.
    """
    _require_dim(model, 1)
    _regime_warning("mean-field", params.b < MEAN_FIELD_MAX_B, params.b)
    moments = moments or build_moments(model)
    L, W, nu, w, eta = model.L, model.W, params.nu, params.omega, params.eta
    D = moments.Dscalar
    t1 = -(W / L) / (2.0 * math.pi**2 * nu**2 * w**2) / (L * W)
    t2 = (L / W) ** 3 / (360.0 * D**2 * math.pi**4 * nu**4) / (L * W)
    env = (
        w**-0.5
        + 1.0 / (w**2.5 * W)
        + 1.0 / (w**2 * L)
        + eta**2 / w**4 * W / L
        + W**-c0 / math.sqrt(w + eta)
        + W / (L * (w + eta))
    ) / (L * W)
    lead = t1 + t2
    trace, _ = trace_dim1_closed(model, params, moments)
    return CorrelationBreakdown(1, lead, lead, 0.0, env, trace, params.b, terms=(t1, t2))


def corr_dim1_diffusive(
    model: BandModel,
    params: SpectralParams,
    moments: ProfileMoments | None = None,
    c0: float = 1.0,
    verbatim: bool = False,
) -> CorrelationBreakdown:
    """Large-b expansion ``-(L^2/W^4) b^{-3/2}/(16 sqrt2 pi^7 nu^4 D^2) [1 + 4 sqrt2 pi e^{-pi sqrt(2b)} sqrt(b) sin(pi sqrt(2b))]``.

    The correction amplitude follows from ``f(b) = -2 - 8 sqrt2 pi e^{-pi sqrt(2b)} sqrt(b) sin(pi sqrt(2b))``;
    ``verbatim=True`` drops that factor pi, giving the bracket ``1 + 4 sqrt2 e^{...} sqrt(b) sin``.
    ``terms`` is (main, correction).
    """
    _require_dim(model, 1)
    _regime_warning("diffusive", params.b > DIFFUSIVE_MIN_B, params.b)
    moments = moments or build_moments(model)
    L, W, nu, w, eta, b = model.L, model.W, params.nu, params.omega, params.eta, params.b
    D = moments.Dscalar
    main = -(L**2 / W**4) * b**-1.5 / (16.0 * math.sqrt(2.0) * math.pi**7 * nu**4 * D**2)
    s = math.pi * math.sqrt(2.0 * b)
    amp = 4.0 * math.sqrt(2.0) * (1.0 if verbatim else math.pi)
    corr = main * amp * math.exp(-s) * math.sqrt(b) * math.sin(s)
    inner = (
        1.0
        + math.sqrt(w) * L / W**2
        + b * (eta / w + w)
        + b**1.5 * W**2 / L**4 * (W**-c0 / math.sqrt(w + eta) + W / (L * (w + eta))) * math.exp(s)
    )
    env = abs(main) * 4.0 * math.sqrt(2.0) * math.exp(-s) * inner
    trace, _ = trace_dim1_closed(model, params, moments)
    return CorrelationBreakdown(1, main + corr, main + corr, 0.0, env, trace, b, terms=(main, corr))


def corr_dim2(
    model: BandModel,
    params: SpectralParams,
    moments: ProfileMoments | None = None,
    c0: float = 1.0,
    with_trace: bool = True,
) -> CorrelationBreakdown:
    """Normalized d=2 correlation for b >= 1 (intended for b >> 1).

    ``oscillatory = (L^2/(pi D W^2)) e^{-pi sqrt(2b)} b^{-3/4} sin(pi sqrt(2b) - pi/8)``,
    ``log_part = (Q - 1)|log omega|`` and
    ``leading = -(oscillatory - log_part) / (2 pi^5 D nu^4 L^2 W^2)``.
    """
    _require_dim(model, 2)
    if params.b < 1:
        raise ValueError(f"d=2 correlation needs b >= 1, got b={params.b}")
    _regime_warning("d=2 large-b", params.b >= DIFFUSIVE_MIN_B, params.b)
    moments = moments or build_moments(model)
    L, W, nu, w, eta, b = model.L, model.W, params.nu, params.omega, params.eta, params.b
    D, Q = moments.Dscalar, moments.Q
    s = math.pi * math.sqrt(2.0 * b)
    osc = L**2 / (math.pi * D * W**2) * math.exp(-s) * b**-0.75 * math.sin(s - math.pi / 8.0)
    log_part = (Q - 1.0) * abs(math.log(w))
    pref = 1.0 / (2.0 * math.pi**5 * D * nu**4 * L**2 * W**2)
    inner = (
        1.0
        + eta**2 / w**3
        + w * abs(math.log(w))
        + math.exp(-s) * b**0.25 * (1.0 + 1.0 / (w * W**2) + (L / W) ** 2 * b**-3)
        + W**-c0 * abs(math.log(w + eta))
        + W ** (2.0 - c0) / (L**2 * (w + eta))
    )
    trace = trace_dim2_leading(model, params, moments)[0] if with_trace else complex("nan")
    return CorrelationBreakdown(
        dim=2,
        leading=-pref * (osc - log_part),
        oscillatory_part=osc,
        log_part=log_part,
        error_envelope=pref * inner,
        trace_value=trace,
        b=b,
    )


CSV_FIELDS = ("L", "W", "omega", "eta", "b", "leading", "oscillatory", "log_part", "envelope")


def csv_row(model: BandModel, params: SpectralParams, br: CorrelationBreakdown) -> list[str]:
    vals = (model.L, model.W, params.omega, params.eta, br.b, br.leading,
            br.oscillatory_part, br.log_part, br.error_envelope)
    return [format(v, ".17g") if isinstance(v, float) else str(v) for v in vals]


def write_csv(stream, rows) -> None:
    """Write ``(model, params, breakdown)`` triples as CSV with a header."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for model, params, br in rows:
        w.writerow(csv_row(model, params, br))
