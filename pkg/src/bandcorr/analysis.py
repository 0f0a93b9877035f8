"""Sign alternations of the d=2 correlation and the oscillatory/logarithmic crossover."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import lattice_sums
from .correlation import corr_dim2
from .profile import BandModel, ProfileKind, build_moments
from .spectral import compute_params

__all__ = [
    "SignChangeReport",
    "CrossoverResult",
    "DominanceRow",
    "NoRootError",
    "GAMMA_BRACKET",
    "predicted_zeros",
    "predicted_zero_count",
    "count_sign_changes",
    "crossover_equation",
    "crossover_b",
    "dominance_map",
    "write_zeros_csv",
    "write_dominance_csv",
]

GAMMA_BRACKET = (1.0 / (2.0 * math.pi**2), 2.0 / math.pi**2)
SQRT_STEP = 0.2
BISECT_TOL = 1e-10


class NoRootError(ValueError):
    pass


@dataclass(frozen=True)
class SignChangeReport:
    b_range: tuple[float, float]
    zeros_found: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    predicted_zeros: tuple[float, ...]
    deviations: tuple[float, ...]  # found minus nearest prediction
    evaluator: str

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.zeros_found, self.zeros_found[1:])):
            raise ValueError("zeros must be strictly increasing")

    @property
    def max_deviation(self) -> float:
        return max((abs(d) for d in self.deviations), default=0.0)

    @property
    def count_mismatch(self) -> int:
        return len(self.zeros_found) - len(self.predicted_zeros)


def predicted_zeros(b_min: float, b_max: float) -> list[float]:
    """Zeros b_k = (k + 1/8)^2 / 2 of the asymptotic law lying in [b_min, b_max]."""
    k_lo = max(1, math.ceil(math.sqrt(2.0 * b_min) - 0.125))
    out = []
    k = k_lo
    while lattice_sums.asymptotic_zero(k) <= b_max:
        if lattice_sums.asymptotic_zero(k) >= b_min:
            out.append(lattice_sums.asymptotic_zero(k))
        k += 1
    return out


def predicted_zero_count(B: float) -> int:
    """floor(sqrt(2B) - 1/8) - 1: the number of b_k in [1, B]."""
    return math.floor(math.sqrt(2.0 * B) - 0.125) - 1


def _scan_grid(b_min: float, b_max: float) -> np.ndarray:
    pts = [math.sqrt(b_min)]
    while pts[-1] < math.sqrt(b_max):
        step = SQRT_STEP / 2 if pts[-1] ** 2 < 2.0 else SQRT_STEP
        pts.append(min(pts[-1] + step, math.sqrt(b_max)))
    return np.array(pts) ** 2


def _bisect(fn, lo: float, hi: float, flo: float) -> tuple[float, float]:
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def count_sign_changes(
    b_min: float, b_max: float, evaluator: str = "theta-series", precision: str = "auto"
) -> SignChangeReport:
    """Locate the sign changes of Re S2 on ``[b_min, b_max]``.

    The scan is uniform in sqrt(b) with step 0.2 (0.1 below b = 2); the
    zero spacing in sqrt(2b) is 1, so no simple zero of the asymptotic law
    can hide between grid points.  Each bracket is bisected to width 1e-10.

    ``evaluator`` is ``"theta-series"`` (the oracle, honouring ``precision``)
    or ``"asymptotic"`` (the leading law).
    """
    if not 0.5 <= b_min < b_max:
        raise ValueError("need 0.5 <= b_min < b_max")
    if evaluator == "theta-series":
        fn = lambda b: lattice_sums.re_s2_theta(b, precision=precision)  # noqa: E731
    elif evaluator == "asymptotic":
        fn = lattice_sums.re_s2_asymptotic
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")
    grid = [float(b) for b in _scan_grid(b_min, b_max)]
    vals = [fn(b) for b in grid]
    brackets = []
    for (b0, b1), (f0, f1) in zip(zip(grid, grid[1:]), zip(vals, vals[1:])):
        if f0 == 0.0:
            brackets.append((b0, b0))
        elif f0 * f1 < 0:
            brackets.append(_bisect(fn, b0, b1, f0))
    brackets = [(float(lo), float(hi)) for lo, hi in brackets]
    zeros = [0.5 * (lo + hi) for lo, hi in brackets]
    pred = predicted_zeros(b_min, b_max)
    all_pred = predicted_zeros(0.5, b_max + 10.0)
    devs = [z - min(all_pred, key=lambda p: abs(p - z)) for z in zeros]
    return SignChangeReport(
        b_range=(b_min, b_max),
        zeros_found=tuple(zeros),
        brackets=tuple(brackets),
        predicted_zeros=tuple(pred),
        deviations=tuple(devs),
        evaluator=evaluator,
    )


@dataclass(frozen=True)
class CrossoverResult:
    b_star: float
    gamma: float
    a: float
    c: float
    bracket_ok: bool
    residual: float

    def __post_init__(self):
        if not 2.0 * self.a > self.c:
            raise ValueError(f"need 2a > c, got a={self.a}, c={self.c}")


def crossover_equation(b: float, L: float, W: float, omega: float) -> float:
    """g(b) = log(L^2/W^2) - (3/2) log b - pi sqrt(2b) - log|log omega|; decreasing in b."""
    return (
        2.0 * math.log(L / W) - 1.5 * math.log(b) - math.pi * math.sqrt(2.0 * b)
        - math.log(abs(math.log(omega)))
    )


def crossover_b(L: float, W: float, omega: float) -> CrossoverResult:
    """Solve ``(L/W)^2 b^{-3/2} e^{-pi sqrt(2b)} = |log omega|`` for b > 1.

    Returns ``gamma = b_star / log(L/W)^2`` together with the exponents
    ``a, c`` of the parametrisation ``L = W^{1+a}``, ``omega = W^{-c}``.

    Raises
    ------
    NoRootError
        If g does not change sign on ``[1, 8 log(L/W)^2 / pi^2]``.
    """
    if not (L > W >= 2):
        raise ValueError("need L > W >= 2")
    if not 0.0 < omega < 1.0:
        raise ValueError("need 0 < omega < 1")
    ell = math.log(L / W)
    lo, hi = 1.0, 4.0 * GAMMA_BRACKET[1] * ell**2
    g = lambda b: crossover_equation(b, L, W, omega)  # noqa: E731
    if hi <= lo or not (g(lo) > 0 > g(hi)):
        raise NoRootError(
            f"no crossover root in [{lo}, {hi:.4g}] for L={L}, W={W}, omega={omega}"
        )
    b_star = optimize.brentq(g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    gamma = b_star / ell**2
    return CrossoverResult(
        b_star=b_star,
        gamma=gamma,
        a=ell / math.log(W),
        c=-math.log(omega) / math.log(W),
        bracket_ok=GAMMA_BRACKET[0] <= gamma <= GAMMA_BRACKET[1],
        residual=abs(g(b_star)),
    )


@dataclass(frozen=True)
class DominanceRow:
    omega: float
    b: float
    oscillatory: float
    oscillatory_amplitude: float  # oscillatory part with |sin| replaced by 1
    log_part: float
    dominant: str  # "oscillatory", "log" or "n/a" (b < 1)


def dominance_map(
    L: int,
    W: int,
    omega_grid,
    eta: float = 1e-6,
    profile: ProfileKind = ProfileKind.TOP_HAT,
) -> list[DominanceRow]:
    """Compare the two bracket terms of the d=2 correlation across omega.

    Dominance is decided on the oscillation amplitude, so a row does not
    flip merely because it sits near a zero of the sine.
    """
    omega_grid = list(omega_grid)
    if not omega_grid:
        raise ValueError("omega grid is empty")
    model = BandModel(2, L, W, profile)
    D = build_moments(model).Dscalar
    rows = []
    for w in omega_grid:
        p = compute_params(-0.5 * w, 0.5 * w, eta, model)
        if p.b < 1.0:
            rows.append(DominanceRow(w, p.b, math.nan, math.nan, math.nan, "n/a"))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            br = corr_dim2(model, p, with_trace=False)
        amp = L**2 / (math.pi * D * W**2) * math.exp(-math.pi * math.sqrt(2.0 * p.b)) * p.b**-0.75
        dominant = "oscillatory" if amp > abs(br.log_part) else "log"
        rows.append(DominanceRow(w, p.b, br.oscillatory_part, amp, br.log_part, dominant))
    return rows


def _fmt(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def write_zeros_csv(stream, report: SignChangeReport) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("k", "b_k_predicted", "b_k_found", "deviation"))
    for z, dev in zip(report.zeros_found, report.deviations):
        pred = z - dev
        k = round(math.sqrt(2.0 * pred) - 0.125)
        w.writerow((k, _fmt(pred), _fmt(z), _fmt(dev)))


def write_dominance_csv(stream, rows) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("omega", "b", "osc", "log", "dominant"))
    for r in rows:
        w.writerow((_fmt(r.omega), _fmt(r.b), _fmt(r.oscillatory), _fmt(r.log_part), r.dominant))
