"""Invariant suites with TAP output, driven by ``bandcorr verify``.

Checks look functions up through their modules at call time, so a
monkeypatched implementation is what gets verified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, correlation, lattice_sums, montecarlo
from .profile import BandModel
from .spectral import compute_params

__all__ = ["Check", "SUITES", "run_suite", "format_tap"]


@dataclass
class Check:
    name: str
    ok: bool
    comments: tuple[str, ...] = ()


EPS = np.finfo(float).eps


def _within(err: float, d: lattice_sums.LatticeSumEval, rel: float = 8 * EPS) -> bool:
    # tail bound covers the truncation; rel * |value| covers rounding in both evaluations
    return err <= d.tail_bound + rel * max(1.0, abs(d.value))


def _poisson():
    out = []
    for z in (0.5, 1.0, 2.0):
        d = lattice_sums.poisson_direct(z, 1e6)
        err = abs(d.value - lattice_sums.poisson_closed(z))
        out.append(Check(f"Poisson sum 1/(z^2+q^2) at z={z}", _within(err, d),
                         (f"|direct - closed| = {err:.3e}, tail bound {d.tail_bound:.3e}",)))
    return out


def _inverse_quadratic():
    out = []
    for z in (0.5, 1.0, 2.0):
        d = lattice_sums.inverse_quadratic_direct(z, 1e6)
        err = abs(d.value - lattice_sums.inverse_quadratic_closed(z))
        out.append(Check(f"sum 1/(z+q^2) at z={z}", _within(err, d),
                         (f"|direct - closed| = {err:.3e}, tail bound {d.tail_bound:.3e}",)))
    return out


def _derivative_identity():
    out = []
    for z in (0.5, 1.0, 2.0):
        d = lattice_sums.s1_direct(z, 1e5)
        err = abs(d.value - lattice_sums.s1_closed(z))
        out.append(Check(f"sum 1/(z+q^2)^2 at z={z}", _within(err, d),
                         (f"|direct - closed| = {err:.3e}, tail bound {d.tail_bound:.3e}",)))
    return out


def _sum2():
    out = []
    for z in (0.5, 1.0, 3.0):
        d = lattice_sums.sum2_partial(z, 10**6)
        err = abs(d.value - lattice_sums.sum2_closed(z))
        out.append(Check(f"Re sum_m (m+iz)^-2 at z={z}", err <= d.tail_bound,
                         (f"|partial - closed| = {err:.3e}, bound {d.tail_bound:.3e}",)))
    return out


def _jacobi():
    out = []
    for t in (0.5, 1.0, 2.0):
        lhs = lattice_sums.theta3(t) ** 2
        rhs = lattice_sums.theta3_squared_lambert(t)
        out.append(Check(f"theta(t)^2 Lambert form at t={t}", abs(lhs - rhs) <= 1e-12 * abs(lhs),
                         (f"relative gap {abs(lhs - rhs) / abs(lhs):.3e}",)))
    return out


def _f_relation():
    worst = 0.0
    for b in np.geomspace(0.01, 100.0, 20):
        lhs = lattice_sums.re_s1_pure_imag(b) * 4.0 * math.sqrt(2.0) / math.pi * b**1.5
        rhs = lattice_sums.f_dim1(b)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return [Check("Re S1(ib) (4 sqrt2/pi) b^{3/2} = f(b) at 20 points", worst <= 1e-12,
                  (f"worst relative gap {worst:.3e}",))]


def _abel_plana_decay():
    worst = 0.0
    for b in (1.0, 5.0, 20.0):
        for x in (0.0, 1.0, 5.0):
            for y in (20.0, 40.0):
                for sgn in (1, -1):
                    v = abs(lattice_sums.g_b(complex(x, sgn * y), b)) * math.exp(-2 * math.pi * y)
                    worst = max(worst, v)
    return [Check("|g_b(x +- iy)| e^{-2 pi y} is negligible for large y", worst < 1e-40,
                  (f"largest sampled value {worst:.3e}",))]


def suite_identities():
    return (_poisson() + _inverse_quadratic() + _derivative_identity() + _sum2() + _jacobi()
            + _f_relation() + _abel_plana_decay())


def suite_oracles():
    out = []
    for zb in (1.0, 1j, 1 + 1j, 10j, 0.1j):
        d = lattice_sums.s1_direct(zb, 1e5)
        err = abs(lattice_sums.s1_closed(zb) - d.value)
        out.append(Check(f"s1_closed vs s1_direct at zb={zb}", _within(err, d),
                         (f"gap {err:.3e}, tail bound {d.tail_bound:.3e}",)))
    for b in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        d = lattice_sums.s2_direct(b, 4096)
        err = abs(lattice_sums.re_s2_theta(b) - d.value.real)
        out.append(Check(f"re_s2_theta vs s2_direct at b={b}", _within(err, d, rel=1e-12),
                         (f"gap {err:.3e}, tail bound {d.tail_bound:.3e}",)))
    for b in (2.0, 5.0, 10.0):
        err = abs(lattice_sums.re_s2_theta(b) - lattice_sums.re_s2_from_abel_plana(b))
        out.append(Check(f"re_s2_theta vs Abel-Plana at b={b}", err <= 1e-10, (f"gap {err:.3e}",)))
    for L in (12, 64):
        model = BandModel(1, L, 3)
        params = compute_params(-0.3, 0.2, 0.01, model)
        exact = correlation.trace_oracle(model, params).full
        dense = correlation.trace_dense(model, params.alpha)
        rel = abs(exact - dense) / abs(dense)
        out.append(Check(f"trace_oracle vs dense matrix at L={L}", rel <= 1e-10,
                         (f"relative gap {rel:.3e}",)))
    return out


CROSSOVER_GRID = [(a, c, W) for a in (0.5, 1.0, 2.0) for c in (0.1, 0.5, 1.8 * a) for W in (1e3, 1e6)]


def suite_crossover():
    out = []
    for a, c, W in CROSSOVER_GRID:
        res = analysis.crossover_b(W ** (1 + a), W, W**-c)
        ok = res.bracket_ok and res.residual <= 1e-12
        out.append(Check(f"crossover gamma in bracket at a={a}, c={c:g}, W={W:g}", ok,
                         (f"gamma = {res.gamma:.6f}, b* = {res.b_star:.6g}, residual {res.residual:.1e}",)))
    return out


def suite_mc(samples: int = 200, seed: int = 0):
    model = BandModel(1, 512, 16)
    spec = montecarlo.EnsembleSpec(model, seed=seed, n_samples=samples)
    y = montecarlo.sample_dos_pairs(spec, 0.0, 0.4, 0.05)
    out = []
    for col, E in enumerate((0.0, 0.4)):
        target = 4.0 * math.sqrt(1.0 - E * E)
        mean = float(y[:, col].mean())
        se = float(y[:, col].std(ddof=1) / math.sqrt(len(y))) if len(y) > 1 else math.inf
        tol = max(5.0 * se, 0.5)
        out.append(Check(f"<Y> = 2 pi nu(E) at E={E}", abs(mean - target) <= tol,
                         (f"mean {mean:.5f} +- {se:.5f}, target {target:.5f}, tolerance {tol:.3f}",
                          f"{len(y)} samples")))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "identities": suite_identities,
    "oracles": suite_oracles,
    "crossover": suite_crossover,
    "mc": suite_mc,
}


def run_suite(name: str, **kw) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    fn = SUITES[name]
    try:
        return fn(**kw)
    except Exception as exc:  # a crash is a failed check, not a traceback
        return [Check(f"{name} suite raised {type(exc).__name__}", False, (str(exc),))]


def format_tap(checks: list[Check]) -> str:
    lines = ["TAP version 13", f"1..{len(checks)}"]
    for i, c in enumerate(checks, start=1):
        lines.append(f"{'ok' if c.ok else 'not ok'} {i} - {c.name}")
        lines.extend(f"# {line}" for line in c.comments)
    return "\n".join(lines)
