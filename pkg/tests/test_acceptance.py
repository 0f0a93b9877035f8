"""Acceptance criteria 1-10, one test each (criterion 9 has a fast and a slow half)."""
import cmath
import csv
import io
import math
import time

import numpy as np
import pytest

from bandcorr import analysis, correlation, figures, lattice_sums, montecarlo, verify
from bandcorr.profile import BandModel
from bandcorr.spectral import compute_params

EPS = np.finfo(float).eps


def rounding(value) -> float:
    """Floating-point allowance for comparing two double evaluations of ``value``."""
    return 8 * EPS * max(1.0, abs(value))


def test_criterion_01_poisson_identity(record):
    t0 = time.perf_counter()
    gaps = []
    for z in (0.5, 1.0, 2.0):
        d = lattice_sums.poisson_direct(z, 1e6)
        gaps.append((abs(d.value - lattice_sums.poisson_closed(z)), d.tail_bound + rounding(d.value)))
    dt = time.perf_counter() - t0
    ok = all(g <= tb for g, tb in gaps) and dt < 1.0
    worst = max(g / tb for g, tb in gaps)
    assert record("01", ok, f"worst gap/tail bound {worst:.3f}, {dt:.2f}s (< 1s)")


def test_criterion_02_dim1_oracles(record):
    t0 = time.perf_counter()
    points = [0.7, 2j, 3 + 1j, 0.5 * cmath.exp(0.9j * math.pi), 40j]
    ok_sum = True
    for zb in points:
        d = lattice_sums.s1_direct(zb, 1e5)
        ok_sum &= abs(lattice_sums.s1_closed(zb) - d.value) <= d.tail_bound + rounding(d.value)
    worst = 0.0
    for b in np.geomspace(0.01, 100.0, 20):
        lhs = lattice_sums.re_s1_pure_imag(b) * 4 * math.sqrt(2) / math.pi * b**1.5
        worst = max(worst, abs(lhs / lattice_sums.f_dim1(b) - 1))
    dt = time.perf_counter() - t0
    ok = ok_sum and worst <= 1e-12 and dt < 1.0
    assert record("02", ok, f"5 points within tail bound: {ok_sum}, Re S1/f rel {worst:.1e}, {dt:.2f}s (< 1s)")


def test_criterion_03_dim2_triple_agreement(record):
    t0 = time.perf_counter()
    worst_direct = 0.0
    for b in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        d = lattice_sums.s2_direct(b, 4096)
        # theta series is good to ~1e-13 relative at these b
        bound = d.tail_bound + 1e-12 * abs(d.value.real)
        worst_direct = max(worst_direct, abs(lattice_sums.re_s2_theta(b) - d.value.real) / bound)
    worst_ap = max(
        abs(lattice_sums.re_s2_theta(b) - lattice_sums.re_s2_from_abel_plana(b)) for b in (2.0, 5.0, 10.0)
    )
    dt = time.perf_counter() - t0
    ok = worst_direct <= 1.0 and worst_ap <= 1e-10 and dt < 30.0
    assert record("03", ok, f"direct gap/bound {worst_direct:.3f}, Abel-Plana gap {worst_ap:.1e}, {dt:.1f}s (< 30s)")


def _newton(b, y):
    for _ in range(50):
        step = lattice_sums.saddle_h_prime(y, b) / lattice_sums.saddle_h_second(y, b)
        y -= step
        if abs(step) < 1e-15 * abs(y):
            break
    return y


def test_criterion_04_saddle_point(record):
    worst_closed, worst_newton = 0.0, 0.0
    for b in (1.0, 5.0, 30.0, 200.0):
        d = lattice_sums.saddle_asymptotic(b).data
        for closed, numeric in ((d.h_y0, lattice_sums.saddle_h(d.y0, b)),
                                (d.h_pp_y0, lattice_sums.saddle_h_second(d.y0, b))):
            worst_closed = max(worst_closed, abs(closed - numeric) / abs(numeric))
        y = _newton(b, d.y0 * (1 + 0.05j))
        worst_newton = max(worst_newton, abs(y - d.y0))
    ok = worst_closed <= 1e-12 and worst_newton <= 1e-8
    assert record("04", ok, f"closed forms rel {worst_closed:.1e}, Newton |y - y0| {worst_newton:.1e}")


def test_criterion_05_asymptotic_validity(record, frozen):
    t0 = time.perf_counter()
    K = frozen["asymptotic_K"]
    mids = [(k + 0.625) ** 2 / 2 for k in range(30) if 10 <= (k + 0.625) ** 2 / 2 <= 40]
    rows = []
    for b in mids:
        ratio = abs(lattice_sums.re_s2_asymptotic(b)) / abs(lattice_sums.re_s2_theta(b))
        rows.append((b, abs(ratio - 1), 5 * K / b**2))
    sign_ok = lattice_sums.resolve_asymptotic_sign() == lattice_sums.RESOLVED_SIGN
    dt = time.perf_counter() - t0
    bad = [f"b={b:.2f}: {dev:.2e} > {tol:.2e}" for b, dev, tol in rows if dev > tol]
    ok = not bad and sign_ok and dt < 10.0
    detail = f"K={K}, {len(rows) - len(bad)}/{len(rows)} midpoints in band, sign {lattice_sums.RESOLVED_SIGN:+d}, {dt:.1f}s"
    if bad:
        detail += "; outside: " + ", ".join(bad)
    assert record("05", ok, detail)


def test_criterion_06_zero_structure(record):
    rep = analysis.count_sign_changes(1.0, 60.0, precision="auto")
    rep_ext = analysis.count_sign_changes(1.0, 100.0, precision="extended")
    ok = all(abs(r.count_mismatch) <= 1 and r.max_deviation <= 0.15 for r in (rep, rep_ext))
    assert record("06", ok, (
        f"[1,60]: {len(rep.zeros_found)} zeros vs {len(rep.predicted_zeros)}, max dev {rep.max_deviation:.3f}; "
        f"[1,100] extended: {len(rep_ext.zeros_found)} vs {len(rep_ext.predicted_zeros)}, "
        f"max dev {rep_ext.max_deviation:.3f}"
    ))


def test_criterion_07_crossover_bracket(record):
    t0 = time.perf_counter()
    checks = verify.suite_crossover()
    dt = time.perf_counter() - t0
    ok = all(c.ok for c in checks) and dt < 1.0
    gammas = [float(c.comments[0].split()[2].rstrip(",")) for c in checks]
    assert record("07", ok, f"{len(checks)} grid points, gamma in [{min(gammas):.4f}, {max(gammas):.4f}], {dt:.3f}s")


def test_criterion_08_trace_chain(record):
    t0 = time.perf_counter()
    dense_rel = 0.0
    for L in (12, 32, 64):
        model = BandModel(1, L, 3)
        p = compute_params(-0.2, 0.2, 1e-2, model)
        exact = correlation.trace_dense(model, p.alpha)
        dense_rel = max(dense_rel, abs(correlation.trace_oracle(model, p).full - exact) / abs(exact))
    Ws = (16, 32, 64)
    devs, envs = [], []
    for W in Ws:
        model = BandModel(1, 1024, W)
        p = compute_params(-0.025, 0.025, 1e-4, model)
        closed, env = correlation.trace_dim1_closed(model, p)
        devs.append(abs(closed - correlation.trace_oracle(model, p).full))
        envs.append(env)
    slope = -np.polyfit(np.log(Ws), np.log(devs), 1)[0]
    env_slope = -np.polyfit(np.log(Ws), np.log(envs), 1)[0]
    dt = time.perf_counter() - t0
    within = devs[0] < envs[0]
    ok = dense_rel <= 1e-10 and within and abs(slope - env_slope) <= 0.5 and devs[2] < devs[1] < devs[0] and dt < 10
    assert record("08", ok, (
        f"dense rel {dense_rel:.1e}; W=16 dev {devs[0]:.4g} < env {envs[0]:.4g}: {within}; "
        f"exponent {slope:.2f} vs envelope {env_slope:.2f}; {dt:.1f}s"
    ))


def test_criterion_09a_mc_mean_density(record):
    t0 = time.perf_counter()
    spec = montecarlo.EnsembleSpec(BandModel(1, 512, 16), seed=0, n_samples=200)
    y = montecarlo.sample_dos_pairs(spec, 0.0, 0.3, 0.05)[:, 0]
    se = y.std(ddof=1) / math.sqrt(len(y))
    tol = max(5 * se, 0.5)
    dt = time.perf_counter() - t0
    ok = abs(y.mean() - 4.0) <= tol and dt < 300
    assert record("09a", ok, f"<Y> = {y.mean():.4f} +- {se:.4f} (target 4 +- {tol:.3f}), {dt:.1f}s (< 300s)")


MEAN_FIELD_MC = dict(L=256, W=32, E1=-0.1, E2=0.1, eta=0.01)


@pytest.mark.slow
def test_criterion_09b_mc_negative_covariance(record):
    t0 = time.perf_counter()
    c = MEAN_FIELD_MC
    model = BandModel(1, c["L"], c["W"])
    spec = montecarlo.EnsembleSpec(model, seed=0, n_samples=2000)
    est = montecarlo.estimate_correlation(spec, c["E1"], c["E2"], c["eta"])
    p = compute_params(c["E1"], c["E2"], c["eta"], model)
    theory = correlation.corr_dim1(model, p).leading
    dt = time.perf_counter() - t0
    ok = est.normalized < 0 and est.significance <= -2.0 and dt < 1800
    assert record("09b", ok, (
        f"normalized cov {est.normalized:.3e} +- {est.stderr_normalized:.1e} ({est.significance:.1f} sigma), "
        f"b = {p.b:.2f}, leading theory {theory:.2e}, {dt:.0f}s"
    ))


def _rows(fig):
    buf = io.StringIO()
    figures.write_figure_csv(buf, fig)
    reader = csv.reader(io.StringIO(buf.getvalue()))
    header = next(reader)
    return header, [[float(v) if v else math.nan for v in r] for r in reader]


def _local_extrema(y):
    y = np.asarray(y)
    i = np.arange(1, len(y) - 1)
    return i[((y[i] > y[i - 1]) & (y[i] > y[i + 1])) | ((y[i] < y[i - 1]) & (y[i] < y[i + 1]))]


def test_criterion_10_figure_features(record):
    notes = []
    h1, r1 = _rows(1)
    b1, f = np.array(r1).T
    # one prominent turning point at b of order 1, then a plateau at -2
    prominent = [i for i in _local_extrema(f) if abs(f[i] + 2) > 0.2]
    fig1 = (h1 == ["b", "value"] and len(prominent) == 1 and 0.5 <= b1[prominent[0]] <= 1.5
            and np.all(np.abs(f[b1 >= 5] + 2) < 0.05) and f[0] < -10)
    notes.append(f"fig1 extremum at b={b1[prominent[0]]:.2f}" if prominent else "fig1 no extremum")

    h2, r2 = _rows(2)
    b2, re = np.array(r2).T
    ext = _local_extrema(re)
    ext = ext[b2[ext] > 2]
    amps = np.abs(re[ext])
    crossings = int(np.sum(np.sign(re[1:]) != np.sign(re[:-1])))
    fig2 = h2 == ["b", "re_s2"] and crossings >= 6 and np.all(np.diff(amps) < 0)
    notes.append(f"fig2 {crossings} sign changes, {len(amps)} decaying extrema")

    h3, r3 = _rows(3)
    b3, exact, paper, resolved = np.array(r3).T
    win = (b3 >= 10) & (b3 <= 40)
    peaks = np.abs(exact[win][_local_extrema(exact[win])])
    gap = np.max(np.abs(exact[win] - resolved[win]))
    fig3 = (h3 == ["b", "exact", "asymptotic_paper", "asymptotic_resolved"]
            and np.all(np.abs(exact[win]) <= 1.5) and np.all((peaks > 0.8) & (peaks < 1.2)) and gap < 0.1)
    notes.append(f"fig3 peak amplitudes in [{peaks.min():.3f}, {peaks.max():.3f}], max |exact - resolved| {gap:.3f}")
    assert record("10", fig1 and fig2 and fig3, "; ".join(notes))
