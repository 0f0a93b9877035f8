import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bandcorr.profile import (
    BandModel,
    ModelError,
    ProfileKind,
    build_moments,
    epsilon_cutoff,
    moments_report,
    q_quartic,
    s_hat,
    s_row,
)


def test_rejects_bad_models():
    with pytest.raises(ModelError):
        BandModel(1, 16, 16)
    with pytest.raises(ModelError):
        BandModel(3, 16, 2)
    with pytest.raises(ModelError):
        BandModel(1, 16, 8)  # 2W+1 > L for the top hat


@given(st.integers(1, 40), st.integers(1, 2))
@settings(max_examples=30, deadline=None)
def test_row_sums_to_I(W, d):
    model = BandModel(d, 2 * W + 3, W)
    m = build_moments(model)
    assert math.fsum(s_row(model).ravel()) == pytest.approx(m.I, rel=1e-13)


@given(st.integers(1, 30))
@settings(max_examples=20, deadline=None)
def test_top_hat_closed_form_matches_enumeration(W):
    model = BandModel(1, 2 * W + 5, W)
    m = build_moments(model)
    x = np.arange(-W, W + 1) / W
    D = 0.5 * np.sum(x * x) / (2 * W)
    assert m.Dscalar == pytest.approx(D, rel=1e-13)
    assert m.M == 2 * W + 1


def test_top_hat_D_tends_to_continuum():
    m = build_moments(BandModel(1, 4096, 512))
    assert m.Dscalar == pytest.approx(1.0 / 6.0, rel=5e-3)
    assert m.D0[0, 0] == pytest.approx(1.0 / 3.0)


def test_gaussian_moments_isotropic_d2():
    m = build_moments(BandModel(2, 128, 8, ProfileKind.GAUSSIAN))
    assert m.Dmat[0, 1] == pytest.approx(0.0, abs=1e-12)
    assert m.Q == pytest.approx(1.0, rel=1e-2)


@given(st.floats(-3.0, 3.0))
@settings(max_examples=30, deadline=None)
def test_s_hat_small_q_expansion(q):
    model = BandModel(1, 2048, 64)
    m = build_moments(model)
    q = q * 1e-2
    expected = m.I - m.Dscalar * q * q + q_quartic(model, [q])
    assert s_hat(model, [q]) == pytest.approx(expected, abs=1e-10)


def test_s_hat_matches_fft_of_row():
    model = BandModel(1, 64, 5, ProfileKind.GAUSSIAN)
    eig = np.fft.fft(s_row(model)).real
    k = 7
    q = 2 * math.pi * k * model.W / model.L
    assert s_hat(model, [q]) == pytest.approx(eig[k], rel=1e-12)


def test_epsilon_cutoff_is_quadratic_window():
    model = BandModel(1, 1024, 16)
    cut = epsilon_cutoff(model)
    D = build_moments(model).Dscalar
    assert 0 < cut.eps <= math.pi * model.W
    assert 0.5 * D <= cut.c4 <= cut.c5 <= 2 * D


def test_moments_report_keys():
    text = moments_report(BandModel(1, 64, 4))
    keys = [line.split(" = ")[0] for line in text.splitlines()]
    assert keys[:5] == ["dim", "L", "W", "profile", "M"]
