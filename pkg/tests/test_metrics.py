"""Unit tests for error reports, image quality indices, and rate fitting."""

import math

import numpy as np
import pytest

from nevai.errors import ShapeMismatchError
from nevai.metrics import (PSNR_INFINITE, error_report, estimate_modulus,
                           fit_rate, image_quality, psnr, rmse, ssim_global)
from nevai.testbed import lookup

from reference_values import F1_MODULUS_DELTA005


def test_error_report_matches_manual_computation():
    rng = np.random.default_rng(42)
    exact = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    approx = exact + rng.normal(size=(9, 9)) * 0.01 + 1j * rng.normal(size=(9, 9)) * 0.02
    rep = error_report(exact, approx)
    dre = np.abs(exact.real - approx.real)
    dim = np.abs(exact.imag - approx.imag)
    assert rep.e_max_re == pytest.approx(dre.max(), rel=1e-15)
    assert rep.e_mean_im == pytest.approx(dim.mean(), rel=1e-15)
    assert rep.e_ms_re == pytest.approx(np.sqrt((dre ** 2).mean()), rel=1e-15)
    assert rep.n_points == 81


def test_error_report_power_mean_ordering():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.normal(size=(6, 7)) * 1j + rng.normal(size=(6, 7))
        b = rng.normal(size=(6, 7)) * 1j + rng.normal(size=(6, 7))
        rep = error_report(a, b)
        assert rep.e_mean_re <= rep.e_ms_re <= rep.e_max_re
        assert rep.e_mean_im <= rep.e_ms_im <= rep.e_max_im


def test_error_report_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        error_report(np.zeros((2, 2)), np.zeros((2, 3)))


def test_ssim_identity_and_symmetry():
    rng = np.random.default_rng(11)
    H = rng.uniform(0, 1, (16, 16))
    assert ssim_global(H, H) == pytest.approx(1.0, abs=1e-12)
    W = rng.uniform(0, 1, (16, 16))
    assert ssim_global(H, W) == pytest.approx(ssim_global(W, H), rel=1e-14)


def test_ssim_matches_direct_formula():
    H = np.array([[0.0, 1.0], [1.0, 0.0]])
    W = np.array([[0.1, 0.9], [0.8, 0.2]])
    d1, d2 = 0.01 ** 2, 0.03 ** 2
    mh, mw = H.mean(), W.mean()
    want = ((2 * mh * mw + d1) * (2 * ((H - mh) * (W - mw)).mean() + d2)) / (
        (mh ** 2 + mw ** 2 + d1) * (H.var() + W.var() + d2))
    assert ssim_global(H, W) == pytest.approx(want, rel=1e-14)


def test_ssim_windowed_variant():
    rng = np.random.default_rng(5)
    H = rng.uniform(0, 1, (6, 6))
    W = H + rng.normal(size=(6, 6)) * 0.01
    v = ssim_global(H, W, window=3)
    assert -1.0 <= v <= 1.0
    with pytest.raises(ShapeMismatchError):
        ssim_global(H, W, window=9)


def test_psnr_sentinel_and_known_value():
    H = np.zeros((4, 4))
    assert psnr(H, H, 1.0) == PSNR_INFINITE
    W = np.full((4, 4), 0.5)
    assert psnr(H, W, 1.0) == pytest.approx(10 * math.log10(1 / 0.25), rel=1e-13)


def test_rmse_basics():
    H = np.zeros((3, 3))
    assert rmse(H, H) == 0.0
    W = np.full((3, 3), 2.0)
    assert rmse(H, W) == pytest.approx(2.0, rel=1e-15)


def test_image_quality_bundle():
    rng = np.random.default_rng(8)
    H = rng.uniform(0, 1, (8, 8))
    q = image_quality(H, H, 1.0)
    assert q.ssim == pytest.approx(1.0, abs=1e-12)
    assert q.rmse == 0.0
    assert q.psnr_db == PSNR_INFINITE
    assert q.dynamic_range_L == 1.0


def test_modulus_estimate_brackets_dense_oracle():
    f = lookup("f1").field
    est = estimate_modulus(f, 0.05, samples=1000)
    assert 0.75 * F1_MODULUS_DELTA005 <= est <= 1.02 * F1_MODULUS_DELTA005


def test_modulus_estimate_monotone_in_delta():
    f = lookup("g1").field
    e1 = estimate_modulus(f, 0.03, samples=400)
    e2 = estimate_modulus(f, 0.05, samples=400)
    e3 = estimate_modulus(f, 0.08, samples=400)
    assert e1 <= e2 <= e3


def test_modulus_rejects_bad_delta():
    with pytest.raises(ValueError):
        estimate_modulus(lookup("g1").field, 0.0)


def test_fit_rate_recovers_planted_power_law():
    ns = [8, 16, 32, 64, 128]
    errs = [3.7 / n for n in ns]
    est = fit_rate(ns, errs)
    assert est.exponent == pytest.approx(-1.0, abs=1e-6)
    assert est.log_factor_detected is False


def test_fit_rate_flags_log_factor():
    ns = list(range(8, 129, 8))
    errs = [math.log(n) / n for n in ns]
    est = fit_rate(ns, errs)
    assert -1.0 < est.exponent < -0.7
    assert est.log_factor_detected is True


def test_fit_rate_input_validation():
    with pytest.raises(ValueError):
        fit_rate([8, 16, 32], [1, 2, 3])
    with pytest.raises(ValueError):
        fit_rate([8, 8, 8, 8], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        fit_rate([8, 16, 32, 64], [1.0, 0.5, 0.0, 0.1])
