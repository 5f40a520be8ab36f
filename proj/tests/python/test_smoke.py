"""Smoke tests for the Python bindings: each main operation is exercised once
against a small numpy reference."""

import numpy as np
import pytest

import admmreg


def test_penalty_value_and_prox_match_numpy():
    f = admmreg.Penalty(0.001)
    rng = np.random.default_rng(1)
    v = rng.normal(size=32)
    rho2 = 10.0

    assert f.value(v) == pytest.approx(np.abs(v).sum() + 0.0005 * (v**2).sum(), rel=1e-14)

    y = f.prox(v, rho2)
    want = np.sign(v) * np.maximum(rho2 * np.abs(v) - 1.0, 0.0) / (0.001 + rho2)
    np.testing.assert_allclose(y, want, rtol=0, atol=1e-15)

    mu = f.subgradient_from_prox(v, y, rho2)
    assert f.check_subgradient(y, mu, 1e-10)
    assert f.bregman(v, y, mu) >= 0.0005 * np.sum((v - y) ** 2) - 1e-12


def test_operator_adjoints_match_numpy_inner_products():
    rng = np.random.default_rng(2)
    ops = [
        admmreg.circulant2d(rng.normal(size=(8, 8))),
        admmreg.gradient2d(8, 8),
        admmreg.tight_frame("haar", 3, 16, 16),
        admmreg.tight_frame("linear_bspline", 1, 12, 12),
        admmreg.dense(rng.normal(size=(5, 9))),
    ]
    for op in ops:
        u = rng.normal(size=op.domain_shape)
        v = rng.normal(size=op.range_shape)
        lhs = np.vdot(op.apply(u), v)
        rhs = np.vdot(u, op.apply_adjoint(v))
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_tight_frame_is_a_tight_frame():
    frame = admmreg.tight_frame("haar", 3, 32, 32)
    rng = np.random.default_rng(3)
    u = rng.normal(size=(32, 32))
    coeffs = frame.apply(u)
    back = frame.apply_adjoint(coeffs)
    np.testing.assert_allclose(back, u, rtol=0, atol=1e-10 * np.linalg.norm(u))
    assert np.linalg.norm(coeffs) == pytest.approx(np.linalg.norm(u), rel=1e-10)


def test_gaussian_kernel_diagonal():
    op = admmreg.gaussian_kernel_1d(0.01, 400)
    e0 = np.zeros(400)
    e0[0] = 1.0
    col = op.apply(e0)
    assert col[0] * 400 == pytest.approx(0.01 / np.sqrt(np.pi), rel=1e-13)


def test_run_admm_monotone_energy_and_stopping():
    rng = np.random.default_rng(4)
    a_mat = rng.normal(size=(6, 12))
    x_true = rng.normal(size=12) * (rng.random(12) < 0.5)
    b = a_mat @ x_true

    a = admmreg.dense(a_mat)
    w = admmreg.identity((12,))
    f = admmreg.Penalty(0.001)
    out = admmreg.run_admm(a, w, b, f, rho1=2.0, rho2=1.0, max_iter=300,
                           check_invariants=True)
    energy = out["trace"]["E"]
    assert out["stop_reason"] == "max_iter"
    assert np.all(np.diff(energy) <= 1e-8 * max(1.0, energy[0]))
    assert out["invariants"]["max_subgradient_violation"] <= 1e-8

    # A feasible start satisfies the discrepancy rule immediately.
    out2 = admmreg.run_admm(admmreg.identity((4,)), admmreg.identity((4,)),
                            np.zeros(4), f, rho1=1.0, rho2=1.0, delta=0.5, max_iter=50)
    assert out2["stop_reason"] == "discrepancy"
    assert out2["k_stop"] == 1


def test_oracle_agrees_with_solver():
    rng = np.random.default_rng(5)
    a_mat = rng.normal(size=(2, 5))
    x_true = np.zeros(5)
    x_true[1] = 1.3
    x_true[3] = -0.7
    b = a_mat @ x_true
    f = admmreg.Penalty(0.001)

    sol = admmreg.oracle_solve_small(a_mat, b, f)
    assert sol["status"] == "optimal"

    out = admmreg.run_admm(admmreg.dense(a_mat), admmreg.identity((5,)), b, f,
                           rho1=1.0, rho2=0.2, max_iter=30000)
    assert np.linalg.norm(out["x"] - sol["x"]) <= 1e-3


def test_experiment_helpers():
    img = admmreg.phantom(32)
    assert img.shape == (32, 32)
    assert img.min() >= 0.0 and img.max() <= 1.0
    np.testing.assert_array_equal(img, admmreg.phantom(32))

    psf = admmreg.psf_gaussian(9, 2.0)
    assert psf.sum() == pytest.approx(1.0, abs=1e-14)
    blur = admmreg.blur_operator(psf, 32, 32)
    blurred = blur.apply(img)
    assert blurred.mean() == pytest.approx(img.mean(), rel=1e-12)

    noisy = admmreg.add_noise(blurred, 0.05, seed=7)
    assert np.linalg.norm(noisy - blurred) == pytest.approx(0.05, rel=1e-13)

    base = np.zeros((4, 4))
    off = base + 25.5
    assert admmreg.psnr(off, base, peak=255.0) == pytest.approx(20.0, rel=1e-12)
    with pytest.raises(ValueError):
        admmreg.psnr(base, base)


def test_tv_deblur_improves_psnr():
    img = admmreg.phantom(32)
    psf = admmreg.psf_gaussian(9, 2.0)
    blur = admmreg.blur_operator(psf, 32, 32)
    b_exact = blur.apply(img)
    delta = 1e-3 * 32
    b = admmreg.add_noise(b_exact, delta, seed=11)

    out = admmreg.run_admm(blur, admmreg.gradient2d(32, 32), b, admmreg.Penalty(0.001),
                           rho1=1000.0, rho2=10.0, delta=delta, max_iter=500,
                           ground_truth=img)
    assert out["stop_reason"] == "discrepancy"
    assert admmreg.psnr(out["x"], img, peak=1.0) > admmreg.psnr(b, img, peak=1.0)


def test_frame_weights_spare_the_lowpass():
    frame = admmreg.tight_frame("haar", 2, 16, 16)
    w = admmreg.frame_penalty_weights(frame)
    channels = frame.range_shape[2]
    w = w.reshape(16, 16, channels)
    assert np.all(w[:, :, -1] == 0.0)
    assert np.all(w[:, :, :-1] == 1.0)
