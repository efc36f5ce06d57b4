import math

import numpy as np
import pytest

from mdsim import (GlobalFilter, global_filter_backward, global_filter_forward,
                   gradient_check, label_smoothing_loss, smooth_labels)


class TestGlobalFilterForward:
    def test_identity_filter_round_trip(self, rng):
        x = rng.normal(size=(8, 8, 3))
        filt = GlobalFilter.identity((8, 8, 3))
        assert np.max(np.abs(global_filter_forward(x, filt) - x)) < 1e-6

    def test_zero_filter(self, rng):
        x = rng.normal(size=(4, 4, 2))
        filt = GlobalFilter(np.zeros((4, 4, 2, 2)))
        assert np.all(global_filter_forward(x, filt) == 0.0)

    def test_hermitian_filter_keeps_output_real(self, rng):
        # a conjugate-symmetric mask is the spectrum of a real kernel; the
        # pre-projection inverse transform is then already real
        kernel = rng.normal(size=(6, 4, 2))
        spec = np.fft.fft2(kernel, axes=(0, 1), norm="ortho")
        filt = GlobalFilter(np.stack([spec.real, spec.imag], axis=-1))
        x = rng.normal(size=(6, 4, 2))
        full = np.fft.ifft2(spec * np.fft.fft2(x, axes=(0, 1), norm="ortho"),
                            axes=(0, 1), norm="ortho")
        assert np.max(np.abs(full.imag)) < 1e-12
        assert np.allclose(global_filter_forward(x, filt), full.real)

    def test_linear_in_input(self, rng):
        filt = GlobalFilter(rng.normal(size=(4, 6, 2, 2)))
        x1 = rng.normal(size=(4, 6, 2))
        x2 = rng.normal(size=(4, 6, 2))
        a, b = 1.7, -0.4
        lhs = global_filter_forward(a * x1 + b * x2, filt)
        rhs = (a * global_filter_forward(x1, filt)
               + b * global_filter_forward(x2, filt))
        assert np.max(np.abs(lhs - rhs)) < 1e-6

    def test_gain_bounded_by_filter_magnitude(self, rng):
        for _ in range(10):
            filt = GlobalFilter(rng.normal(size=(8, 8, 1, 2)))
            x = rng.normal(size=(8, 8, 1))
            y = global_filter_forward(x, filt)
            bound = np.abs(filt.complex_weights).max() * np.linalg.norm(x)
            assert np.linalg.norm(y) <= bound + 1e-9

    def test_shape_mismatch_rejected(self, rng):
        filt = GlobalFilter.identity((4, 4, 2))
        with pytest.raises(ValueError):
            global_filter_forward(rng.normal(size=(4, 4, 3)), filt)

    def test_odd_dims_rejected(self):
        with pytest.raises(ValueError):
            GlobalFilter.identity((5, 4, 1))

    def test_near_identity_init(self):
        filt = GlobalFilter.randn((8, 8, 2), scale=0.02, seed=4)
        w = filt.complex_weights
        assert np.allclose(w.real, 1.0, atol=0.2)
        assert np.allclose(w.imag, 0.0, atol=0.2)
        again = GlobalFilter.randn((8, 8, 2), scale=0.02, seed=4)
        assert np.array_equal(filt.weights, again.weights)


class TestGlobalFilterBackward:
    def test_identity_filter_passes_gradient(self, rng):
        filt = GlobalFilter.identity((4, 4, 2))
        x = rng.normal(size=(4, 4, 2))
        g = rng.normal(size=(4, 4, 2))
        grad_x, _ = global_filter_backward(x, filt, g)
        assert np.max(np.abs(grad_x - g)) < 1e-6

    def test_zero_upstream_zero_gradients(self, rng):
        filt = GlobalFilter(rng.normal(size=(4, 4, 1, 2)))
        x = rng.normal(size=(4, 4, 1))
        grad_x, grad_k = global_filter_backward(x, filt, np.zeros((4, 4, 1)))
        assert np.all(grad_x == 0.0)
        assert np.all(grad_k == 0.0)

    def test_gradients_are_real_arrays(self, rng):
        filt = GlobalFilter(rng.normal(size=(2, 4, 3, 2)))
        x = rng.normal(size=(2, 4, 3))
        grad_x, grad_k = global_filter_backward(x, filt, rng.normal(size=(2, 4, 3)))
        assert grad_x.dtype.kind == "f"
        assert grad_k.dtype.kind == "f"
        assert grad_k.shape == (2, 4, 3, 2)

    def test_finite_difference_small_case(self):
        report = gradient_check(n_trials=3, seed=7, heights=(4,), widths=(4,),
                                depths=(2,))
        assert report["max_rel_error_grad_x"] < 1e-5
        assert report["max_rel_error_grad_k"] < 1e-5


class TestLabelSmoothing:
    def test_zero_smoothing_is_cross_entropy(self, rng):
        p = rng.dirichlet(np.ones(12))
        y = np.zeros(12)
        y[4] = 1.0
        assert np.isclose(label_smoothing_loss(p, y, 0.0), -math.log(p[4]))

    def test_uniform_prediction_gives_log_k(self):
        k = 12
        p = np.full(k, 1.0 / k)
        y = np.zeros(k)
        y[0] = 1.0
        for zeta in (0.0, 0.1, 0.5):
            assert abs(label_smoothing_loss(p, y, zeta) - math.log(k)) < 1e-6

    def test_smoothed_label_values(self):
        y = np.zeros(12)
        y[3] = 1.0
        smoothed = smooth_labels(y, 0.1)
        assert np.isclose(smoothed[3], 0.9 + 0.1 / 12)
        off = np.delete(smoothed, 3)
        assert np.allclose(off, 0.1 / 12)
        assert np.isclose(smoothed.sum(), 1.0)

    def test_minimum_at_smoothed_labels(self):
        # over a simplex grid for K=3, the loss is minimized at p = y'
        y = np.zeros(3)
        y[1] = 1.0
        zeta = 0.3
        target = smooth_labels(y, zeta)
        best, best_p = np.inf, None
        grid = np.linspace(0.001, 0.998, 60)
        for a in grid:
            for b in grid:
                if a + b >= 0.999:
                    continue
                p = np.array([a, b, 1.0 - a - b])
                loss = label_smoothing_loss(p, y, zeta)
                if loss < best:
                    best, best_p = loss, p
        assert np.allclose(best_p, target, atol=0.02)

    def test_zero_probability_guard(self):
        p = np.array([0.0, 1.0])
        y = np.array([1.0, 0.0])
        loss = label_smoothing_loss(p, y, 0.0)
        assert np.isfinite(loss)
        assert loss >= -math.log(1e-12) - 1e-6

    def test_invalid_inputs_rejected(self):
        y = np.array([1.0, 0.0])
        with pytest.raises(ValueError):
            label_smoothing_loss(np.array([0.6, 0.6]), y, 0.0)  # not normalized
        with pytest.raises(ValueError):
            label_smoothing_loss(np.array([0.5, 0.5]), np.array([1.0, 1.0]), 0.0)
        with pytest.raises(ValueError):
            smooth_labels(y, 1.0)
