"""FFT-domain global filter block with a hand-derived backward pass.

The block multiplies the 2D spectrum of each channel of a real feature map
by a learnable complex mask and returns the real part of the inverse
transform:

    y = Re( iFFT2( K * FFT2(x) ) )

Transforms are unitary (ortho normalization) per channel, so the identity
mask reproduces the input exactly and the output norm is bounded by
max|K| * ||x||.  Complex weights are stored as a real (H, W, D, 2) array and
both gradients returned by :func:`global_filter_backward` are strictly real,
which lets the block train under ordinary real-valued optimizers.  Spatial
dimensions must be even.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_even_hw(shape):
    h, w = shape[0], shape[1]
    if h % 2 or w % 2:
        raise ValueError("spatial dimensions must be even")


@dataclass
class GlobalFilter:
    """Learnable complex spectrum mask, stored as (H, W, D, 2) reals."""

    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.ndim != 4 or self.weights.shape[-1] != 2:
            raise ValueError("weights must have shape (H, W, D, 2)")
        _check_even_hw(self.weights.shape)
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.weights.shape[:3]

    @property
    def complex_weights(self) -> np.ndarray:
        return self.weights[..., 0] + 1j * self.weights[..., 1]

    @classmethod
    def identity(cls, shape) -> "GlobalFilter":
        w = np.zeros(tuple(shape) + (2,))
        w[..., 0] = 1.0
        return cls(w)

    @classmethod
    def randn(cls, shape, scale: float = 0.02, seed: int = 0) -> "GlobalFilter":
        """Near-identity initialization: 1 + N(0, scale^2) + j N(0, scale^2)."""
        rng = np.random.Generator(np.random.PCG64(seed))
        w = rng.normal(0.0, scale, size=tuple(shape) + (2,))
        w[..., 0] += 1.0
        return cls(w)


def _check_map(x: np.ndarray, filt: GlobalFilter) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 3:
        raise ValueError("feature map must have shape (H, W, D)")
    if x.shape != filt.shape:
        raise ValueError(f"feature map {x.shape} does not match filter {filt.shape}")
    return x


def _fft2(a: np.ndarray) -> np.ndarray:
    return np.fft.fft2(a, axes=(0, 1), norm="ortho")


def _ifft2(a: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(a, axes=(0, 1), norm="ortho")


def global_filter_forward(x: np.ndarray, filt: GlobalFilter) -> np.ndarray:
    """Apply the spectral mask: Re(iFFT2(K * FFT2(x))) per channel."""
    x = _check_map(x, filt)
    return np.real(_ifft2(filt.complex_weights * _fft2(x)))


def global_filter_backward(x: np.ndarray, filt: GlobalFilter,
                           upstream_grad: np.ndarray):
    """Gradients of the forward map under an upstream real gradient.

    Returns ``(grad_x, grad_k)`` where grad_x = Re(iFFT2(conj(K) * FFT2(g)))
    and the complex filter gradient FFT2(g) * conj(FFT2(x)) is split into
    its real and imaginary parts to match the stored weight layout.
    """
    x = _check_map(x, filt)
    g = np.asarray(upstream_grad, dtype=float)
    if g.shape != x.shape:
        raise ValueError("upstream gradient shape mismatch")
    spec_g = _fft2(g)
    grad_x = np.real(_ifft2(np.conj(filt.complex_weights) * spec_g))
    grad_k_complex = spec_g * np.conj(_fft2(x))
    grad_k = np.stack([grad_k_complex.real, grad_k_complex.imag], axis=-1)
    return grad_x, grad_k


def smooth_labels(y_onehot: np.ndarray, zeta: float) -> np.ndarray:
    """Blend a one-hot vector toward uniform: y*(1-zeta) + zeta/K."""
    y = np.asarray(y_onehot, dtype=float)
    if not 0.0 <= zeta < 1.0:
        raise ValueError("smoothing factor must be in [0, 1)")
    if y.ndim != 1 or not np.isclose(y.sum(), 1.0) or np.count_nonzero(y) != 1:
        raise ValueError("expected a one-hot label vector")
    return y * (1.0 - zeta) + zeta / len(y)


def label_smoothing_loss(p: np.ndarray, y_onehot: np.ndarray, zeta: float) -> float:
    """Cross-entropy against smoothed labels: -sum y' log p.

    Probabilities are clamped at 1e-12 before the log as a numeric guard.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0.0) or not np.isclose(p.sum(), 1.0, atol=1e-6):
        raise ValueError("p must be a probability vector")
    y_smooth = smooth_labels(y_onehot, zeta)
    return float(-(y_smooth * np.log(np.maximum(p, 1e-12))).sum())


def gradient_check(n_trials: int = 25, step: float = 1e-4, seed: int = 0,
                   heights=(2, 4, 8), widths=(2, 4, 8), depths=(1, 3)):
    """Compare analytic gradients against central finite differences.

    Random small shapes are drawn from the given sets; the scalar objective
    is <g, forward(x, K)> for a fixed random g.  Returns a dict with the
    worst relative errors over all trials for grad_x and grad_k.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    worst_x = 0.0
    worst_k = 0.0
    for _ in range(n_trials):
        shape = (rng.choice(heights), rng.choice(widths), rng.choice(depths))
        x = rng.normal(size=shape)
        filt = GlobalFilter(rng.normal(size=shape + (2,)))
        g = rng.normal(size=shape)

        def objective(xv, wv):
            return float(np.sum(g * global_filter_forward(xv, GlobalFilter(wv))))

        grad_x, grad_k = global_filter_backward(x, filt, g)

        fd_x = np.zeros_like(x)
        for idx in np.ndindex(x.shape):
            dx = np.zeros_like(x)
            dx[idx] = step
            fd_x[idx] = (objective(x + dx, filt.weights)
                         - objective(x - dx, filt.weights)) / (2.0 * step)
        fd_k = np.zeros_like(filt.weights)
        for idx in np.ndindex(filt.weights.shape):
            dw = np.zeros_like(filt.weights)
            dw[idx] = step
            fd_k[idx] = (objective(x, filt.weights + dw)
                         - objective(x, filt.weights - dw)) / (2.0 * step)

        scale_x = max(float(np.max(np.abs(fd_x))), 1e-12)
        scale_k = max(float(np.max(np.abs(fd_k))), 1e-12)
        worst_x = max(worst_x, float(np.max(np.abs(grad_x - fd_x))) / scale_x)
        worst_k = max(worst_k, float(np.max(np.abs(grad_k - fd_k))) / scale_k)
    return {"max_rel_error_grad_x": worst_x, "max_rel_error_grad_k": worst_k,
            "trials": n_trials}
