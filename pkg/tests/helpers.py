"""Oracles and measurement utilities shared by the test modules.

Everything here is deliberately independent of the library's own transform
paths: the DFT oracle is an explicit kernel sum, the smoothing-kernel oracle
solves the local least-squares system with a pinv, and the ridge/spread
extractors only read map values.
"""

import numpy as np
from scipy.signal import detrend, find_peaks

from mdsim import dsp


def brute_force_dft(column: np.ndarray, n_fft: int) -> np.ndarray:
    """Reference transform sum_n x[n] e^{+j 2 pi n k / N}, summed explicitly."""
    n = np.arange(len(column))
    k = np.arange(n_fft)
    kernel = np.exp(2j * np.pi * np.outer(k, n) / n_fft)
    return kernel @ column


def savgol_kernel(order: int, frame: int) -> np.ndarray:
    """Smoothing coefficients from the local Vandermonde pseudo-inverse."""
    half = frame // 2
    offsets = np.arange(-half, half + 1)
    vander = np.vander(offsets, order + 1, increasing=True)
    return np.linalg.pinv(vander)[0]


def ridge_hz(dtm: dsp.Dtm) -> np.ndarray:
    """Per-frame Doppler of the strongest bin."""
    return dtm.doppler_hz[np.argmax(dtm.power, axis=0)]


def doppler_spread(dtm: dsp.Dtm, floor_rel: float = 1e-3) -> np.ndarray:
    """Per-frame power-weighted Doppler standard deviation about the
    centroid, ignoring bins below ``floor_rel`` of the frame maximum."""
    power = dtm.power.copy()
    power[power < floor_rel * power.max(axis=0, keepdims=True)] = 0.0
    total = power.sum(axis=0)
    freq = dtm.doppler_hz[:, None]
    centroid = (freq * power).sum(axis=0) / total
    return np.sqrt((((freq - centroid) ** 2) * power).sum(axis=0) / total)


def periodicity_peak_s(series: np.ndarray, dt: float, lo_s: float, hi_s: float) -> float:
    """Lag of the strongest autocorrelation local maximum in [lo, hi] s.

    The series is detrended first so slow amplitude drift (e.g. a receding
    target) does not mask the repetition.
    """
    s = detrend(np.asarray(series, dtype=float))
    ac = np.correlate(s, s, mode="full")[len(s) - 1:]
    peaks, _ = find_peaks(ac)
    lags = peaks * dt
    window = (lags >= lo_s) & (lags <= hi_s)
    if not np.any(window):
        raise AssertionError(f"no autocorrelation peak in [{lo_s}, {hi_s}] s")
    candidates = peaks[window]
    return float(candidates[np.argmax(ac[candidates])] * dt)


def compensated_denoised_stft(raw, cfg, body, params, n_fft=1024,
                              wall=None) -> dsp.Dtm:
    """The training-variant chain, assembled stage by stage."""
    filtered = dsp.mti(raw)
    _, spectrum = dsp.range_fft(filtered, n_fft, cfg.chirp_rate)
    x = dsp.aggregate(spectrum)
    v_r = dsp.torso_bulk_velocity(body, params, cfg, wall)
    x = dsp.compensate(x, dsp.bulk_phase(v_r, cfg.wavelength_m, raw.pulse_interval_s))
    return dsp.stft(dsp.savgol(x, 5, 11), raw.pulse_interval_s)
