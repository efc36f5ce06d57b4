"""Raw-matrix to map processing: range-time and Doppler-time products.

The chain mirrors the usual FMCW micro-Doppler flow: slow-time first
difference (MTI) to cancel static clutter, per-pulse range FFT, coherent
range-bin aggregation into one slow-time signal, optional bulk-Doppler
compensation from the ground-truth torso track, optional Savitzky-Golay
denoising, then a Hann-windowed STFT and its frequency-reassigned (FSST)
refinement.  One call to :func:`pipeline` yields the range-time map plus the
eight Doppler-time variants {stft, fsst} x {raw, denoised} x {uncomp, comp}
and an entropy figure for every map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.signal import savgol_filter

from .echo import (RadarConfig, RawDataMatrix, WallConfig, bistatic_range,
                   segment_crosses_wall, wall_extra_delay)
from .kinematics import ActivityParams, BodyModel, torso_trajectory


@dataclass
class ProcessingConfig:
    """Knobs of the map-generation chain."""

    n_fft: int = 1024
    window_fraction: float = 0.10
    overlap_fraction: float = 0.90
    smoother_order: int = 5
    smoother_frame: int = 11
    reassign_threshold: float = 1e-6
    range_gate: tuple[int, int] | None = None  # half-open bin interval
    image_size: int | None = None  # PNG resampling, None = native

    def __post_init__(self):
        if self.n_fft < 2 or self.n_fft & (self.n_fft - 1):
            raise ValueError("n_fft must be a power of two")
        if not 0.0 < self.window_fraction <= 1.0:
            raise ValueError("window fraction must be in (0, 1]")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError("overlap fraction must be in [0, 1)")


@dataclass
class Rtm:
    """Range-time map: |range FFT| per pulse, positive-beat half only."""

    magnitude: np.ndarray  # (n_fft/2, n_pulses) non-negative
    range_step_m: float
    time_step_s: float


@dataclass
class Dtm:
    """Doppler-time map: spectrogram power on a zero-centered Doppler axis."""

    power: np.ndarray  # (n_bins, n_frames) non-negative
    doppler_hz: np.ndarray  # (n_bins,) ascending, spans (-PRF/2, PRF/2)
    time_s: np.ndarray  # (n_frames,) frame centers
    variant: str = ""

    @property
    def doppler_step_hz(self) -> float:
        return float(self.doppler_hz[1] - self.doppler_hz[0])

    @property
    def time_step_s(self) -> float:
        return float(self.time_s[1] - self.time_s[0]) if len(self.time_s) > 1 else 0.0


@dataclass
class PipelineResult:
    rtm: Rtm
    dtms: dict[str, Dtm]
    entropies: dict[str, float]


def mti(raw: RawDataMatrix) -> RawDataMatrix:
    """Slow-time first difference; cancels returns that are static in m."""
    if raw.n_pulses < 2:
        raise ValueError("MTI needs at least two pulses")
    return RawDataMatrix(samples=raw.samples[:, 1:] - raw.samples[:, :-1],
                         sample_interval_s=raw.sample_interval_s,
                         pulse_interval_s=raw.pulse_interval_s)


def fast_time_spectrum(matrix: np.ndarray, n_fft: int) -> np.ndarray:
    """Zero-padded fast-time transform S[k, m] = sum_n s[n, m] e^{+j2pi nk/N}.

    The de-chirped beat tone of a delay tau rotates as e^{-j2pi K tau n Ts},
    so the positive-exponent kernel places it at bin k = K tau N / f_s.  With
    this convention sum_k |S[k]|^2 = N * sum_n |s[n]|^2 per column.
    """
    if n_fft < matrix.shape[0]:
        raise ValueError("n_fft must be at least the fast-time sample count")
    return np.fft.ifft(matrix, n=n_fft, axis=0) * n_fft


def range_fft(mti_out: RawDataMatrix, n_fft: int, chirp_rate: float):
    """Per-pulse range FFT.

    Returns ``(rtm, spectrum)`` where ``spectrum`` is the complex positive-
    beat half S[k, m] (k < n_fft/2) retained for Doppler aggregation and
    ``rtm`` holds its magnitude with the bin-to-range step
    c * f_s / (2 * K * n_fft).
    """
    spectrum = fast_time_spectrum(mti_out.samples, n_fft)[: n_fft // 2]
    f_s = 1.0 / mti_out.sample_interval_s
    range_step = C_LIGHT * f_s / (2.0 * chirp_rate * n_fft)
    rtm = Rtm(magnitude=np.abs(spectrum), range_step_m=range_step,
              time_step_s=mti_out.pulse_interval_s)
    return rtm, spectrum


def aggregate(spectrum: np.ndarray, range_gate: tuple[int, int] | None = None) -> np.ndarray:
    """Coherent sum of the range-processed matrix over range bins.

    ``range_gate`` restricts the sum to a half-open bin interval; by default
    every retained bin contributes.
    """
    if spectrum.size == 0:
        raise ValueError("empty spectrum")
    if range_gate is not None:
        lo, hi = range_gate
        if not 0 <= lo < hi <= spectrum.shape[0]:
            raise ValueError("range gate outside the retained bins")
        spectrum = spectrum[lo:hi]
    return spectrum.sum(axis=0)


def bulk_phase(radial_velocity: np.ndarray, wavelength_m: float,
               pulse_interval_s: float) -> np.ndarray:
    """Accumulated bulk-motion phase from a sampled radial-velocity history.

    Uses the Doppler convention f_d = -2 v_r / lambda (positive Doppler for
    an approaching target) and approximates the phase integral by a
    cumulative sum over pulses.
    """
    v_r = np.asarray(radial_velocity, dtype=float)
    f_d = -2.0 * v_r / wavelength_m
    return 2.0 * np.pi * pulse_interval_s * np.cumsum(f_d)


def compensate(x: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Demodulate the bulk phase: x[m] * e^{-j phase[m]}."""
    x = np.asarray(x)
    phase = np.asarray(phase, dtype=float)
    if x.shape != phase.shape:
        raise ValueError("signal and phase sequence lengths differ")
    return x * np.exp(-1j * phase)


def savgol(x: np.ndarray, order: int, frame: int) -> np.ndarray:
    """Savitzky-Golay smoothing of a complex signal.

    Real and imaginary parts are filtered independently by the local
    least-squares polynomial smoother; the first and last half-windows are
    produced by evaluating the edge-window polynomial fits at the edge
    offsets.
    """
    if frame % 2 == 0:
        raise ValueError("frame length must be odd")
    if frame <= order:
        raise ValueError("frame length must exceed the polynomial order")
    x = np.asarray(x)
    if x.shape[-1] < frame:
        raise ValueError("signal shorter than one frame")
    if np.iscomplexobj(x):
        return (savgol_filter(x.real, frame, order, mode="interp")
                + 1j * savgol_filter(x.imag, frame, order, mode="interp"))
    return savgol_filter(x, frame, order, mode="interp")


def _frame_layout(n: int, window_fraction: float, overlap_fraction: float):
    window = int(round(window_fraction * n))
    if window < 8:
        raise ValueError("window shorter than 8 samples")
    if window > n:
        raise ValueError("signal shorter than one window")
    hop = window - int(round(overlap_fraction * window))
    if hop < 1:
        raise ValueError("overlap leaves no hop")
    n_frames = (n - window) // hop + 1
    return window, hop, n_frames


def _hann_periodic(window: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(window) / window)


def _spectral_derivative(g: np.ndarray, dt: float) -> np.ndarray:
    """d/dt of a window via its DFT; exact for band-limited periodic g."""
    freqs = np.fft.fftfreq(len(g), d=dt)
    if len(g) % 2 == 0:
        freqs = freqs.copy()
        freqs[len(g) // 2] = 0.0  # odd-derivative Nyquist bin has no real part
    return np.real(np.fft.ifft(2j * np.pi * freqs * np.fft.fft(g)))


def _frames(x: np.ndarray, window: int, hop: int, n_frames: int) -> np.ndarray:
    idx = hop * np.arange(n_frames)[:, None] + np.arange(window)[None, :]
    return x[idx]


def stft(x: np.ndarray, pulse_interval_s: float, window_fraction: float = 0.10,
         overlap_fraction: float = 0.90) -> Dtm:
    """Hann-windowed spectrogram of the slow-time signal.

    The window spans ``window_fraction`` of the signal and consecutive
    windows overlap by ``overlap_fraction`` of their length.  Rows are
    fftshifted so the Doppler axis ascends through zero at the center.
    """
    x = np.asarray(x)
    window, hop, n_frames = _frame_layout(len(x), window_fraction, overlap_fraction)
    g = _hann_periodic(window)
    spec = np.fft.fft(_frames(x, window, hop, n_frames) * g, axis=1)
    power = np.abs(np.fft.fftshift(spec, axes=1)) ** 2
    freqs = np.fft.fftshift(np.fft.fftfreq(window, d=pulse_interval_s))
    times = (hop * np.arange(n_frames) + 0.5 * window) * pulse_interval_s
    return Dtm(power=power.T, doppler_hz=freqs, time_s=times, variant="stft")


def fsst(x: np.ndarray, pulse_interval_s: float, window_fraction: float = 0.10,
         overlap_fraction: float = 0.90, threshold: float = 1e-6) -> Dtm:
    """Fourier-synchrosqueezed spectrogram.

    For every STFT cell with |X| above ``threshold * max|X|`` the
    instantaneous frequency is estimated from the derivative-window
    transform, f_hat = f_k - Im(X_dg / X_g) / (2 pi), and the cell's power
    is accumulated into the nearest Doppler bin at f_hat.  Below-threshold
    energy is dropped.  A stationary tone centered on a bin reassigns onto
    exactly that bin, and the accumulated mass equals the above-threshold
    STFT energy.
    """
    x = np.asarray(x)
    window, hop, n_frames = _frame_layout(len(x), window_fraction, overlap_fraction)
    g = _hann_periodic(window)
    dg = _spectral_derivative(g, pulse_interval_s)
    frames = _frames(x, window, hop, n_frames)
    spec = np.fft.fftshift(np.fft.fft(frames * g, axis=1), axes=1)
    spec_d = np.fft.fftshift(np.fft.fft(frames * dg, axis=1), axes=1)
    freqs = np.fft.fftshift(np.fft.fftfreq(window, d=pulse_interval_s))
    times = (hop * np.arange(n_frames) + 0.5 * window) * pulse_interval_s

    mag = np.abs(spec)
    mask = mag > threshold * mag.max() if mag.size else mag > 0
    out = np.zeros_like(mag)
    if np.any(mask):
        with np.errstate(divide="ignore", invalid="ignore"):
            f_hat = freqs[None, :] - np.imag(spec_d / spec) / (2.0 * np.pi)
        df = freqs[1] - freqs[0]
        rows = np.rint((f_hat[mask] - freqs[0]) / df)
        rows = np.clip(rows, 0, window - 1).astype(int)
        frame_idx = np.broadcast_to(np.arange(n_frames)[:, None], mag.shape)[mask]
        np.add.at(out, (frame_idx, rows), mag[mask] ** 2)
    return Dtm(power=out.T, doppler_hz=freqs, time_s=times, variant="fsst")


def entropy(values: np.ndarray) -> float:
    """Shannon entropy (nats) of a map's value distribution.

    Values are normalized to a probability mass; uniform maps give log(N),
    a single nonzero cell gives 0.
    """
    vals = np.asarray(values, dtype=float).ravel()
    if np.any(vals < 0.0):
        raise ValueError("map values must be non-negative")
    total = vals.sum()
    if total <= 0.0:
        raise ValueError("entropy undefined for an all-zero map")
    p = vals[vals > 0.0] / total
    return float(-(p * np.log(p)).sum())


def torso_bulk_velocity(body: BodyModel, params: ActivityParams,
                        cfg: RadarConfig, wall: WallConfig | None = None) -> np.ndarray:
    """Ground-truth torso radial velocity sampled at the MTI output pulses.

    The radial coordinate is half the bistatic path sum (the same convention
    the range axis uses), including the wall optical-path excess when the
    line of sight crosses the slab, so the compensation phase matches the
    synthesized bulk modulation.
    """
    times = np.arange(cfg.n_pulses) * cfg.pulse_interval_s
    track = torso_trajectory(body, params, times)
    ranges = bistatic_range(track, cfg)
    if wall is not None:
        crossings = (segment_crosses_wall(cfg.tx, track, wall).astype(int)
                     + segment_crosses_wall(track, cfg.rx, wall).astype(int))
        ranges = ranges + C_LIGHT * wall_extra_delay(wall, crossings)
    return np.diff(ranges) / (2.0 * cfg.pulse_interval_s)


def pipeline(raw: RawDataMatrix, cfg: RadarConfig, body: BodyModel,
             params: ActivityParams, proc: ProcessingConfig | None = None,
             wall: WallConfig | None = None) -> PipelineResult:
    """Full map generation: RTM plus the eight DTM variants and entropies.

    Variant keys are ``{stft|fsst}_{raw|denoised}_{uncomp|comp}``; the bulk
    Doppler used for the compensated variants comes from the ground-truth
    torso trajectory.
    """
    proc = proc or ProcessingConfig()
    filtered = mti(raw)
    rtm, spectrum = range_fft(filtered, proc.n_fft, cfg.chirp_rate)
    x = aggregate(spectrum, proc.range_gate)
    v_r = torso_bulk_velocity(body, params, cfg, wall)
    phase = bulk_phase(v_r, cfg.wavelength_m, raw.pulse_interval_s)
    x_comp = compensate(x, phase)
    x_den = savgol(x, proc.smoother_order, proc.smoother_frame)
    x_comp_den = savgol(x_comp, proc.smoother_order, proc.smoother_frame)

    signals = {
        ("raw", "uncomp"): x,
        ("denoised", "uncomp"): x_den,
        ("raw", "comp"): x_comp,
        ("denoised", "comp"): x_comp_den,
    }
    dtms: dict[str, Dtm] = {}
    for (den, comp), signal in signals.items():
        for method, transform in (("stft", stft), ("fsst", fsst)):
            kwargs = dict(window_fraction=proc.window_fraction,
                          overlap_fraction=proc.overlap_fraction)
            if method == "fsst":
                kwargs["threshold"] = proc.reassign_threshold
            dtm = transform(signal, raw.pulse_interval_s, **kwargs)
            key = f"{method}_{den}_{comp}"
            dtms[key] = replace(dtm, variant=key)

    entropies = {}
    for key, values in [("rtm", rtm.magnitude)] + [(k, d.power) for k, d in dtms.items()]:
        try:
            entropies[key] = entropy(values)
        except ValueError:
            entropies[key] = float("nan")  # all-zero map (e.g. noiseless static scene)
    return PipelineResult(rtm=rtm, dtms=dtms, entropies=entropies)
