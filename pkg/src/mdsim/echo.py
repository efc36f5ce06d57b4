"""Bistatic FMCW beat-signal synthesis for moving scatterer sets.

The transmitted chirp sweeps ``bandwidth_hz`` over ``pulse_duration_s``
starting at the carrier.  De-chirping against the transmit replica leaves,
for a scatterer with round-trip delay tau, the sampled beat signal

    s[n, m] = A(t_m) * exp(-j*2*pi*(f_c*tau(t_m) + K*tau(t_m)*n*T_s))

summed coherently over scatterers (stop-and-hop: tau is evaluated once per
pulse).  The optional wall model attenuates each slab crossing and adds the
normal-incidence optical-path excess to the delay.  Complex white Gaussian
noise calibrated to the configured SNR is generated with a seeded PCG64
stream through a Box-Muller transform so matrices are reproducible
bit-for-bit across platforms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .kinematics import ActivityParams, BodyModel, sample_poses


@dataclass
class RadarConfig:
    """FMCW waveform, geometry and noise settings."""

    carrier_frequency_hz: float = 77.0e9
    bandwidth_hz: float = 4.0e9
    pulse_duration_s: float = 40.0e-6
    sampling_frequency_hz: float = 10.0e6
    prf_hz: float = 5000.0
    tx_position_m: tuple[float, float, float] = (0.4, -0.1, 1.5)
    rx_position_m: tuple[float, float, float] = (0.4, 0.1, 1.5)
    antenna_gain_dbi: float = 6.0
    antenna_isolation_db: float = 10.0
    snr_db: float | None = 30.0
    duration_s: float = 4.0

    def __post_init__(self):
        if self.bandwidth_hz <= 0.0 or self.pulse_duration_s <= 0.0:
            raise ValueError("bandwidth and pulse duration must be positive")
        if self.n_adc < 2:
            raise ValueError("fewer than 2 ADC samples per pulse")
        if self.prf_hz * self.pulse_duration_s > 1.0:
            raise ValueError("pulse duration exceeds the pulse interval")
        if self.duration_s <= 0.0:
            raise ValueError("duration must be positive")

    @property
    def chirp_rate(self) -> float:
        """K = B / T_p in Hz/s."""
        return self.bandwidth_hz / self.pulse_duration_s

    @property
    def n_adc(self) -> int:
        return int(math.floor(self.sampling_frequency_hz * self.pulse_duration_s))

    @property
    def n_pulses(self) -> int:
        return int(math.floor(self.duration_s * self.prf_hz))

    @property
    def sample_interval_s(self) -> float:
        return 1.0 / self.sampling_frequency_hz

    @property
    def pulse_interval_s(self) -> float:
        return 1.0 / self.prf_hz

    @property
    def wavelength_m(self) -> float:
        return C_LIGHT / self.carrier_frequency_hz

    @property
    def tx(self) -> np.ndarray:
        return np.asarray(self.tx_position_m, dtype=float)

    @property
    def rx(self) -> np.ndarray:
        return np.asarray(self.rx_position_m, dtype=float)


@dataclass
class WallConfig:
    """Axis-aligned homogeneous wall slab (thickness along x)."""

    center_m: tuple[float, float, float] = (1.0, 0.0, 1.25)
    size_m: tuple[float, float, float] = (0.24, 5.0, 2.5)
    epsilon_r: float = 6.0
    loss_tangent: float = 0.03

    def __post_init__(self):
        if min(self.size_m) <= 0.0:
            raise ValueError("wall dimensions must be positive")
        if self.epsilon_r < 1.0:
            raise ValueError("relative dielectric constant must be >= 1")
        if self.loss_tangent < 0.0:
            raise ValueError("loss tangent must be non-negative")

    @property
    def thickness_m(self) -> float:
        return self.size_m[0]

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        center = np.asarray(self.center_m, dtype=float)
        half = 0.5 * np.asarray(self.size_m, dtype=float)
        return center - half, center + half


@dataclass
class RawDataMatrix:
    """Fast-time x slow-time complex beat matrix with its sampling steps."""

    samples: np.ndarray  # (n_adc, n_pulses) complex
    sample_interval_s: float  # fast-time step T_s
    pulse_interval_s: float  # slow-time step T_PRI

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_pulses(self) -> int:
        return self.samples.shape[1]


def free_space_config(**overrides) -> RadarConfig:
    """Standard free-space parameter set (77 GHz / 4 GHz / 5 kHz PRF)."""
    return RadarConfig(**overrides)


def through_wall_config(**overrides) -> RadarConfig:
    """Standard through-the-wall parameter set (2 GHz / 1 GHz / 128 Hz PRF)."""
    defaults = dict(carrier_frequency_hz=2.0e9, bandwidth_hz=1.0e9, prf_hz=128.0)
    defaults.update(overrides)
    return RadarConfig(**defaults)


def tx_phase(t_hat, cfg: RadarConfig):
    """Transmit phase 2*pi*f_c*t + pi*K*t^2 at fast time ``t_hat`` in [0, T_p]."""
    th = np.asarray(t_hat, dtype=float)
    if np.any(th < 0.0) or np.any(th > cfg.pulse_duration_s):
        raise ValueError("fast time outside the pulse")
    return 2.0 * np.pi * cfg.carrier_frequency_hz * th + np.pi * cfg.chirp_rate * th ** 2


def bistatic_range(p, cfg: RadarConfig):
    """Transmit plus receive path length for point(s) ``p`` (last axis xyz)."""
    pos = np.asarray(p, dtype=float)
    r_tx = np.linalg.norm(pos - cfg.tx, axis=-1)
    r_rx = np.linalg.norm(pos - cfg.rx, axis=-1)
    return r_tx + r_rx


def wall_attenuation_np_per_m(wall: WallConfig, carrier_frequency_hz: float) -> float:
    """One-way field attenuation constant alpha = pi*f*sqrt(eps_r)*tan_d/c."""
    return (np.pi * carrier_frequency_hz * math.sqrt(wall.epsilon_r)
            * wall.loss_tangent / C_LIGHT)


def wall_extra_delay(wall: WallConfig, crossings) -> float | np.ndarray:
    """Slab optical-path delay excess: crossings * (sqrt(eps_r)-1)*d/c."""
    per_crossing = (math.sqrt(wall.epsilon_r) - 1.0) * wall.thickness_m / C_LIGHT
    return np.asarray(crossings) * per_crossing


def scatterer_amplitude(rcs, r_tx, r_rx, cfg: RadarConfig,
                        wall: WallConfig | None = None, crossings=0):
    """Bistatic radar-equation amplitude with optional wall attenuation.

    amplitude = G * lambda * sqrt(rcs) / ((4*pi)^(3/2) * r_tx * r_rx),
    multiplied by exp(-alpha * thickness) per slab crossing.
    """
    r_tx = np.asarray(r_tx, dtype=float)
    r_rx = np.asarray(r_rx, dtype=float)
    if np.any(r_tx <= 0.0) or np.any(r_rx <= 0.0):
        raise ValueError("degenerate geometry: zero transmit or receive range")
    gain = 10.0 ** (cfg.antenna_gain_dbi / 10.0)
    amp = (gain * cfg.wavelength_m * np.sqrt(rcs)
           / ((4.0 * np.pi) ** 1.5 * r_tx * r_rx))
    if wall is not None:
        alpha = wall_attenuation_np_per_m(wall, cfg.carrier_frequency_hz)
        amp = amp * np.exp(-alpha * wall.thickness_m * np.asarray(crossings))
    return amp


def segment_crosses_wall(p0, p1, wall: WallConfig):
    """Whether segment(s) p0 -> p1 intersect the wall box (slab test).

    ``p0`` and ``p1`` broadcast against each other with xyz on the last axis;
    returns a boolean array of the broadcast shape.
    """
    lo, hi = wall.bounds
    a = np.asarray(p0, dtype=float)
    b = np.asarray(p1, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    d = b - a
    t_enter = np.zeros(a.shape[:-1])
    t_exit = np.ones(a.shape[:-1])
    inside_all = np.ones(a.shape[:-1], dtype=bool)
    for axis in range(3):
        da = d[..., axis]
        parallel = da == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            t0 = (lo[axis] - a[..., axis]) / da
            t1 = (hi[axis] - a[..., axis]) / da
        tmin = np.where(parallel, 0.0, np.minimum(t0, t1))
        tmax = np.where(parallel, 1.0, np.maximum(t0, t1))
        t_enter = np.maximum(t_enter, tmin)
        t_exit = np.minimum(t_exit, tmax)
        inside_slab = (a[..., axis] >= lo[axis]) & (a[..., axis] <= hi[axis])
        inside_all &= np.where(parallel, inside_slab, True)
    return (t_enter <= t_exit) & inside_all


def _point_in_wall(p, wall: WallConfig):
    lo, hi = wall.bounds
    pos = np.asarray(p, dtype=float)
    return np.all((pos >= lo) & (pos <= hi), axis=-1)


def _complex_awgn(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """Complex Gaussian noise, per-component variance ``variance``/2.

    Box-Muller on PCG64 uniforms keeps the stream identical across platforms
    and numpy versions.
    """
    u1 = 1.0 - rng.random(shape)  # in (0, 1], safe for log
    u2 = rng.random(shape)
    radius = np.sqrt(-2.0 * np.log(u1))
    noise = radius * (np.cos(2.0 * np.pi * u2) + 1j * np.sin(2.0 * np.pi * u2))
    return np.sqrt(variance / 2.0) * noise


def residual_video_phase(cfg: RadarConfig, bistatic_range_m: float) -> float:
    """Magnitude of the quadratic phase term pi*K*tau^2 dropped by the
    de-chirp linearization.  Should stay below 2*pi*1e-2 rad for the
    standard configurations at their nominal target ranges; it grows with
    the square of the delay, so distant scenes under the fast chirp exceed
    the bound."""
    tau = bistatic_range_m / C_LIGHT
    return np.pi * cfg.chirp_rate * tau ** 2


def synthesize_scatterers(positions, rcs, cfg: RadarConfig,
                          wall: WallConfig | None = None, seed: int = 0,
                          noise_power: float | None = None) -> RawDataMatrix:
    """Beat-signal matrix for explicit scatterer trajectories.

    Parameters
    ----------
    positions : (n_pulses, n_scatterers, 3) array
        Scatterer positions at each pulse instant.
    rcs : (n_scatterers,) array
        Radar cross-sections in m^2.
    cfg, wall
        Radar settings and the optional wall slab.
    seed
        PRNG seed for the noise stream.
    noise_power : optional
        Explicit noise variance sigma_n^2.  When omitted it is calibrated
        from the mean signal power and ``cfg.snr_db``; ``snr_db=None``
        disables noise entirely.

    Returns
    -------
    RawDataMatrix
        (n_adc, n_pulses) complex matrix; deterministic for a fixed seed.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 3 or positions.shape[2] != 3:
        raise ValueError("positions must have shape (pulses, scatterers, 3)")
    if not np.all(np.isfinite(positions)):
        raise ValueError("trajectory contains non-finite positions")
    rcs = np.asarray(rcs, dtype=float)
    n_pulses, n_scat = positions.shape[:2]

    if n_scat and np.any(positions[..., 0] <= cfg.tx[0]):
        warnings.warn("scatterer at or behind the radar plane", stacklevel=2)
    if wall is not None and n_scat and np.any(_point_in_wall(positions, wall)):
        warnings.warn("scatterer inside the wall slab", stacklevel=2)

    n = np.arange(cfg.n_adc)
    t_s = cfg.sample_interval_s
    f_c = cfg.carrier_frequency_hz
    k_rate = cfg.chirp_rate
    matrix = np.zeros((cfg.n_adc, n_pulses), dtype=complex)
    max_amp = 0.0
    for i in range(n_scat):
        r_tx = np.linalg.norm(positions[:, i] - cfg.tx, axis=-1)
        r_rx = np.linalg.norm(positions[:, i] - cfg.rx, axis=-1)
        if wall is None:
            crossings = 0
            tau = (r_tx + r_rx) / C_LIGHT
        else:
            crossings = (segment_crosses_wall(cfg.tx, positions[:, i], wall).astype(int)
                         + segment_crosses_wall(positions[:, i], cfg.rx, wall).astype(int))
            tau = (r_tx + r_rx) / C_LIGHT + wall_extra_delay(wall, crossings)
        amp = scatterer_amplitude(rcs[i], r_tx, r_rx, cfg, wall, crossings)
        max_amp = max(max_amp, float(amp.max()))
        matrix += amp * np.exp(-2j * np.pi * (f_c * tau + k_rate * np.outer(n * t_s, tau)))

    if max_amp > 0.0 and cfg.antenna_isolation_db is not None:
        # Direct TX->RX coupling: a static zero-Doppler tone that the MTI
        # stage is expected to remove.
        tau0 = np.linalg.norm(cfg.tx - cfg.rx) / C_LIGHT
        amp0 = max_amp * 10.0 ** (cfg.antenna_isolation_db / 20.0)
        matrix += amp0 * np.exp(-2j * np.pi * (f_c * tau0 + k_rate * n[:, None] * t_s * tau0))

    if noise_power is None and cfg.snr_db is not None:
        noise_power = float(np.mean(np.abs(matrix) ** 2)) / 10.0 ** (cfg.snr_db / 10.0)
    if noise_power:
        rng = np.random.Generator(np.random.PCG64(seed))
        matrix += _complex_awgn(rng, matrix.shape, noise_power)

    return RawDataMatrix(samples=matrix, sample_interval_s=t_s,
                         pulse_interval_s=cfg.pulse_interval_s)


def synthesize(body: BodyModel, params: ActivityParams, cfg: RadarConfig,
               wall: WallConfig | None = None, seed: int = 0,
               noise_power: float | None = None) -> RawDataMatrix:
    """Simulate the noisy beat matrix for a body performing an activity."""
    times = np.arange(cfg.n_pulses) * cfg.pulse_interval_s
    trajectory = sample_poses(body, params, times)
    return synthesize_scatterers(trajectory, body.rcs, cfg, wall=wall,
                                 seed=seed, noise_power=noise_power)


def measured_snr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    """Empirical SNR of a noisy matrix given its noiseless twin."""
    noise = noisy - clean
    return 10.0 * math.log10(float(np.mean(np.abs(clean) ** 2))
                             / float(np.mean(np.abs(noise) ** 2)))
