"""The spectral global-filter block on a real Doppler-time map.

Builds a small walking DTM, treats it as a feature map and pushes it
through the FFT-domain filter block three ways: the identity mask (exact
round trip), a low-pass mask (keeps the ridge, drops speckle) and a random
near-identity initialization.  Finishes with the finite-difference gradient
verification that makes the block trainable.

Run:  python3 demos/global_filter_block.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mdsim import (ActivityParams, GlobalFilter, build_body, free_space_config,
                   global_filter_forward, gradient_check, synthesize)
from mdsim import dsp

# a quick walking DTM to act as the input feature map
cfg = free_space_config(prf_hz=640.0, bandwidth_hz=0.5e9,
                        sampling_frequency_hz=2e6, duration_s=0.8)
body = build_body(1.8, 84.24)
params = ActivityParams(activity="S8")
raw = synthesize(body, params, cfg, seed=0)
_, spectrum = dsp.range_fft(dsp.mti(raw), 1024, cfg.chirp_rate)
dtm = dsp.stft(dsp.aggregate(spectrum), raw.pulse_interval_s)

# crop to an even-sized single-channel feature map, log-scaled like a
# network input image
h = dtm.power.shape[0] // 2 * 2
w = dtm.power.shape[1] // 2 * 2
x = np.log10(dtm.power[:h, :w, None] + 1e-12)
x -= x.mean()

identity = GlobalFilter.identity(x.shape)
y_identity = global_filter_forward(x, identity)
print(f"identity round-trip max error: {np.abs(y_identity - x).max():.2e}")

# low-pass mask: keep only the slowest spatial frequencies
mask = np.zeros(x.shape + (2,))
fy = np.fft.fftfreq(h)[:, None]
fx = np.fft.fftfreq(w)[None, :]
mask[..., 0] = ((np.abs(fy) < 0.08) & (np.abs(fx) < 0.08))[..., None]
lowpass = GlobalFilter(mask)

random_init = GlobalFilter.randn(x.shape, scale=0.15, seed=7)

fig, axes = plt.subplots(1, 4, figsize=(16, 4))
panels = [("input DTM (log power)", x),
          ("identity filter", y_identity),
          ("low-pass filter", global_filter_forward(x, lowpass)),
          ("random near-identity", global_filter_forward(x, random_init))]
for ax, (title, img) in zip(axes, panels):
    ax.imshow(img[..., 0], origin="lower", aspect="auto", cmap="inferno")
    ax.set_title(title, fontsize=10)
fig.tight_layout()

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "global_filter_block.png", dpi=110)
print(f"wrote {out / 'global_filter_block.png'}")

print("verifying gradients against central finite differences ...")
report = gradient_check(n_trials=10, seed=1)
print(f"  grad_x max relative error: {report['max_rel_error_grad_x']:.2e}")
print(f"  grad_k max relative error: {report['max_rel_error_grad_k']:.2e}")
