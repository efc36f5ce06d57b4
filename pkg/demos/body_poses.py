"""Stick-figure snapshots of the kinematic model.

Samples the 13-joint pose at a few instants for four contrasting
activities and draws them side by side.  Joint markers are scaled by RCS,
like the scatterers the radar actually sees.

Run:  python3 demos/body_poses.py        (writes demos/output/body_poses.png)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mdsim import ActivityParams, build_body, sample_poses

# bone segments as (joint, parent) pairs, taken from the model's own table
BONES = [(i, p) for i, p in enumerate(
    [None, 0, 0, 2, 3, 0, 5, 6, 0, 8, 9, 8, 11]) if p is not None]

body = build_body(height_m=1.8, weight_kg=84.24)
activities = ["S4", "S5", "S8", "S12"]
snapshots = np.array([0.0, 1.0, 2.0, 3.0])

fig, axes = plt.subplots(1, len(activities), figsize=(16, 5), sharey=True)
for ax, label in zip(axes, activities):
    params = ActivityParams(activity=label)
    poses = sample_poses(body, params, snapshots)
    for k, t in enumerate(snapshots):
        pose = poses[k]
        shade = str(0.75 - 0.22 * k / (len(snapshots) - 1))
        for child, parent in BONES:
            ax.plot(pose[[parent, child], 0], pose[[parent, child], 2],
                    color=shade, lw=1.5)
        ax.scatter(pose[:, 0], pose[:, 2], s=80 * body.rcs, color=shade,
                   zorder=3, label=f"t = {t:.0f} s" if label == activities[0] else None)
    ax.set_title(f"{label} ({params.activity.value})")
    ax.set_xlabel("range x (m)")
    ax.set_aspect("equal")
    ax.grid(alpha=0.3)
axes[0].set_ylabel("height z (m)")
axes[0].legend(loc="upper left", fontsize=8)
fig.suptitle("13-scatterer body model: poses over time (darker = later)")
fig.tight_layout()

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "body_poses.png", dpi=120)
print(f"wrote {out / 'body_poses.png'}")
