"""Simulation drivers: one fully exported run, and randomized batches.

A single run writes the raw beat matrix (RHS1), the trajectory CSV, the RTM
and all eight DTM variants (RHM1 + PNG + JSON sidecar each), an entropy
report and a manifest with SHA-256 checksums of every file.  A batch draws
randomized subjects and motion parameters per activity, simulates each
sample, exports its training map and assigns a seeded train/validation
split.  Item seeds are ``base_seed XOR global item index`` so any subset of
a batch is reproducible independently; completed items recorded in the
incremental manifest are skipped on resume.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from . import dsp, fileio
from .config import BatchSpec, RunConfig
from .echo import synthesize
from .kinematics import ActivityParams, build_body, sample_poses


def _export_dtm(out_dir: Path, name: str, dtm: dsp.Dtm, image_size):
    files = {}
    rhm1 = out_dir / f"{name}.rhm1"
    fileio.write_real_matrix(rhm1, dtm.power, dtm.doppler_step_hz, dtm.time_step_s)
    files["rhm1"] = rhm1
    png = out_dir / f"{name}.png"
    fileio.write_map_png(png, dtm.power, kind="power", size=image_size)
    files["png"] = png
    sidecar = out_dir / f"{name}.json"
    try:
        ent = dsp.entropy(dtm.power)
    except ValueError:
        ent = None
    fileio.write_sidecar(sidecar, {
        "variant": dtm.variant,
        "rows": int(dtm.power.shape[0]),
        "cols": int(dtm.power.shape[1]),
        "doppler_start_hz": float(dtm.doppler_hz[0]),
        "doppler_step_hz": dtm.doppler_step_hz,
        "time_start_s": float(dtm.time_s[0]),
        "time_step_s": dtm.time_step_s,
        "scale": "linear_power",
        "entropy_nats": ent,
    })
    files["sidecar"] = sidecar
    return files


def run_single(cfg: RunConfig, out_dir) -> dict:
    """Simulate one configuration and export every product.

    Returns the manifest (also written to ``manifest.json``), listing the
    raw matrix, trajectory, RTM, the eight DTM variants and the entropy
    report together with their checksums.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    body = build_body(cfg.subject.height_m, cfg.subject.weight_kg)

    raw = synthesize(body, cfg.activity, cfg.radar, wall=cfg.wall, seed=cfg.seed)
    result = dsp.pipeline(raw, cfg.radar, body, cfg.activity, cfg.processing,
                          wall=cfg.wall)

    raw_path = out_dir / "raw.rhs1"
    fileio.write_complex_matrix(raw_path, raw.samples, raw.sample_interval_s,
                                raw.pulse_interval_s)

    times = np.arange(cfg.radar.n_pulses) * cfg.radar.pulse_interval_s
    trajectory = sample_poses(body, cfg.activity, times)
    traj_path = out_dir / "trajectory.csv"
    fileio.write_trajectory_csv(traj_path, times, trajectory, body.rcs)

    rtm_files = {}
    rtm_path = out_dir / "rtm.rhm1"
    fileio.write_real_matrix(rtm_path, result.rtm.magnitude,
                             result.rtm.range_step_m, result.rtm.time_step_s)
    rtm_files["rhm1"] = rtm_path
    rtm_png = out_dir / "rtm.png"
    fileio.write_map_png(rtm_png, result.rtm.magnitude, kind="magnitude",
                         size=cfg.processing.image_size)
    rtm_files["png"] = rtm_png
    rtm_sidecar = out_dir / "rtm.json"
    fileio.write_sidecar(rtm_sidecar, {
        "variant": "rtm",
        "rows": int(result.rtm.magnitude.shape[0]),
        "cols": int(result.rtm.magnitude.shape[1]),
        "range_step_m": result.rtm.range_step_m,
        "time_step_s": result.rtm.time_step_s,
        "scale": "linear_magnitude",
        "entropy_nats": result.entropies["rtm"],
    })
    rtm_files["sidecar"] = rtm_sidecar

    dtm_files = {}
    for key, dtm in result.dtms.items():
        dtm_files[key] = _export_dtm(out_dir, f"dtm_{key}", dtm,
                                     cfg.processing.image_size)

    entropy_path = out_dir / "entropy.json"
    clean = {k: (v if math.isfinite(v) else None) for k, v in result.entropies.items()}
    fileio.write_sidecar(entropy_path, clean)

    entry = lambda p: fileio.file_entry(out_dir, p)  # noqa: E731
    manifest = {
        "scenario": cfg.scenario,
        "activity": cfg.activity.activity.name,
        "seed": cfg.seed,
        "files": {
            "raw": entry(raw_path),
            "trajectory": entry(traj_path),
            "rtm": {k: entry(p) for k, p in rtm_files.items()},
            "dtm": {key: {k: entry(p) for k, p in files.items()}
                    for key, files in dtm_files.items()},
            "entropy_report": entry(entropy_path),
        },
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _draw_item_params(spec: BatchSpec, base: RunConfig, activity, rng):
    """Randomized subject and motion parameters for one batch item."""
    height = rng.uniform(*spec.height_range_m)
    angle = math.radians(rng.uniform(*spec.motion_angle_range_deg))
    x0 = rng.uniform(*spec.initial_range_m)
    jitter = lambda: 1.0 + rng.uniform(-spec.amplitude_jitter, spec.amplitude_jitter)  # noqa: E731
    template = base.activity
    speed = math.hypot(*template.velocity_mps)
    params = dataclasses.replace(
        template,
        activity=activity,
        thigh_amplitude_rad=template.thigh_amplitude_rad * jitter(),
        calf_amplitude_rad=template.calf_amplitude_rad * jitter(),
        arm_amplitude_rad=template.arm_amplitude_rad * jitter(),
        turn_amplitude_rad=template.turn_amplitude_rad * jitter(),
        velocity_mps=(speed * math.cos(angle), speed * math.sin(angle)),
        initial_position_m=(x0, 0.0),
        torso_height_m=None,
    )
    return height, params


def run_batch(spec: BatchSpec, base_cfg: RunConfig, out_dir,
              progress=None) -> dict:
    """Generate a randomized dataset.

    For each activity, ``count_per_activity`` parameter draws are simulated
    and the compensated + denoised STFT DTM exported (all eight variants
    with ``export_all_variants``).  Writes ``items.jsonl`` incrementally for
    resume, then ``dataset_manifest.json`` and ``split.json`` with the
    seeded stratified train/validation assignment.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    items_path = out_dir / "items.jsonl"

    done: dict[str, dict] = {}
    if items_path.exists():
        with open(items_path) as fh:
            for line in fh:
                item = json.loads(line)
                done[item["id"]] = item

    activities = spec.activities
    total = len(activities) * spec.count_per_activity
    items = []
    with open(items_path, "a") as log:
        for a_idx, activity in enumerate(activities):
            act_dir = out_dir / activity.name
            act_dir.mkdir(exist_ok=True)
            for i in range(spec.count_per_activity):
                global_idx = a_idx * spec.count_per_activity + i
                item_id = f"{activity.name}_{i:04d}"
                if item_id in done:
                    items.append(done[item_id])
                    continue
                item_seed = spec.base_seed ^ global_idx
                rng = np.random.Generator(np.random.PCG64(item_seed))
                height, params = _draw_item_params(spec, base_cfg, activity, rng)
                body = build_body(height, base_cfg.subject.weight_kg)

                raw = synthesize(body, params, base_cfg.radar, wall=base_cfg.wall,
                                 seed=item_seed)
                proc = base_cfg.processing
                if spec.export_all_variants:
                    result = dsp.pipeline(raw, base_cfg.radar, body, params, proc,
                                          wall=base_cfg.wall)
                    dtms = result.dtms
                else:
                    dtms = {"stft_denoised_comp": _training_dtm(
                        raw, base_cfg, body, params, proc)}

                files = {}
                for key, dtm in dtms.items():
                    exported = _export_dtm(act_dir, f"{i:04d}_{key}", dtm,
                                           proc.image_size)
                    files[key] = {k: fileio.file_entry(out_dir, p)
                                  for k, p in exported.items()}
                item = {
                    "id": item_id,
                    "activity": activity.name,
                    "index": i,
                    "seed": item_seed,
                    "height_m": height,
                    "initial_position_m": list(params.initial_xy),
                    "velocity_mps": list(params.velocity_mps),
                    "files": files,
                }
                log.write(json.dumps(item, sort_keys=True) + "\n")
                log.flush()
                items.append(item)
                if progress is not None:
                    progress(len(items), total)

    split_rng = np.random.Generator(np.random.PCG64(spec.base_seed))
    split = {"train": [], "val": []}
    for activity in activities:
        ids = [it["id"] for it in items if it["activity"] == activity.name]
        order = split_rng.permutation(len(ids))
        n_train = int(round(spec.train_fraction * len(ids)))
        for pos, idx in enumerate(order):
            split["train" if pos < n_train else "val"].append(ids[idx])
    split["train"].sort()
    split["val"].sort()
    with open(out_dir / "split.json", "w") as fh:
        json.dump(split, fh, indent=2, sort_keys=True)
        fh.write("\n")

    manifest = {
        "count_per_activity": spec.count_per_activity,
        "activities": [a.name for a in activities],
        "base_seed": spec.base_seed,
        "train": len(split["train"]),
        "val": len(split["val"]),
        "items": items,
    }
    with open(out_dir / "dataset_manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _training_dtm(raw, cfg: RunConfig, body, params: ActivityParams,
                  proc: dsp.ProcessingConfig) -> dsp.Dtm:
    """Lean path for the default batch export: compensated + denoised STFT."""
    filtered = dsp.mti(raw)
    _, spectrum = dsp.range_fft(filtered, proc.n_fft, cfg.radar.chirp_rate)
    x = dsp.aggregate(spectrum, proc.range_gate)
    v_r = dsp.torso_bulk_velocity(body, params, cfg.radar, cfg.wall)
    phase = dsp.bulk_phase(v_r, cfg.radar.wavelength_m, raw.pulse_interval_s)
    x = dsp.savgol(dsp.compensate(x, phase), proc.smoother_order, proc.smoother_frame)
    dtm = dsp.stft(x, raw.pulse_interval_s, proc.window_fraction,
                   proc.overlap_fraction)
    return dataclasses.replace(dtm, variant="stft_denoised_comp")
