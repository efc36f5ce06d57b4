"""On-disk formats: RHS1/RHM1 binary matrices, PNG maps, sidecars, CSV.

RHS1 (complex matrix):
    bytes 0..3   magic "RHS1"
    bytes 4..11  rows (u32 LE), cols (u32 LE)
    bytes 12..27 row step and column step (f64 LE); for raw matrices these
                 are the fast-time step T_s and the pulse interval T_PRI
    data         row-major interleaved little-endian f32 (re, im)

RHM1 (real matrix): same header with magic "RHM1" and two f64 axis steps,
followed by row-major little-endian f32 values.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np
from PIL import Image

RHS1_MAGIC = b"RHS1"
RHM1_MAGIC = b"RHM1"
_HEADER = struct.Struct("<II dd")


def write_complex_matrix(path, samples: np.ndarray, row_step: float, col_step: float):
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    with open(path, "wb") as fh:
        fh.write(RHS1_MAGIC)
        fh.write(_HEADER.pack(samples.shape[0], samples.shape[1], row_step, col_step))
        fh.write(np.ascontiguousarray(samples.astype("<c8")).tobytes())


def write_real_matrix(path, values: np.ndarray, row_step: float, col_step: float):
    values = np.asarray(values)
    if values.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    with open(path, "wb") as fh:
        fh.write(RHM1_MAGIC)
        fh.write(_HEADER.pack(values.shape[0], values.shape[1], row_step, col_step))
        fh.write(np.ascontiguousarray(values.astype("<f4")).tobytes())


def _read_header(fh, path):
    magic = fh.read(4)
    if magic not in (RHS1_MAGIC, RHM1_MAGIC):
        raise ValueError(f"{path}: not an RHS1/RHM1 file")
    rows, cols, row_step, col_step = _HEADER.unpack(fh.read(_HEADER.size))
    return magic, rows, cols, row_step, col_step


def read_matrix(path):
    """Read either format; returns (values, row_step, col_step).

    Complex files come back as complex64, real files as float32.
    """
    with open(path, "rb") as fh:
        magic, rows, cols, row_step, col_step = _read_header(fh, path)
        dtype = "<c8" if magic == RHS1_MAGIC else "<f4"
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != rows * cols:
        raise ValueError(f"{path}: truncated payload")
    return data.reshape(rows, cols).copy(), row_step, col_step


def inspect_file(path) -> dict:
    """Header summary plus the entropy of the stored map (nats)."""
    from .dsp import entropy  # deferred: fileio stays importable standalone

    values, row_step, col_step = read_matrix(path)
    kind = "complex" if np.iscomplexobj(values) else "real"
    mag = np.abs(values) if kind == "complex" else np.maximum(values, 0.0)
    try:
        ent = entropy(mag)
    except ValueError:
        ent = float("nan")
    return {
        "path": str(path),
        "format": "RHS1" if kind == "complex" else "RHM1",
        "rows": int(values.shape[0]),
        "cols": int(values.shape[1]),
        "row_step": row_step,
        "col_step": col_step,
        "entropy_nats": ent,
    }


def to_db(values: np.ndarray, kind: str, floor_db: float = -60.0) -> np.ndarray:
    """dB image of a magnitude or power map, floored relative to its peak."""
    vals = np.asarray(values, dtype=float)
    peak = vals.max()
    if peak <= 0.0:
        return np.full(vals.shape, floor_db)
    scale = 20.0 if kind == "magnitude" else 10.0
    with np.errstate(divide="ignore"):
        db = scale * np.log10(np.where(vals > 0.0, vals / peak, np.nan))
    return np.maximum(np.nan_to_num(db, nan=floor_db), floor_db)


def write_map_png(path, values: np.ndarray, kind: str, floor_db: float = -60.0,
                  size: int | None = None):
    """8-bit grayscale dB image, min-max normalized.

    Row 0 of the PNG is the top of the physical axis (farthest range or
    highest Doppler), so the input rows are flipped.  ``size`` resamples to
    a square image (bilinear) for fixed-size network inputs.
    """
    db = to_db(values, kind, floor_db)
    lo, hi = db.min(), db.max()
    span = hi - lo if hi > lo else 1.0
    img8 = np.round(255.0 * (db - lo) / span).astype(np.uint8)
    image = Image.fromarray(img8[::-1], mode="L")
    if size is not None:
        image = image.resize((size, size), Image.BILINEAR)
    image.save(path)


def write_sidecar(path, metadata: dict):
    with open(path, "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_trajectory_csv(path, times: np.ndarray, positions: np.ndarray,
                         rcs: np.ndarray):
    """One row per joint per pulse: t, joint index, x, y, z, rcs."""
    n_t, n_joints = positions.shape[0], positions.shape[1]
    rows = np.empty((n_t * n_joints, 6))
    rows[:, 0] = np.repeat(times, n_joints)
    rows[:, 1] = np.tile(np.arange(n_joints), n_t)
    rows[:, 2:5] = positions.reshape(-1, 3)
    rows[:, 5] = np.tile(rcs, n_t)
    header = "t,joint,x,y,z,rcs"
    np.savetxt(path, rows, delimiter=",", header=header, comments="",
               fmt=("%.9g", "%d", "%.9g", "%.9g", "%.9g", "%.9g"))


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def file_entry(base: Path, path: Path) -> dict:
    return {"path": str(path.relative_to(base)), "sha256": sha256_file(path)}
