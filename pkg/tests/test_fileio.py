import json
import struct

import numpy as np
import pytest
from PIL import Image

from mdsim import fileio


class TestBinaryFormats:
    def test_complex_round_trip(self, tmp_path, rng):
        mat = (rng.normal(size=(7, 5)) + 1j * rng.normal(size=(7, 5))).astype(np.complex64)
        path = tmp_path / "m.rhs1"
        fileio.write_complex_matrix(path, mat, 1e-7, 2e-4)
        back, row_step, col_step = fileio.read_matrix(path)
        assert np.array_equal(back, mat)
        assert row_step == 1e-7 and col_step == 2e-4

    def test_real_round_trip(self, tmp_path, rng):
        mat = rng.normal(size=(4, 9)).astype(np.float32)
        path = tmp_path / "m.rhm1"
        fileio.write_real_matrix(path, mat, 0.05, 0.04)
        back, row_step, col_step = fileio.read_matrix(path)
        assert np.array_equal(back, mat)
        assert (row_step, col_step) == (0.05, 0.04)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "m.rhs1"
        fileio.write_complex_matrix(path, np.zeros((3, 2), dtype=complex), 0.5, 0.25)
        blob = path.read_bytes()
        assert blob[:4] == b"RHS1"
        rows, cols = struct.unpack("<II", blob[4:12])
        steps = struct.unpack("<dd", blob[12:28])
        assert (rows, cols) == (3, 2)
        assert steps == (0.5, 0.25)
        # 4 magic + 24 header + rows*cols*8 bytes of f32 pairs
        assert len(blob) == 28 + 3 * 2 * 8

    def test_real_file_size(self, tmp_path):
        path = tmp_path / "m.rhm1"
        fileio.write_real_matrix(path, np.zeros((6, 4)), 1.0, 1.0)
        assert len(path.read_bytes()) == 28 + 6 * 4 * 4

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 40)
        with pytest.raises(ValueError):
            fileio.read_matrix(path)

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "m.rhm1"
        fileio.write_real_matrix(path, np.ones((4, 4)), 1.0, 1.0)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError):
            fileio.read_matrix(path)

    def test_inspect_reports_header_and_entropy(self, tmp_path):
        path = tmp_path / "m.rhm1"
        fileio.write_real_matrix(path, np.ones((4, 4)), 2.0, 3.0)
        info = fileio.inspect_file(path)
        assert info["format"] == "RHM1"
        assert (info["rows"], info["cols"]) == (4, 4)
        assert np.isclose(info["entropy_nats"], np.log(16))


class TestPngExport:
    def test_shape_dtype_and_range(self, tmp_path, rng):
        path = tmp_path / "map.png"
        fileio.write_map_png(path, rng.uniform(0.1, 1.0, size=(20, 30)), kind="power")
        img = np.asarray(Image.open(path))
        assert img.shape == (20, 30)
        assert img.dtype == np.uint8
        assert img.max() == 255 and img.min() == 0

    def test_row_zero_is_top_of_axis(self, tmp_path):
        # peak in the last row (highest Doppler / farthest range) must land
        # in PNG row 0
        values = np.full((8, 4), 1e-9)
        values[-1, 2] = 1.0
        path = tmp_path / "map.png"
        fileio.write_map_png(path, values, kind="power")
        img = np.asarray(Image.open(path))
        assert img[0].max() == 255
        assert img[1:].max() < 255

    def test_resampling(self, tmp_path, rng):
        path = tmp_path / "map.png"
        fileio.write_map_png(path, rng.uniform(size=(30, 12)), kind="power", size=256)
        assert np.asarray(Image.open(path)).shape == (256, 256)

    def test_db_floor(self):
        values = np.array([[1.0, 1e-9]])
        db = fileio.to_db(values, kind="magnitude", floor_db=-60.0)
        assert db[0, 0] == 0.0
        assert db[0, 1] == -60.0
        db_power = fileio.to_db(np.array([[1.0, 0.1]]), kind="power")
        assert np.isclose(db_power[0, 1], -10.0)


class TestTrajectoryCsv:
    def test_layout_and_values(self, tmp_path):
        times = np.array([0.0, 0.5])
        positions = np.arange(2 * 3 * 3, dtype=float).reshape(2, 3, 3)
        rcs = np.array([1.0, 0.5, 0.25])
        path = tmp_path / "traj.csv"
        fileio.write_trajectory_csv(path, times, positions, rcs)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,joint,x,y,z,rcs"
        assert len(lines) == 1 + 2 * 3
        loaded = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.allclose(loaded[0], [0.0, 0, 0.0, 1.0, 2.0, 1.0])
        assert np.allclose(loaded[4, 2:5], positions[1, 1])
        assert np.allclose(loaded[:, 5], [1.0, 0.5, 0.25] * 2)


class TestChecksums:
    def test_sha256_stable(self, tmp_path):
        path = tmp_path / "blob.bin"
        path.write_bytes(b"abc")
        expected = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        assert fileio.sha256_file(path) == expected
        entry = fileio.file_entry(tmp_path, path)
        assert entry == {"path": "blob.bin", "sha256": expected}

    def test_sidecar_round_trip(self, tmp_path):
        path = tmp_path / "meta.json"
        fileio.write_sidecar(path, {"b": 2, "a": [1, 2]})
        assert json.loads(path.read_text()) == {"a": [1, 2], "b": 2}
