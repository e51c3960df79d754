import hashlib
import struct

import numpy as np
import pytest

from trcomplete import SolverConfig, random_tr, uniform_mask
from trcomplete.fileio import (
    FormatError,
    read_factors,
    read_mask,
    read_pgm_mask,
    read_ppm,
    read_solver_config,
    read_tensor,
    write_factors,
    write_mask,
    write_ppm,
    write_tensor,
)


class TestTensorFormat:
    def test_round_trip(self, tmp_path):
        t = np.random.default_rng(0).standard_normal((3, 4, 5))
        path = tmp_path / "t.dt1"
        write_tensor(path, t)
        assert np.array_equal(read_tensor(path), t)

    def test_large_round_trip_byte_identical(self, tmp_path):
        t = np.random.default_rng(1).standard_normal((100, 100, 100))
        path = tmp_path / "big.dt1"
        write_tensor(path, t)
        digest1 = hashlib.sha256(path.read_bytes()).hexdigest()
        again = read_tensor(path)
        write_tensor(path, again)
        assert hashlib.sha256(path.read_bytes()).hexdigest() == digest1

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.dt1"
        path.write_bytes(b"XYZ\n" + b"\x00" * 16)
        with pytest.raises(FormatError) as err:
            read_tensor(path)
        assert err.value.offset == 0
        assert str(path) in str(err.value)

    def test_zero_order_rejected(self, tmp_path):
        path = tmp_path / "zero.dt1"
        path.write_bytes(b"DT1\n" + struct.pack("<I", 0))
        with pytest.raises(FormatError) as err:
            read_tensor(path)
        assert err.value.offset == 4

    def test_truncated_data(self, tmp_path):
        t = np.ones((2, 2))
        path = tmp_path / "trunc.dt1"
        write_tensor(path, t)
        data = path.read_bytes()
        path.write_bytes(data[:-5])
        with pytest.raises(FormatError) as err:
            read_tensor(path)
        assert "truncated" in str(err.value)
        assert err.value.offset == len(data) - 5

    def test_trailing_bytes_rejected(self, tmp_path):
        path = tmp_path / "trail.dt1"
        write_tensor(path, np.ones((2, 2)))
        path.write_bytes(path.read_bytes() + b"xx")
        with pytest.raises(FormatError):
            read_tensor(path)


class TestFactorsFormat:
    def test_round_trip(self, tmp_path):
        f = random_tr((4, 5, 6), (2, 3, 2), seed=2)
        path = tmp_path / "f.trf"
        write_factors(path, f)
        g = read_factors(path)
        assert g.ranks == f.ranks
        for a, b in zip(f.cores, g.cores):
            assert np.array_equal(a, b)

    def test_header_mismatch_detected(self, tmp_path):
        f = random_tr((4, 4), (2, 2), seed=3)
        path = tmp_path / "f.trf"
        write_factors(path, f)
        data = path.read_bytes()
        bad = data.replace(b'"ranks": [2, 2]', b'"ranks": [2, 3]', 1)
        path.write_bytes(bad)
        with pytest.raises(FormatError):
            read_factors(path)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "f.trf"
        path.write_bytes(b"DT1\n")
        with pytest.raises(FormatError):
            read_factors(path)


class TestMaskFormat:
    def test_round_trip(self, tmp_path):
        mask = uniform_mask((4, 5, 6), 37, seed=4)
        path = tmp_path / "m.mk1"
        write_mask(path, mask)
        back = read_mask(path)
        assert back.dims == mask.dims
        assert np.array_equal(back.indices, mask.indices)

    def test_unsorted_indices_rejected(self, tmp_path):
        path = tmp_path / "m.mk1"
        parts = [b"MK1\n", struct.pack("<I", 1), struct.pack("<Q", 10),
                 struct.pack("<Q", 2), struct.pack("<QQ", 5, 3)]
        path.write_bytes(b"".join(parts))
        with pytest.raises(FormatError):
            read_mask(path)

    def test_count_overflow_rejected(self, tmp_path):
        path = tmp_path / "m.mk1"
        parts = [b"MK1\n", struct.pack("<I", 1), struct.pack("<Q", 4),
                 struct.pack("<Q", 9)]
        path.write_bytes(b"".join(parts))
        with pytest.raises(FormatError):
            read_mask(path)


class TestImageFormats:
    def test_ppm_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        img = np.round(rng.random((6, 8, 3)) * 255) / 255.0
        path = tmp_path / "img.ppm"
        write_ppm(path, img)
        back = read_ppm(path)
        assert back.shape == (6, 8, 3)
        assert np.allclose(back, img, atol=1e-12)

    def test_ppm_clamps_on_write(self, tmp_path):
        img = np.full((2, 2, 3), 2.0)
        path = tmp_path / "img.ppm"
        write_ppm(path, img)
        assert np.all(read_ppm(path) == 1.0)

    def test_ppm_header_comments(self, tmp_path):
        path = tmp_path / "c.ppm"
        pixels = bytes(range(12))
        path.write_bytes(b"P6\n# a comment\n2 2\n255\n" + pixels)
        img = read_ppm(path)
        assert img.shape == (2, 2, 3)

    def test_pgm_mask(self, tmp_path):
        path = tmp_path / "m.pgm"
        pixels = bytes([0, 255, 128, 0, 0, 7])  # 2 rows x 3 cols
        path.write_bytes(b"P5\n3 2\n255\n" + pixels)
        mask = read_pgm_mask(path)
        dense = mask.dense()
        assert dense.shape == (2, 3)
        assert dense.tolist() == [[False, True, True], [False, False, True]]

    def test_pgm_mask_replicated_over_channels(self, tmp_path):
        path = tmp_path / "m.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0]))
        mask = read_pgm_mask(path, dims=(2, 2, 3))
        dense = mask.dense()
        assert dense.shape == (2, 2, 3)
        for c in range(3):
            assert dense[:, :, c].tolist() == [[False, True], [True, False]]

    def test_pgm_bad_magic(self, tmp_path):
        path = tmp_path / "m.pgm"
        path.write_bytes(b"P4\n2 2\n255\n" + bytes(4))
        with pytest.raises(FormatError):
            read_pgm_mask(path)


class TestSolverConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "solver.cfg"
        path.write_text(
            "# solver settings\n"
            "l = 2\n"
            "mu0 = 0.01\n"
            "beta = 1.05\n"
            "tol_rc = 1e-6\n"
            "max_iters = 120\n"
            "weights = 0.7, 0.3\n"
        )
        cfg = read_solver_config(path)
        assert cfg.l == 2
        assert cfg.mu0 == 0.01
        assert cfg.beta == 1.05
        assert cfg.tol_rc == 1e-6
        assert cfg.max_iters == 120
        assert cfg.weights == (0.7, 0.3)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "solver.cfg"
        path.write_text("gamma = 3\n")
        with pytest.raises(ValueError):
            read_solver_config(path)

    def test_defaults_when_empty(self, tmp_path):
        path = tmp_path / "solver.cfg"
        path.write_text("\n")
        assert read_solver_config(path) == SolverConfig()
