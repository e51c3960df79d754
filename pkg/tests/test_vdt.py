import numpy as np
import pytest

from trcomplete import VdtPlan, vdt_forward, vdt_inverse


class TestVdtPlan:
    def test_factor_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            VdtPlan((2, 2), (4,))

    def test_dims(self):
        plan = VdtPlan((2,) * 8, (2,) * 8, (3,))
        assert plan.image_shape == (256, 256, 3)
        assert plan.tensor_dims == (4,) * 8 + (3,)


class TestForward:
    def test_identity_plan(self):
        # K=1 with m_1 = H, n_1 = W merges the two spatial modes but moves
        # no entry: the linearized data is untouched
        rng = np.random.default_rng(0)
        img = rng.standard_normal((6, 8, 3))
        plan = VdtPlan((6,), (8,), (3,))
        out = vdt_forward(img, plan)
        assert out.shape == (48, 3)
        assert np.array_equal(out, img.reshape((48, 3), order="F"))
        assert np.array_equal(vdt_inverse(out, plan), img)

    def test_4x4_block_addressing_oracle(self):
        # exhaustive 16-entry check: mode 1 indexes position inside each
        # aligned 2x2 block, mode 2 indexes which block
        img = np.arange(16.0).reshape(4, 4, order="F").reshape(4, 4, 1)
        plan = VdtPlan((2, 2), (2, 2), (1,))
        t = vdt_forward(img, plan)
        assert t.shape == (4, 4, 1)
        for h in range(4):
            for w in range(4):
                fine = (h % 2) + 2 * (w % 2)
                coarse = (h // 2) + 2 * (w // 2)
                assert t[fine, coarse, 0] == img[h, w, 0]

    def test_block_locality(self):
        rng = np.random.default_rng(1)
        img = rng.standard_normal((4, 4, 1))
        t = vdt_forward(img, VdtPlan((2, 2), (2, 2), (1,)))
        for bh in range(2):
            for bw in range(2):
                block = img[2 * bh : 2 * bh + 2, 2 * bw : 2 * bw + 2, 0]
                coarse = bh + 2 * bw
                slice_vals = t[:, coarse, 0]
                assert np.array_equal(np.sort(slice_vals), np.sort(block.ravel()))

    def test_full_image_scale_geometry(self):
        img = np.zeros((256, 256, 3))
        t = vdt_forward(img, VdtPlan((2,) * 8, (2,) * 8, (3,)))
        assert t.shape == (4,) * 8 + (3,)
        assert t.ndim == 9

    def test_norm_and_multiset_preserved(self):
        rng = np.random.default_rng(2)
        img = rng.standard_normal((8, 8, 3))
        t = vdt_forward(img, VdtPlan((2, 2, 2), (2, 2, 2), (3,)))
        assert np.isclose(np.linalg.norm(t), np.linalg.norm(img), rtol=1e-13)
        assert np.array_equal(np.sort(t.ravel()), np.sort(img.ravel()))

    def test_geometry_mismatch_rejected(self):
        with pytest.raises(ValueError):
            vdt_forward(np.zeros((8, 8, 3)), VdtPlan((2, 2), (2, 2), (3,)))


class TestInverse:
    def test_round_trip_small(self):
        rng = np.random.default_rng(3)
        img = rng.standard_normal((8, 8, 3))
        plan = VdtPlan((2, 2, 2), (2, 2, 2), (3,))
        assert np.array_equal(vdt_inverse(vdt_forward(img, plan), plan), img)

    def test_round_trip_mixed_factor_512(self):
        rng = np.random.default_rng(4)
        img = rng.standard_normal((512, 512, 3))
        plan = VdtPlan((2, 2, 2, 4, 4, 4), (4, 4, 4, 2, 2, 2), (3,))
        assert np.array_equal(vdt_inverse(vdt_forward(img, plan), plan), img)

    def test_round_trip_video_style_trailing(self):
        rng = np.random.default_rng(5)
        vid = rng.standard_normal((8, 12, 5, 3))  # frames then channels
        plan = VdtPlan((2, 4), (3, 4), (5, 3))
        assert np.array_equal(vdt_inverse(vdt_forward(vid, plan), plan), vid)

    def test_zero_tensor(self):
        plan = VdtPlan((2, 2), (2, 2), (3,))
        assert not vdt_inverse(np.zeros((4, 4, 3)), plan).any()

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            vdt_inverse(np.zeros((4, 5, 3)), VdtPlan((2, 2), (2, 2), (3,)))
