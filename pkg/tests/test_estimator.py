import numpy as np
import pytest
from sklearn.base import clone

from trcomplete import (
    TensorRingCompleter,
    project_omega,
    random_tr,
    relative_error,
    tr_synthesize,
    uniform_mask,
)


@pytest.fixture(scope="module")
def easy_instance():
    truth = tr_synthesize(random_tr((6, 6, 6), (1, 1, 1), seed=0))
    mask = uniform_mask(truth.shape, int(0.9 * truth.size), seed=1)
    return truth, mask


class TestTensorRingCompleter:
    def test_fit_transform_with_nan_marking(self, easy_instance):
        truth, mask = easy_instance
        holes = project_omega(truth, mask, fill=np.nan)
        filled = TensorRingCompleter().fit_transform(holes)
        assert relative_error(filled, truth) < 1e-5
        assert not np.isnan(filled).any()

    def test_fit_stores_result_and_trace(self, easy_instance):
        truth, mask = easy_instance
        holes = project_omega(truth, mask, fill=np.nan)
        est = TensorRingCompleter().fit(holes)
        assert est.completed_.shape == truth.shape
        assert est.n_iter_ == est.trace_.n_iterations
        assert est.trace_.termination in ("rc_tolerance", "max_iterations")

    def test_explicit_mask_overrides_nan_detection(self, easy_instance):
        truth, mask = easy_instance
        filled = TensorRingCompleter().fit_transform(truth, mask=mask)
        xf = filled.reshape(-1, order="F")
        tf = truth.reshape(-1, order="F")
        assert np.array_equal(xf[mask.indices], tf[mask.indices])

    def test_boolean_mask_accepted(self, easy_instance):
        truth, mask = easy_instance
        filled = TensorRingCompleter().fit_transform(truth, mask=mask.dense())
        assert relative_error(filled, truth) < 1e-5

    def test_transform_is_stateless(self, easy_instance):
        truth, mask = easy_instance
        holes = project_omega(truth, mask, fill=np.nan)
        est = TensorRingCompleter()
        out = est.transform(holes)
        assert relative_error(out, truth) < 1e-5
        assert not hasattr(est, "completed_")

    def test_get_params_round_trip(self):
        est = TensorRingCompleter(mu0=0.5, beta=1.1, max_iters=42)
        params = est.get_params()
        assert params["mu0"] == 0.5
        assert params["beta"] == 1.1
        est2 = TensorRingCompleter(**params)
        assert est2.get_params() == params

    def test_sklearn_clone(self):
        est = TensorRingCompleter(l=2, tol_rc=1e-6)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_set_params(self):
        est = TensorRingCompleter().set_params(beta=1.2)
        assert est.beta == 1.2

    def test_invalid_config_surfaces_at_solve(self):
        with pytest.raises(ValueError):
            TensorRingCompleter(beta=3.0).fit_transform(np.ones((2, 2, 2)))

    def test_all_nan_rejected(self):
        with pytest.raises(ValueError):
            TensorRingCompleter().fit_transform(np.full((2, 2, 2), np.nan))
