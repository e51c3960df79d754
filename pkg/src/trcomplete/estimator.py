"""Scikit-learn style front end for the completion solver."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .sampling import ObservationMask, mask_from_bool
from .solver import SolverConfig, trbu_complete

__all__ = ["TensorRingCompleter"]


class TensorRingCompleter(BaseEstimator, TransformerMixin):
    """Impute missing entries of a dense tensor of any order.

    Missing entries are marked with NaN, or supplied explicitly as an
    :class:`~trcomplete.sampling.ObservationMask` (or boolean array) via
    the ``mask`` argument of :meth:`fit` / :meth:`transform`.

    Parameters mirror :class:`~trcomplete.solver.SolverConfig`.

    Attributes
    ----------
    completed_ : ndarray
        Completion of the tensor passed to :meth:`fit`.
    trace_ : SolverTrace
        Iteration diagnostics of that solve.
    n_iter_ : int
        Number of sweeps performed.

    Examples
    --------
    >>> x = np.arange(24.0).reshape(2, 3, 4)
    >>> holes = x.copy(); holes[0, 1, 2] = np.nan
    >>> filled = TensorRingCompleter().fit_transform(holes)
    """

    def __init__(
        self,
        l=None,
        weights=None,
        mu0=10.0**-2.5,
        beta=1.028,
        tol_rc=1e-8,
        max_iters=500,
        svt_backend="exact-svd",
    ):
        self.l = l
        self.weights = weights
        self.mu0 = mu0
        self.beta = beta
        self.tol_rc = tol_rc
        self.max_iters = max_iters
        self.svt_backend = svt_backend

    def _config(self) -> SolverConfig:
        return SolverConfig(
            l=self.l,
            weights=self.weights,
            mu0=self.mu0,
            beta=self.beta,
            tol_rc=self.tol_rc,
            max_iters=self.max_iters,
            svt_backend=self.svt_backend,
        )

    @staticmethod
    def _resolve_mask(X: np.ndarray, mask) -> ObservationMask:
        if mask is None:
            return mask_from_bool(~np.isnan(np.asarray(X, dtype=np.float64)))
        if isinstance(mask, ObservationMask):
            return mask
        return mask_from_bool(np.asarray(mask, dtype=bool))

    def _solve(self, X, mask):
        X = np.asarray(X, dtype=np.float64)
        return trbu_complete(X, self._resolve_mask(X, mask), self._config())

    def fit(self, X, y=None, mask=None):
        """Complete ``X`` and store the result on the estimator."""
        completed, trace = self._solve(X, mask)
        self.completed_ = completed
        self.trace_ = trace
        self.n_iter_ = trace.n_iterations
        return self

    def transform(self, X, mask=None) -> np.ndarray:
        """Complete ``X`` and return the filled tensor.

        Stateless with respect to :meth:`fit`: each call solves for the
        tensor it is given.
        """
        completed, _ = self._solve(X, mask)
        return completed

    def fit_transform(self, X, y=None, mask=None) -> np.ndarray:
        """Equivalent to ``fit(X, mask=mask).completed_`` (one solve)."""
        return self.fit(X, mask=mask).completed_
