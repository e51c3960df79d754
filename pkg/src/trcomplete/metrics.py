"""Recovery quality metrics."""

from __future__ import annotations

import math

import numpy as np

from ._validation import check_dense_tensor, check_same_dims

__all__ = ["relative_error", "psnr"]


def relative_error(est: np.ndarray, truth: np.ndarray) -> float:
    """``||est - truth||_F / ||truth||_F``; requires nonzero truth."""
    est = check_dense_tensor(est, "est")
    truth = check_dense_tensor(truth, "truth")
    check_same_dims(est, truth)
    denom = float(np.linalg.norm(truth.reshape(-1)))
    if denom == 0.0:
        raise ValueError("truth has zero Frobenius norm")
    return float(np.linalg.norm((est - truth).reshape(-1))) / denom


def psnr(est: np.ndarray, truth: np.ndarray, peak: float) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` when the error is zero."""
    est = check_dense_tensor(est, "est")
    truth = check_dense_tensor(truth, "truth")
    check_same_dims(est, truth)
    mse = float(np.mean((est - truth) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(float(peak) ** 2 / mse)
