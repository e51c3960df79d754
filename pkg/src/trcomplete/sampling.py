"""Observation masks and the sampling projection.

A mask stores the observed positions of a tensor as sorted unique linear
indices under the package-wide first-index-fastest linearization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_dense_tensor, check_dims, prod

__all__ = [
    "ObservationMask",
    "uniform_mask",
    "bernoulli_mask",
    "mask_from_bool",
    "project_omega",
]


@dataclass(frozen=True)
class ObservationMask:
    """Set of observed entries of a tensor of shape ``dims``.

    ``indices`` are sorted, unique linear indices (first index fastest).
    """

    dims: tuple[int, ...]
    indices: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        idx = np.sort(idx)
        if idx.size and (idx[0] < 0 or idx[-1] >= prod(dims)):
            raise ValueError("mask indices out of range for dims")
        if idx.size and np.any(np.diff(idx) == 0):
            raise ValueError("mask indices contain duplicates")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return prod(self.dims)

    @property
    def count(self) -> int:
        return int(self.indices.size)

    @property
    def sampling_rate(self) -> float:
        return self.count / self.size

    def dense(self) -> np.ndarray:
        """Boolean tensor of shape ``dims``, True where observed."""
        flat = np.zeros(self.size, dtype=bool)
        flat[self.indices] = True
        return flat.reshape(self.dims, order="F")


def uniform_mask(dims, m: int, seed) -> ObservationMask:
    """Sample exactly ``m`` observed entries uniformly over all m-subsets."""
    dims = check_dims(dims)
    size = prod(dims)
    m = int(m)
    if not 0 <= m <= size:
        raise ValueError(f"sample count m={m} outside 0..{size}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(size, size=m, replace=False)
    return ObservationMask(dims, idx)


def bernoulli_mask(dims, p: float, seed) -> ObservationMask:
    """Include each entry independently with probability ``p``."""
    dims = check_dims(dims)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"inclusion probability p={p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    flat = rng.random(prod(dims)) < p
    return ObservationMask(dims, np.flatnonzero(flat))


def mask_from_bool(observed: np.ndarray) -> ObservationMask:
    """Build a mask from a boolean tensor (True = observed)."""
    observed = np.asarray(observed, dtype=bool)
    flat = observed.reshape(-1, order="F")
    return ObservationMask(observed.shape, np.flatnonzero(flat))


def project_omega(t: np.ndarray, mask: ObservationMask, fill: float = 0.0) -> np.ndarray:
    """Keep observed entries of ``t`` and set the rest to ``fill``."""
    t = check_dense_tensor(t)
    if t.shape != mask.dims:
        raise ValueError(f"tensor dims {t.shape} do not match mask dims {mask.dims}")
    flat = np.full(mask.size, float(fill))
    tf = t.reshape(-1, order="F")
    flat[mask.indices] = tf[mask.indices]
    return flat.reshape(mask.dims, order="F")
