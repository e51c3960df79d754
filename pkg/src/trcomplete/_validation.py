"""Shared input validation helpers."""

from __future__ import annotations

import math

import numpy as np


def check_dense_tensor(x, name: str = "tensor") -> np.ndarray:
    """Coerce to a float64 ndarray of order >= 1 and validate its shape."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim < 1:
        raise ValueError(f"{name} must have order >= 1, got a scalar")
    if any(n < 1 for n in arr.shape):
        raise ValueError(f"{name} has an empty mode: shape {arr.shape}")
    return arr


def check_same_dims(a: np.ndarray, b: np.ndarray, what: str = "tensors") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what} have mismatched dims: {a.shape} vs {b.shape}")


def check_mode(i: int, d: int) -> int:
    i = int(i)
    if not 1 <= i <= d:
        raise ValueError(f"mode index i={i} outside 1..{d}")
    return i


def check_unfold_length(l: int, d: int) -> int:
    # l = d would be a vector, not a matricization; rejected by contract.
    l = int(l)
    if not 1 <= l <= d - 1:
        raise ValueError(f"matricization length l={l} outside 1..{d - 1}")
    return l


def check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(n) for n in dims)
    if len(dims) < 1:
        raise ValueError("dims must contain at least one mode")
    if any(n < 1 for n in dims):
        raise ValueError(f"all mode sizes must be >= 1, got {dims}")
    return dims


def check_ranks(ranks, d: int | None = None) -> tuple[int, ...]:
    ranks = tuple(int(r) for r in ranks)
    if d is not None and len(ranks) != d:
        raise ValueError(f"expected {d} ring ranks, got {len(ranks)}")
    if any(r < 1 for r in ranks):
        raise ValueError(f"all ring ranks must be >= 1, got {ranks}")
    return ranks


def prod(values) -> int:
    return math.prod(int(v) for v in values)
