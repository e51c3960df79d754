"""Dense tensor index arithmetic: permutation and cyclic-shift matricization.

A dense tensor is a plain :class:`numpy.ndarray` of ``float64`` with
``ndim >= 1``.  All linearization in this package is first-index-fastest
(column-major), so flattening a tensor and reading a tensor from a flat
buffer both use ``order='F'`` semantics.

The central operation is the shifted matricization: ``unfold(t, i, l)``
cyclically rotates the modes so that mode ``i`` comes first, flattens the
first ``l`` rotated modes into matrix rows and the remaining ``d - l``
modes into columns.  ``fold`` is its exact inverse.  Entry ``(p, q)`` of
the unfolding holds tensor entry ``(j_1, ..., j_d)`` with

    p = 1 + sum_{k=i}^{i+l-1} (j_k - 1) * prod_{m=i}^{k-1} n_m
    q = 1 + sum_{k=i+l}^{i-1} (j_k - 1) * prod_{m=i+l}^{k-1} n_m

where mode subscripts wrap cyclically modulo ``d`` and the empty product
is 1.  The implementation realizes this as a cyclic permute followed by a
contiguous column-major reshape; the per-entry formulas above serve as
the independent oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import (
    check_dense_tensor,
    check_mode,
    check_same_dims,
    check_unfold_length,
)

__all__ = [
    "MatricizationPlan",
    "matricization_plan",
    "permute",
    "unfold",
    "fold",
    "inner_product",
    "frobenius_norm",
]


@dataclass(frozen=True)
class MatricizationPlan:
    """Shape bookkeeping for the ``{i, l}`` matricization of a tensor.

    Attributes
    ----------
    dims : tuple of int
        Mode sizes ``(n_1, ..., n_d)`` of the tensor being unfolded.
    i : int
        Shift start, 1-based: the mode that becomes the first row mode.
    l : int
        Number of row modes, ``1 <= l <= d - 1``.
    row_modes, col_modes : tuple of int
        The cyclic windows of 1-based mode indices mapped to matrix rows
        and columns respectively.
    rows, cols : int
        Resulting matrix shape; ``rows * cols == prod(dims)``.
    """

    dims: tuple[int, ...]
    i: int
    l: int
    row_modes: tuple[int, ...] = field(init=False)
    col_modes: tuple[int, ...] = field(init=False)
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __post_init__(self):
        d = len(self.dims)
        check_mode(self.i, d)
        check_unfold_length(self.l, d)
        rot = [((self.i - 1 + k) % d) + 1 for k in range(d)]
        object.__setattr__(self, "row_modes", tuple(rot[: self.l]))
        object.__setattr__(self, "col_modes", tuple(rot[self.l :]))
        object.__setattr__(
            self, "rows", math.prod(self.dims[m - 1] for m in self.row_modes)
        )
        object.__setattr__(
            self, "cols", math.prod(self.dims[m - 1] for m in self.col_modes)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def permutation(self) -> list[int]:
        """0-based axis order implementing the cyclic shift."""
        d = len(self.dims)
        return [(self.i - 1 + k) % d for k in range(d)]


def matricization_plan(dims, i: int, l: int) -> MatricizationPlan:
    """Validate ``(dims, i, l)`` and return the matricization plan."""
    return MatricizationPlan(tuple(int(n) for n in dims), int(i), int(l))


def permute(t: np.ndarray, order) -> np.ndarray:
    """Reorder tensor modes.

    ``order`` is a 1-based permutation of ``1..d``; entry
    ``(j_{order(1)}, ..., j_{order(d)})`` of the result equals entry
    ``(j_1, ..., j_d)`` of the input.

    Raises
    ------
    ValueError
        If ``order`` is not a permutation of ``1..d``.
    """
    t = check_dense_tensor(t)
    order = [int(o) for o in order]
    if sorted(order) != list(range(1, t.ndim + 1)):
        raise ValueError(f"order {order} is not a permutation of 1..{t.ndim}")
    return np.ascontiguousarray(np.transpose(t, axes=[o - 1 for o in order]))


def unfold(t: np.ndarray, i: int, l: int) -> np.ndarray:
    """Matricize ``t`` by the ``{i, l}`` cyclic shift.

    Returns the ``rows x cols`` matrix of :func:`matricization_plan`.
    """
    t = check_dense_tensor(t)
    plan = matricization_plan(t.shape, i, l)
    rotated = np.transpose(t, plan.permutation())
    return rotated.reshape(plan.shape, order="F")


def fold(m: np.ndarray, i: int, l: int, dims) -> np.ndarray:
    """Invert :func:`unfold`: rebuild the tensor of shape ``dims``.

    Raises
    ------
    ValueError
        If the matrix shape does not match the matricization plan.
    """
    m = np.asarray(m, dtype=np.float64)
    dims = tuple(int(n) for n in dims)
    plan = matricization_plan(dims, i, l)
    if m.shape != plan.shape:
        raise ValueError(
            f"matrix shape {m.shape} does not match {{i={i}, l={l}}} plan {plan.shape}"
        )
    perm = plan.permutation()
    rotated_dims = tuple(dims[a] for a in perm)
    rotated = m.reshape(rotated_dims, order="F")
    return np.ascontiguousarray(np.transpose(rotated, np.argsort(perm)))


def inner_product(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of elementwise products of two tensors with equal dims."""
    a = check_dense_tensor(a, "a")
    b = check_dense_tensor(b, "b")
    check_same_dims(a, b)
    return float(np.dot(a.reshape(-1), b.reshape(-1)))


def frobenius_norm(t: np.ndarray) -> float:
    """Frobenius norm, ``sqrt(inner_product(t, t))``."""
    t = check_dense_tensor(t)
    return float(np.linalg.norm(t.reshape(-1)))
