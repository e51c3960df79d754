"""Visual data tensorization: block-structured reshape of images to
high-order tensors and back.

The forward map factors the image height into ``(m_1, ..., m_K)`` and the
width into ``(n_1, ..., n_K)`` (first factor fastest, matching the
package linearization), interleaves the factor axes as
``(m_1, n_1, ..., m_K, n_K, trailing...)`` and merges each ``(m_k, n_k)``
pair into one mode of size ``m_k * n_k``.  Mode 1 of the result indexes
position inside the finest ``m_1 x n_1`` pixel block, so spatially local
pixels land in a single slice of the leading mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_dense_tensor, prod

__all__ = ["VdtPlan", "vdt_forward", "vdt_inverse"]


@dataclass(frozen=True)
class VdtPlan:
    """Factorization plan for one image (or video) geometry.

    ``row_factors`` multiply to the image height, ``col_factors`` to the
    width; ``trailing_dims`` carry channels (and frames for video).
    """

    row_factors: tuple[int, ...]
    col_factors: tuple[int, ...]
    trailing_dims: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(v) for v in self.row_factors)
        cols = tuple(int(v) for v in self.col_factors)
        trail = tuple(int(v) for v in self.trailing_dims)
        if len(rows) != len(cols):
            raise ValueError(
                f"row/col factor counts differ: {len(rows)} vs {len(cols)}"
            )
        if len(rows) < 1:
            raise ValueError("need at least one factor pair")
        if any(v < 1 for v in rows + cols + trail):
            raise ValueError("all plan factors must be >= 1")
        object.__setattr__(self, "row_factors", rows)
        object.__setattr__(self, "col_factors", cols)
        object.__setattr__(self, "trailing_dims", trail)

    @property
    def depth(self) -> int:
        return len(self.row_factors)

    @property
    def image_shape(self) -> tuple[int, ...]:
        return (prod(self.row_factors), prod(self.col_factors), *self.trailing_dims)

    @property
    def tensor_dims(self) -> tuple[int, ...]:
        pairs = tuple(m * n for m, n in zip(self.row_factors, self.col_factors))
        return (*pairs, *self.trailing_dims)


def _interleave_perm(plan: VdtPlan) -> list[int]:
    K = plan.depth
    perm = []
    for k in range(K):
        perm.extend([k, K + k])
    perm.extend(range(2 * K, 2 * K + len(plan.trailing_dims)))
    return perm


def vdt_forward(img: np.ndarray, plan: VdtPlan) -> np.ndarray:
    """Reshape an image of ``plan.image_shape`` into the block tensor."""
    img = check_dense_tensor(img, "image")
    if img.shape != plan.image_shape:
        raise ValueError(
            f"image shape {img.shape} does not match plan geometry {plan.image_shape}"
        )
    split = img.reshape(
        (*plan.row_factors, *plan.col_factors, *plan.trailing_dims), order="F"
    )
    inter = np.transpose(split, _interleave_perm(plan))
    return inter.reshape(plan.tensor_dims, order="F")


def vdt_inverse(t: np.ndarray, plan: VdtPlan) -> np.ndarray:
    """Invert :func:`vdt_forward`; bit-exact round trip."""
    t = check_dense_tensor(t, "tensor")
    if t.shape != plan.tensor_dims:
        raise ValueError(
            f"tensor dims {t.shape} do not match plan dims {plan.tensor_dims}"
        )
    perm = _interleave_perm(plan)
    inter_dims = []
    for k in range(plan.depth):
        inter_dims.extend([plan.row_factors[k], plan.col_factors[k]])
    inter_dims.extend(plan.trailing_dims)
    inter = t.reshape(inter_dims, order="F")
    split = np.transpose(inter, np.argsort(perm))
    return np.ascontiguousarray(split.reshape(plan.image_shape, order="F"))
