"""Tensor ring factors: synthesis, contraction, generation and measurement.

A tensor ring represents ``x[j_1, ..., j_d]`` as the trace of a cyclic
product of mode-2 slices of ``d`` third-order cores, core ``i`` having
shape ``(r_i, n_i, r_{i+1})`` with ``r_{d+1} = r_1``.  Mode-2 fibers of
the cores act as the ring analogue of singular vectors, which is what the
incoherence measurement below quantifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_dims, check_ranks, prod
from .tensor_ops import unfold

__all__ = [
    "TRFactors",
    "IncoherenceProfile",
    "random_tr",
    "tr_synthesize",
    "tr_contract",
    "classify_state",
    "incoherence_profile",
    "unfolding_rank",
]


@dataclass(frozen=True)
class TRFactors:
    """An ordered list of ring cores with cyclically consistent bond ranks.

    Attributes
    ----------
    cores : tuple of ndarray
        Core ``i`` has shape ``(r_i, n_i, r_{i+1 mod d})``.
    """

    cores: tuple[np.ndarray, ...]

    def __post_init__(self):
        cores = tuple(np.asarray(c, dtype=np.float64) for c in self.cores)
        if len(cores) < 1:
            raise ValueError("need at least one core")
        for k, c in enumerate(cores):
            if c.ndim != 3:
                raise ValueError(f"core {k + 1} is not third-order: shape {c.shape}")
            if min(c.shape) < 1:
                raise ValueError(f"core {k + 1} has an empty mode: shape {c.shape}")
        for k, c in enumerate(cores):
            nxt = cores[(k + 1) % len(cores)]
            if c.shape[2] != nxt.shape[0]:
                raise ValueError(
                    f"bond rank mismatch between cores {k + 1} and "
                    f"{(k % len(cores)) + 2}: {c.shape[2]} vs {nxt.shape[0]}"
                )
        object.__setattr__(self, "cores", cores)

    @property
    def order(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.shape[1] for c in self.cores)

    @property
    def ranks(self) -> tuple[int, ...]:
        """Bond ranks ``(r_1, ..., r_d)``; cyclic, so ``r_{d+1} = r_1``."""
        return tuple(c.shape[0] for c in self.cores)


@dataclass(frozen=True)
class IncoherenceProfile:
    """Per-mode measured incoherence of a set of ring factors.

    ``mu[i]`` is the worst-case normalized deviation of mode-2 slice inner
    products from their ideal values; ``bound_base[i]`` is
    ``n_i * max(core_i)^2``, the measured spikiness scale.
    """

    mu: np.ndarray
    bound_base: np.ndarray


def random_tr(dims, ranks, seed) -> TRFactors:
    """Draw ring factors with i.i.d. Gaussian core entries.

    Entries of core ``i`` have mean 0 and standard deviation
    ``n_i ** -0.5``, so a mode-2 slice has expected squared norm
    ``r_i * r_{i+1} / n_i``.  Deterministic for a given ``seed``.
    """
    dims = check_dims(dims)
    ranks = check_ranks(ranks, len(dims))
    rng = np.random.default_rng(seed)
    d = len(dims)
    cores = tuple(
        rng.standard_normal((ranks[k], dims[k], ranks[(k + 1) % d])) * dims[k] ** -0.5
        for k in range(d)
    )
    return TRFactors(cores)


def tr_synthesize(f: TRFactors) -> np.ndarray:
    """Contract the full ring into the dense tensor it represents.

    ``out[j_1, ..., j_d] = trace(G1[:, j_1, :] @ ... @ Gd[:, j_d, :])``.
    """
    full = f.cores[0]
    for core in f.cores[1:]:
        full = np.tensordot(full, core, axes=([full.ndim - 1], [0]))
    return np.ascontiguousarray(np.trace(full, axis1=0, axis2=full.ndim - 1))


def _window(d: int, a: int, b: int) -> list[int]:
    if not (1 <= a <= d and 1 <= b <= d):
        raise ValueError(f"window modes ({a}, {b}) outside 1..{d}")
    return [(a - 1 + k) % d for k in range(((b - a) % d) + 1)]


def tr_contract(f: TRFactors, a: int, b: int) -> np.ndarray:
    """Merge the cyclic window of cores ``a..b`` into one third-order core.

    The result has shape ``(r_a, prod(n_k), r_{b+1})``; its middle index
    enumerates the window's multi-index first-mode-fastest, so the
    ``(t_a, t_{b+1})`` mode-2 fiber of a two-core contraction equals the
    column-major vectorization of ``G_a[t_a, :, :] @ G_b[:, :, t_{b+1}]``.
    """
    idx = _window(f.order, int(a), int(b))
    out = f.cores[idx[0]]
    for k in idx[1:]:
        core = f.cores[k]
        ra, mid, _ = out.shape
        _, n, rc = core.shape
        out = np.einsum("aJb,bjc->ajJc", out, core).reshape(ra, n * mid, rc)
    return out


def classify_state(dims, ranks) -> str:
    """Classify a ring configuration by comparing ``r_i * r_{i+1}`` to ``n_i``.

    Returns one of ``"subcritical"``, ``"critical"``, ``"supercritical"``
    or ``"mixed"``.
    """
    dims = check_dims(dims)
    ranks = check_ranks(ranks, len(dims))
    d = len(dims)
    products = [ranks[k] * ranks[(k + 1) % d] for k in range(d)]
    if all(p == n for p, n in zip(products, dims)):
        return "critical"
    if all(p <= n for p, n in zip(products, dims)):
        return "subcritical"
    if all(p >= n for p, n in zip(products, dims)):
        return "supercritical"
    return "mixed"


def incoherence_profile(f: TRFactors) -> IncoherenceProfile:
    """Measure per-mode incoherence of the factor slices.

    For mode ``i`` with slice Gram matrix ``S[j, j'] = <G[:, j, :], G[:, j', :]>``,

        mu_i = n_i / sqrt(r_i * r_{i+1})
               * max_{j, j'} | S[j, j'] - (r_i * r_{i+1} / n_i) * 1[j == j'] |

    and ``bound_base_i = n_i * max |core_i| ** 2``.
    """
    d = f.order
    ranks = f.ranks
    mu = np.empty(d)
    bound_base = np.empty(d)
    for k in range(d):
        core = f.cores[k]
        r_left, n, r_right = core.shape
        rr = r_left * r_right
        slices = core.transpose(1, 0, 2).reshape(n, rr)
        gram = slices @ slices.T
        dev = np.abs(gram - (rr / n) * np.eye(n))
        mu[k] = n / np.sqrt(rr) * float(dev.max())
        bound_base[k] = n * float(np.max(np.abs(core)) ** 2)
    return IncoherenceProfile(mu=mu, bound_base=bound_base)


def unfolding_rank(f: TRFactors, i: int, l: int, tol: float = 1e-8) -> int:
    """Numerical rank of the ``{i, l}`` unfolding of the synthesized tensor.

    Counts singular values above ``tol * sigma_max``.  For generic factors
    this equals ``r_i * r_{i+l}`` whenever that product fits within the
    unfolding's smaller side.
    """
    s = np.linalg.svd(unfold(tr_synthesize(f), i, l), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))
