"""Theory-checking instruments.

Degree-of-freedom counts for the two relevant models, the tangent space
of a fixed-rank matrix manifold at a given unfolding, and the sampling
concentration gap used to certify that an observation pattern is
informative on that tangent space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampling import ObservationMask

__all__ = [
    "ResourceLimitError",
    "df_square_unfolding",
    "df_tensor_ring",
    "TangentSpace",
    "tangent_projection",
    "tangent_complement",
    "condition1_gap",
]

# Largest rows*cols * basis-size product materialized by the exact path.
_EXACT_MATERIALIZE_LIMIT = 50_000_000


class ResourceLimitError(RuntimeError):
    """Exact operator materialization would exceed the memory budget."""


def df_square_unfolding(n: int, d: int, r: int):
    """Degrees of freedom of a rank-``r^2`` square unfolding of an
    ``n^d`` cube: ``r^2 * (2 * sqrt(n^d) - r^2)``.

    Exact (integer) for even ``d``; may be negative, which callers read
    as an infeasible configuration.
    """
    n, d, r = int(n), int(d), int(r)
    if n < 1 or d < 1 or r < 1:
        raise ValueError("n, d, r must all be positive")
    if d % 2 == 0:
        root = n ** (d // 2)
        return r * r * (2 * root - r * r)
    return r * r * (2.0 * float(n) ** (d / 2.0) - r * r)


def df_tensor_ring(n: int, d: int, r: int) -> int:
    """Degrees of freedom of the ring manifold: ``d*n*r^2 - d*r^2 + 1``."""
    n, d, r = int(n), int(d), int(r)
    if n < 1 or d < 1 or r < 1:
        raise ValueError("n, d, r must all be positive")
    return d * n * r * r - d * r * r + 1


@dataclass(frozen=True)
class TangentSpace:
    """Tangent space of the fixed-rank manifold at a matrix.

    Spanned by ``{U A^T + B V^T}`` for orthonormal column bases ``U``
    (rows x rank) and ``V`` (cols x rank).
    """

    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=np.float64)
        V = np.asarray(self.V, dtype=np.float64)
        if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[1]:
            raise ValueError("U and V must be 2-D with equal column counts")
        for name, B in (("U", U), ("V", V)):
            gram = B.T @ B
            if not np.allclose(gram, np.eye(B.shape[1]), atol=1e-10):
                raise ValueError(f"{name} columns are not orthonormal to 1e-10")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)

    @property
    def rank(self) -> int:
        return self.U.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.U.shape[0], self.V.shape[0])

    @property
    def dim(self) -> int:
        """Dimension of the tangent space: ``r * (rows + cols - r)``."""
        rows, cols = self.shape
        return self.rank * (rows + cols - self.rank)

    @classmethod
    def from_matrix(cls, m: np.ndarray, rank: int | None = None, tol: float = 1e-8):
        """Singular subspaces of ``m``; rank from ``tol * sigma_max`` if unset."""
        m = np.asarray(m, dtype=np.float64)
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        if rank is None:
            rank = int(np.count_nonzero(s > tol * s[0])) if s.size and s[0] > 0 else 0
        if rank < 1:
            raise ValueError("matrix has numerical rank 0; no tangent space")
        return cls(U=u[:, :rank], V=vt[:rank, :].T)


def tangent_projection(ts: TangentSpace, m: np.ndarray) -> np.ndarray:
    """Orthogonal projection of ``m`` onto the tangent space:
    ``P_U m + m P_V - P_U m P_V``."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape != ts.shape:
        raise ValueError(f"matrix shape {m.shape} does not match space {ts.shape}")
    um = ts.U @ (ts.U.T @ m)
    mv = (m @ ts.V) @ ts.V.T
    umv = ts.U @ ((ts.U.T @ m) @ ts.V) @ ts.V.T
    return um + mv - umv


def tangent_complement(ts: TangentSpace, m: np.ndarray) -> np.ndarray:
    """Projection onto the orthogonal complement: ``(I - P_U) m (I - P_V)``."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape != ts.shape:
        raise ValueError(f"matrix shape {m.shape} does not match space {ts.shape}")
    left = m - ts.U @ (ts.U.T @ m)
    return left - (left @ ts.V) @ ts.V.T


def _orthonormal_complement(B: np.ndarray) -> np.ndarray:
    n, k = B.shape
    u, _, _ = np.linalg.svd(B, full_matrices=True)
    return u[:, k:]


def _tangent_basis_matrix(ts: TangentSpace) -> np.ndarray:
    """Columns are column-major vectorizations of an orthonormal basis of
    the tangent space; shape (rows*cols, r*(rows+cols-r))."""
    U, V = ts.U, ts.V
    Uc = _orthonormal_complement(U)
    Vc = _orthonormal_complement(V)
    # vec(u v^T) = kron(v, u) under column-major vectorization.
    blocks = [np.kron(V, U)]
    if Vc.shape[1]:
        blocks.append(np.kron(Vc, U))
    if Uc.shape[1]:
        blocks.append(np.kron(V, Uc))
    return np.concatenate(blocks, axis=1)


def condition1_gap(
    ts: TangentSpace,
    mask: ObservationMask,
    p: float,
    method: str = "exact",
    power_iters: int = 400,
    seed: int = 0,
) -> float:
    """Spectral norm of ``P_T P_Omega P_T - p P_T`` on the unfolding grid.

    ``mask`` lives on the 2-D grid of the unfolding (``mask.dims`` equals
    the tangent space shape).  A small value relative to ``p / 2``
    certifies that sampling is well spread over the tangent space.

    ``method="exact"`` materializes the operator on an orthonormal basis
    of the tangent space (dimension ``r * (rows + cols - r)``) and is
    exact; it raises :class:`ResourceLimitError` beyond a size budget,
    where ``method="power"`` (power iteration on the matrix space)
    should be used instead.
    """
    rows, cols = ts.shape
    if mask.dims != (rows, cols):
        raise ValueError(f"mask dims {mask.dims} do not match unfolding {ts.shape}")
    p = float(p)
    dense = mask.dense()

    if method == "exact":
        if rows * cols * ts.dim > _EXACT_MATERIALIZE_LIMIT:
            raise ResourceLimitError(
                f"tangent basis of dim {ts.dim} on a {rows}x{cols} grid exceeds the "
                "exact materialization budget; use method='power'"
            )
        basis = _tangent_basis_matrix(ts)
        weight = dense.reshape(-1, order="F").astype(np.float64)
        op = (basis * weight[:, None]).T @ basis
        op -= p * np.eye(basis.shape[1])
        eigs = np.linalg.eigvalsh(op)
        return float(np.max(np.abs(eigs)))

    if method == "power":
        rng = np.random.default_rng(seed)
        z = tangent_projection(ts, rng.standard_normal((rows, cols)))
        norm = float(np.linalg.norm(z))
        if norm == 0.0:
            return 0.0
        z /= norm
        lam = 0.0
        for _ in range(int(power_iters)):
            # re-project every step: rounding residue outside the tangent
            # space would otherwise grow at rate p and hijack the iteration
            w = tangent_projection(ts, dense * z - p * z)
            nw = float(np.linalg.norm(w))
            if nw == 0.0:
                return 0.0
            z_new = w / nw
            lam_new = nw  # growth factor of the symmetric operator
            if abs(lam_new - lam) <= 1e-12 * max(1.0, lam_new):
                lam = lam_new
                break
            lam, z = lam_new, z_new
        return float(lam)

    raise ValueError(f"unknown method {method!r}; expected 'exact' or 'power'")
