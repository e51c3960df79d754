"""Seeded experiment drivers: recovery curves and phase-transition grids.

Every trial derives its tensor and mask seeds deterministically from the
report's base seed and grid coordinates, so reports are reproducible
entry-for-entry regardless of worker scheduling.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import time
from dataclasses import dataclass, field

from ._validation import check_dims, check_ranks, prod
from .analysis import df_square_unfolding, df_tensor_ring
from .metrics import relative_error
from .ring import random_tr, tr_synthesize
from .sampling import uniform_mask
from .solver import SolverConfig, trbu_complete

__all__ = [
    "ExperimentReport",
    "run_recovery_curve",
    "run_phase_grid",
    "curve_success_rates",
    "CURVE_SUCCESS_THRESHOLD",
    "GRID_SUCCESS_THRESHOLD",
]

CURVE_SUCCESS_THRESHOLD = 1e-6
GRID_SUCCESS_THRESHOLD = 1e-4

_MIX_MULT = 6364136223846793005
_MIX_MASK = (1 << 63) - 1


def _mix_seed(*parts: int) -> int:
    """Deterministic seed derivation from integer coordinates."""
    h = 0x9E3779B97F4A7C15
    for part in parts:
        h = (h ^ (int(part) & _MIX_MASK)) * _MIX_MULT & _MIX_MASK
        h ^= h >> 31
    return h


@dataclass
class ExperimentReport:
    """Tabular experiment record with CSV emission.

    ``rows`` hold plain Python scalars so emission is deterministic:
    re-writing the same report yields byte-identical CSV.
    """

    kind: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self, target) -> None:
        if hasattr(target, "write"):
            self._write(target)
        else:
            with open(target, "w", newline="") as fh:
                self._write(fh)

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self._write(buf)
        return buf.getvalue()

    def _write(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def _completion_trial(args):
    dims, ranks, m, tensor_seed, mask_seed, config = args
    truth = tr_synthesize(random_tr(dims, ranks, tensor_seed))
    mask = uniform_mask(dims, m, mask_seed)
    start = time.perf_counter()
    estimate, trace = trbu_complete(truth, mask, config)
    seconds = time.perf_counter() - start
    return relative_error(estimate, truth), trace.n_iterations, seconds


_worker_thread_limiter = None


def _init_worker():
    # one BLAS thread per worker process; the workers provide the
    # parallelism and oversubscription would slow everyone down
    global _worker_thread_limiter
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return
    _worker_thread_limiter = threadpool_limits(limits=1)


def _run_trials(specs, jobs: int):
    if jobs <= 1 or len(specs) <= 1:
        return [_completion_trial(s) for s in specs]
    with concurrent.futures.ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker
    ) as pool:
        return list(pool.map(_completion_trial, specs, chunksize=1))


def run_recovery_curve(
    dims,
    ranks,
    sr_list,
    trials: int,
    config: SolverConfig | None = None,
    l_values=None,
    base_seed: int = 0,
    success_threshold: float = CURVE_SUCCESS_THRESHOLD,
    jobs: int = 1,
) -> ExperimentReport:
    """Success-vs-sampling-rate curves, one per matricization length.

    For each sampling rate and each ``l`` a fresh ring tensor and mask
    are drawn per trial; the same (rate, trial) pair reuses one tensor
    and mask across all ``l`` so the comparison between lengths is
    paired.  Rows are ``(l, sr, trial, seed, re, success, iters, seconds)``.
    """
    dims = check_dims(dims)
    ranks = check_ranks(ranks, len(dims))
    if config is None:
        config = SolverConfig()
    d = len(dims)
    if l_values is None:
        l_values = list(range(1, math.ceil(d / 2) + 1))
    l_values = [int(l) for l in l_values]
    sr_list = [float(s) for s in sr_list]
    size = prod(dims)

    jobs_specs = []
    keys = []
    for l in l_values:
        cfg_l = SolverConfig(
            l=l,
            weights=config.weights,
            mu0=config.mu0,
            beta=config.beta,
            tol_rc=config.tol_rc,
            max_iters=config.max_iters,
            svt_backend=config.svt_backend,
        )
        for si, sr in enumerate(sr_list):
            m = min(size, math.ceil(sr * size))
            for trial in range(trials):
                tensor_seed = _mix_seed(base_seed, si, trial, 0)
                mask_seed = _mix_seed(base_seed, si, trial, 1)
                jobs_specs.append((dims, ranks, m, tensor_seed, mask_seed, cfg_l))
                keys.append((l, sr, trial, tensor_seed))

    results = _run_trials(jobs_specs, jobs)
    rows = []
    for (l, sr, trial, seed), (re, iters, seconds) in zip(keys, results):
        rows.append((l, sr, trial, seed, re, re < success_threshold, iters, seconds))
    return ExperimentReport(
        kind="curve",
        columns=("l", "sr", "trial", "seed", "re", "success", "iters", "seconds"),
        rows=rows,
        metadata={
            "dims": dims,
            "ranks": ranks,
            "trials": trials,
            "base_seed": base_seed,
            "success_threshold": success_threshold,
        },
    )


def curve_success_rates(report: ExperimentReport) -> dict:
    """Aggregate a curve report into ``{(l, sr): success_rate}``."""
    counts: dict = {}
    hits: dict = {}
    for row in report.rows:
        key = (row[0], row[1])
        counts[key] = counts.get(key, 0) + 1
        hits[key] = hits.get(key, 0) + (1 if row[5] else 0)
    return {key: hits[key] / counts[key] for key in counts}


def run_phase_grid(
    n: int,
    d: int,
    r_list,
    sr_list,
    trials: int,
    config: SolverConfig | None = None,
    base_seed: int = 0,
    success_threshold: float = GRID_SUCCESS_THRESHOLD,
    jobs: int = 1,
) -> ExperimentReport:
    """Empirical recovery-rate grid over (ring rank, sampling rate).

    Rows are ``(r, sr, rate, df_m_ratio, df_tr_ratio)`` where the ratios
    divide the two degree-of-freedom counts by the sample count.
    """
    n, d = int(n), int(d)
    r_list = [int(r) for r in r_list]
    sr_list = [float(s) for s in sr_list]
    if any(not 2 <= r <= n - 1 for r in r_list):
        raise ValueError(f"ring ranks must lie in 2..{n - 1}, got {r_list}")
    if config is None:
        config = SolverConfig()
    dims = (n,) * d
    size = n**d

    specs = []
    keys = []
    for ri, r in enumerate(r_list):
        ranks = (r,) * d
        for si, sr in enumerate(sr_list):
            m = min(size, math.ceil(sr * size))
            for trial in range(trials):
                tensor_seed = _mix_seed(base_seed, ri, si, trial, 0)
                mask_seed = _mix_seed(base_seed, ri, si, trial, 1)
                specs.append((dims, ranks, m, tensor_seed, mask_seed, config))
                keys.append((r, sr, m))

    results = _run_trials(specs, jobs)
    successes: dict = {}
    for (r, sr, m), (re, _iters, _seconds) in zip(keys, results):
        successes.setdefault((r, sr, m), []).append(re < success_threshold)

    rows = []
    for r in r_list:
        for sr in sr_list:
            m = min(size, math.ceil(sr * size))
            flags = successes[(r, sr, m)]
            rate = sum(flags) / len(flags)
            rows.append(
                (
                    r,
                    sr,
                    rate,
                    float(df_square_unfolding(n, d, r)) / m,
                    float(df_tensor_ring(n, d, r)) / m,
                )
            )
    return ExperimentReport(
        kind="grid",
        columns=("r", "sr", "rate", "df_m_ratio", "df_tr_ratio"),
        rows=rows,
        metadata={
            "n": n,
            "d": d,
            "trials": trials,
            "base_seed": base_seed,
            "success_threshold": success_threshold,
        },
    )
