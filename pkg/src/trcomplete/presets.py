"""Named experiment and tensorization presets.

Each preset bundles the shapes, grids and solver hyperparameters of one
reproducible experiment so it can be launched with a single CLI call.
"""

from __future__ import annotations

from .solver import SolverConfig
from .vdt import VdtPlan

__all__ = ["CURVE_PRESETS", "PHASE_PRESETS", "VDT_PRESETS"]


def _sr_grid(start=0.05, stop=0.95, count=19):
    step = (stop - start) / (count - 1)
    return tuple(round(start + k * step, 10) for k in range(count))


CURVE_PRESETS = {
    # order-8 cube of side 3, ring rank 2; compares every shift length
    "curve-3x8": {
        "dims": (3,) * 8,
        "ranks": (2,) * 8,
        "sr_list": _sr_grid(),
        "trials": 10,
        "long_trials": 100,
        "config": SolverConfig(mu0=10.0**-2.5, beta=1.028),
    },
    # order-6 cube of side 6, ring rank 3
    "curve-6x6": {
        "dims": (6,) * 6,
        "ranks": (3,) * 6,
        "sr_list": _sr_grid(),
        "trials": 10,
        "long_trials": 100,
        "config": SolverConfig(mu0=10.0**-2.5, beta=1.028),
    },
}

PHASE_PRESETS = {
    # full 18 x 19 grid on the 20^4 cube; hours of compute serially
    "phase-20x4": {
        "n": 20,
        "d": 4,
        "r_list": tuple(range(2, 20)),
        "sr_list": _sr_grid(),
        "trials": 10,
        "long_trials": 10,
        "config": SolverConfig(mu0=1e-2, beta=1.028),
    },
    # reduced 6 x 6 grid spanning the same boundary, minutes of compute;
    # faster penalty schedule and looser stop, calibrated so that deep
    # cells classify identically to the full-fidelity settings
    "phase-20x4-small": {
        "n": 20,
        "d": 4,
        "r_list": (2, 4, 8, 12, 15, 18),
        "sr_list": (0.1, 0.26, 0.42, 0.58, 0.74, 0.9),
        "trials": 5,
        "long_trials": 10,
        "config": SolverConfig(
            mu0=10.0**-1.5, beta=1.05, tol_rc=1e-6, max_iters=300
        ),
    },
}

VDT_PRESETS = {
    # 256 x 256 x 3 image -> order-9 tensor of size 4 x ... x 4 x 3
    "ket2-256": VdtPlan((2,) * 8, (2,) * 8, (3,)),
    # 512 x 512 x 3 image -> order-10 tensor of size 4 x ... x 4 x 3
    "ket2-512": VdtPlan((2,) * 9, (2,) * 9, (3,)),
    # 768 x 512 x 3 image -> modes (4 x ... x 4, 6, 3)
    "kodim04": VdtPlan((2,) * 8 + (3,), (2,) * 9, (3,)),
    # 600 x 600 x 3 image -> modes (10, 10, 6, 6, 10, 10, 3)
    "einstein-600": VdtPlan((2, 2, 2, 3, 5, 5), (5, 5, 3, 2, 2, 2), (3,)),
    # 64 x 64 x 3 image -> modes (16, 16, 16, 3)
    "block4-64": VdtPlan((4, 4, 4), (4, 4, 4), (3,)),
}
