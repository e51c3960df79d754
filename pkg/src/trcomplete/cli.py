"""Command-line interface.

Subcommands: ``synth``, ``complete``, ``curve``, ``phase``,
``incoherence``, ``certify``, ``vdt``.  Exit codes: 0 success, 2 invalid
input, 3 numerical failure.  Every subcommand is deterministic for a
given ``--seed``.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileio
from .analysis import ResourceLimitError, TangentSpace, condition1_gap
from .experiments import run_phase_grid, run_recovery_curve
from .metrics import relative_error
from .presets import CURVE_PRESETS, PHASE_PRESETS, VDT_PRESETS
from .ring import classify_state, incoherence_profile, random_tr, tr_synthesize
from .sampling import bernoulli_mask, uniform_mask
from .solver import SolverConfig, trbu_complete
from .vdt import VdtPlan, vdt_forward, vdt_inverse

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trcomplete",
        description="Tensor ring completion via nuclear norm minimization "
        "over balanced unfoldings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a random ring tensor")
    p.add_argument("--dims", type=_int_list, required=True, help="mode sizes, e.g. 4,4,4")
    p.add_argument("--rank", type=_int_list, required=True, help="ring ranks, e.g. 2,2,2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output tensor file (DT1)")
    p.add_argument("--factors-out", help="optional output factors file")

    p = sub.add_parser("complete", help="complete a partially observed tensor")
    p.add_argument("--input", required=True, help="input tensor file (DT1)")
    p.add_argument("--mask", help="mask file (MK1) or PGM image of observed pixels")
    p.add_argument("--sr", type=float, help="sample the input at this rate instead "
                   "of reading a mask; the input is treated as ground truth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output tensor file (DT1)")
    p.add_argument("--trace", help="optional per-iteration CSV")
    p.add_argument("--config", help="solver config file (key = value)")
    p.add_argument("--l", type=int, help="matricization length override")

    p = sub.add_parser("curve", help="success-vs-sampling-rate curves")
    p.add_argument("--preset", choices=sorted(CURVE_PRESETS))
    p.add_argument("--dims", type=_int_list)
    p.add_argument("--rank", type=_int_list)
    p.add_argument("--trials", type=int)
    p.add_argument("--long", action="store_true", help="use the preset's long trial count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", help="solver config file")
    p.add_argument("--out", required=True, help="output CSV")

    p = sub.add_parser("phase", help="recovery-rate grid over (rank, sampling rate)")
    p.add_argument("--preset", choices=sorted(PHASE_PRESETS))
    p.add_argument("--dims", type=_int_list, help="cube dims, e.g. 20,20,20,20")
    p.add_argument("--rank", type=_int_list, help="ring rank values of the grid")
    p.add_argument("--trials", type=int)
    p.add_argument("--long", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", help="solver config file")
    p.add_argument("--out", required=True, help="output CSV")

    p = sub.add_parser("incoherence", help="measure factor incoherence")
    p.add_argument("--input", required=True, help="factors file")

    p = sub.add_parser("certify", help="sampling concentration check on a small grid")
    p.add_argument("--dims", type=_int_list, required=True, help="grid, e.g. 8,8")
    p.add_argument("--rank", type=_int_list, default=(1,), help="matrix rank")
    p.add_argument("--sr", type=float, required=True, help="Bernoulli rate p")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("vdt", help="convert PPM <-> DT1 under a block plan")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=sorted(VDT_PRESETS))
    p.add_argument("--row-factors", type=_int_list)
    p.add_argument("--col-factors", type=_int_list)

    return parser


def _load_config(args) -> SolverConfig:
    cfg = fileio.read_solver_config(args.config) if args.config else SolverConfig()
    if getattr(args, "l", None) is not None:
        cfg = SolverConfig(
            l=args.l,
            weights=cfg.weights,
            mu0=cfg.mu0,
            beta=cfg.beta,
            tol_rc=cfg.tol_rc,
            max_iters=cfg.max_iters,
            svt_backend=cfg.svt_backend,
        )
    return cfg


def _cmd_synth(args) -> int:
    factors = random_tr(args.dims, args.rank, args.seed)
    fileio.write_tensor(args.out, tr_synthesize(factors))
    if args.factors_out:
        fileio.write_factors(args.factors_out, factors)
    print(f"wrote tensor {args.out} dims={tuple(args.dims)} ranks={tuple(args.rank)}")
    return EXIT_OK


def _cmd_complete(args) -> int:
    if (args.mask is None) == (args.sr is None):
        print("complete: exactly one of --mask and --sr is required", file=sys.stderr)
        return EXIT_INVALID
    tensor = fileio.read_tensor(args.input)
    cfg = _load_config(args)
    if args.sr is not None:
        size = tensor.size
        m = min(size, int(np.ceil(args.sr * size)))
        mask = uniform_mask(tensor.shape, m, args.seed)
        truth = tensor
    else:
        mask = _read_any_mask(args.mask, tensor.shape)
        truth = None
    completed, trace = trbu_complete(tensor, mask, cfg)
    fileio.write_tensor(args.out, completed)
    if args.trace:
        trace.to_csv(args.trace)
    print(
        f"completed in {trace.n_iterations} iterations "
        f"({trace.termination}), final rc={trace.final_rc:.3e}"
    )
    if truth is not None:
        print(f"re={relative_error(completed, truth):.6e}")
    return EXIT_OK


def _read_any_mask(path, dims):
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        return fileio.read_pgm_mask(path, dims)
    mask = fileio.read_mask(path)
    if mask.dims != tuple(dims):
        raise ValueError(f"mask dims {mask.dims} do not match tensor dims {tuple(dims)}")
    return mask


def _cmd_curve(args) -> int:
    if args.preset:
        preset = CURVE_PRESETS[args.preset]
        dims, ranks = preset["dims"], preset["ranks"]
        sr_list = preset["sr_list"]
        trials = preset["long_trials"] if args.long else preset["trials"]
        cfg = preset["config"]
    else:
        if args.dims is None or args.rank is None:
            print("curve: --preset or both --dims and --rank required", file=sys.stderr)
            return EXIT_INVALID
        dims, ranks = args.dims, args.rank
        sr_list = CURVE_PRESETS["curve-3x8"]["sr_list"]
        trials = 10
        cfg = SolverConfig()
    if args.config:
        cfg = fileio.read_solver_config(args.config)
    if args.trials:
        trials = args.trials
    report = run_recovery_curve(
        dims, ranks, sr_list, trials, config=cfg, base_seed=args.seed, jobs=args.jobs
    )
    report.to_csv(args.out)
    print(f"wrote {args.out}: {len(report.rows)} rows")
    return EXIT_OK


def _cmd_phase(args) -> int:
    if args.preset:
        preset = PHASE_PRESETS[args.preset]
        n, d = preset["n"], preset["d"]
        r_list, sr_list = preset["r_list"], preset["sr_list"]
        trials = preset["long_trials"] if args.long else preset["trials"]
        cfg = preset["config"]
    else:
        if args.dims is None or args.rank is None:
            print("phase: --preset or both --dims and --rank required", file=sys.stderr)
            return EXIT_INVALID
        dims = args.dims
        if len(set(dims)) != 1:
            print("phase: --dims must describe a cube", file=sys.stderr)
            return EXIT_INVALID
        n, d = dims[0], len(dims)
        r_list = args.rank
        sr_list = PHASE_PRESETS["phase-20x4"]["sr_list"]
        trials = 10
        cfg = SolverConfig(mu0=1e-2)
    if args.config:
        cfg = fileio.read_solver_config(args.config)
    if args.trials:
        trials = args.trials
    report = run_phase_grid(
        n, d, r_list, sr_list, trials, config=cfg, base_seed=args.seed, jobs=args.jobs
    )
    report.to_csv(args.out)
    print(f"wrote {args.out}: {len(report.rows)} cells")
    return EXIT_OK


def _cmd_incoherence(args) -> int:
    factors = fileio.read_factors(args.input)
    profile = incoherence_profile(factors)
    state = classify_state(factors.dims, factors.ranks)
    print(f"order={factors.order} dims={factors.dims} ranks={factors.ranks} state={state}")
    for k, (mu, bb) in enumerate(zip(profile.mu, profile.bound_base), start=1):
        print(f"mode {k}: mu={mu:.6f} bound_base={bb:.6f}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    dims = args.dims
    if len(dims) != 2:
        print("certify: --dims must name a 2-D grid", file=sys.stderr)
        return EXIT_INVALID
    rank = args.rank[0] if args.rank else 1
    p = args.sr
    rows, cols = dims
    passes = 0
    gaps = []
    for trial in range(args.trials):
        rng = np.random.default_rng((args.seed, trial))
        u = np.linalg.qr(rng.standard_normal((rows, rank)))[0]
        v = np.linalg.qr(rng.standard_normal((cols, rank)))[0]
        ts = TangentSpace(U=u, V=v)
        mask = bernoulli_mask(dims, p, (args.seed, trial, 1))
        gap = condition1_gap(ts, mask, p)
        gaps.append(gap)
        if gap <= p / 2:
            passes += 1
    gaps = np.array(gaps)
    print(
        f"gap <= p/2 in {passes}/{args.trials} trials "
        f"(p={p}, median gap={np.median(gaps):.4f}, max gap={gaps.max():.4f})"
    )
    return EXIT_OK


def _cmd_vdt(args) -> int:
    if args.preset:
        plan = VDT_PRESETS[args.preset]
    elif args.row_factors and args.col_factors:
        plan = VdtPlan(args.row_factors, args.col_factors, (3,))
    else:
        print("vdt: --preset or both --row-factors and --col-factors required",
              file=sys.stderr)
        return EXIT_INVALID
    with open(args.input, "rb") as fh:
        magic = fh.read(4)
    if magic[:2] == b"P6":
        img = fileio.read_ppm(args.input)
        fileio.write_tensor(args.out, vdt_forward(img, plan))
        print(f"wrote tensor {args.out} dims={plan.tensor_dims}")
    elif magic == b"DT1\n":
        t = fileio.read_tensor(args.input)
        fileio.write_ppm(args.out, vdt_inverse(t, plan))
        print(f"wrote image {args.out} shape={plan.image_shape}")
    else:
        raise fileio.FormatError(args.input, 0, "expected a PPM (P6) or DT1 file")
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "complete": _cmd_complete,
    "curve": _cmd_curve,
    "phase": _cmd_phase,
    "incoherence": _cmd_incoherence,
    "certify": _cmd_certify,
    "vdt": _cmd_vdt,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except np.linalg.LinAlgError as exc:
        # LinAlgError subclasses ValueError; match it before invalid-input
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (fileio.FormatError, ValueError, OSError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
