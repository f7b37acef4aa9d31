"""Command-line front end.

Subcommands: simulate, estimate, crlb, sweep, compare-pilots. All numeric
CSV output uses 17 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from .channel import Target, sigma_for_snr
from .config import CaConfig, Scheme, load_config, make_table3_config, with_scheme
from .crlb import crlb_sweep
from .estimators import SolverOptions, estimate_any_scheme
from .grids import dump_grid_csv
from .harness import (
    ExperimentSpec,
    _FLOAT_FMT,
    compare_pilots,
    run_sweep,
    snapshot_spectra,
    simulate_trial_matrices,
    write_spectrum_csv,
    write_sweep_csv,
)


def _parse_snr(text: str) -> list[float]:
    """Accept "start:step:stop" (inclusive) or a comma list."""
    if ":" in text:
        start, step, stop = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError("snr step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(n, 0))]
    return [float(t) for t in text.split(",") if t.strip()]


def _load_cfg(args) -> CaConfig:
    cfg = load_config(args.config) if args.config else make_table3_config()
    if getattr(args, "scheme", None):
        scheme = Scheme(args.scheme)
        if scheme is not cfg.scheme:
            cfg = with_scheme(cfg, scheme)
    return cfg


def _solver(args) -> SolverOptions:
    return SolverOptions(
        lambda_scale=args.lambda_scale, max_iters=args.max_iters, tol=args.tol
    )


def _add_common(p: argparse.ArgumentParser, with_target=False, with_solver=False):
    p.add_argument("--config", help="JSON config file (defaults to the built-in 5.9/24 GHz setup)")
    p.add_argument("--scheme", choices=[s.value for s in Scheme], help="pilot scheme override")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--out", required=True, help="output CSV path or prefix")
    if with_target:
        p.add_argument("--range", dest="range_m", type=float, default=117.0, help="target range (m)")
        p.add_argument("--velocity", type=float, default=30.0, help="target velocity (m/s)")
        p.add_argument("--gain", type=float, default=1.0, help="target gain magnitude")
    if with_solver:
        p.add_argument("--lambda-scale", dest="lambda_scale", type=float, default=0.1)
        p.add_argument("--max-iters", dest="max_iters", type=int, default=200)
        p.add_argument("--tol", type=float, default=1e-6)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="casense")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="emit both bands' channel matrices as CSV")
    _add_common(p_sim, with_target=True)
    p_sim.add_argument("--snr", default="10", help="single SNR in dB")

    p_est = sub.add_parser("estimate", help="single-shot estimate plus spectra CSVs")
    _add_common(p_est, with_target=True, with_solver=True)
    p_est.add_argument("--snr", default="10", help="single SNR in dB")

    p_crlb = sub.add_parser("crlb", help="closed-form and oracle bounds over an SNR grid")
    _add_common(p_crlb)
    p_crlb.add_argument("--snr", default="-30:5:10", help='grid: "start:step:stop" or comma list')
    p_crlb.add_argument(
        "--delta-f", dest="delta_f", default=None,
        help="optional comma list of high-band spacings (Hz) to sweep",
    )

    p_sweep = sub.add_parser("sweep", help="Monte-Carlo RMSE over an SNR grid")
    _add_common(p_sweep, with_target=True, with_solver=True)
    p_sweep.add_argument("--snr", default="-30:5:10")
    p_sweep.add_argument("--trials", type=int, default=100)

    p_cmp = sub.add_parser("compare-pilots", help="all four pilot structures on one grid")
    _add_common(p_cmp, with_target=True, with_solver=True)
    p_cmp.add_argument("--snr", default="-30:5:10")
    p_cmp.add_argument("--trials", type=int, default=100)

    args = parser.parse_args(argv)
    cfg = _load_cfg(args)

    if args.command == "simulate":
        snr = _parse_snr(args.snr)[0]
        target = Target(args.range_m, args.velocity, args.gain)
        d_low, d_high = simulate_trial_matrices(
            cfg, target, sigma_for_snr(snr, target.gain), (args.seed, 0, 0, 0)
        )
        dump_grid_csv(d_low.values, d_low.mask, f"{args.out}_low.csv")
        dump_grid_csv(d_high.values, d_high.mask, f"{args.out}_high.csv")
        print(f"wrote {args.out}_low.csv and {args.out}_high.csv")
        return 0

    if args.command == "estimate":
        snr = _parse_snr(args.snr)[0]
        target = Target(args.range_m, args.velocity, args.gain)
        solver = _solver(args)
        if cfg.scheme is Scheme.CA1:
            r_rows, v_rows = snapshot_spectra(cfg, target, snr, args.seed, solver)
            write_spectrum_csv(r_rows, f"{args.out}_range.csv", "range_m")
            write_spectrum_csv(v_rows, f"{args.out}_velocity.csv", "velocity_mps")
        d_low, d_high = simulate_trial_matrices(
            cfg, target, sigma_for_snr(snr, target.gain), (args.seed, 0, 0, 0)
        )
        r_hat, v_hat = estimate_any_scheme(d_low, d_high, cfg, solver)
        print(f"scheme {cfg.scheme.value}: range {r_hat:.6f} m, velocity {v_hat:.6f} m/s")
        return 0

    if args.command == "crlb":
        snr_grid = _parse_snr(args.snr)
        spacings = (
            [float(t) for t in args.delta_f.split(",")] if args.delta_f else None
        )
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["scheme", "snr_db", "delta_f_hz", "crlb_r", "crlb_v", "rcrlb_r", "rcrlb_v", "method"]
            )
            for method in ("closed-form", "oracle"):
                for row in crlb_sweep(cfg, snr_grid, spacings, method=method):
                    writer.writerow(
                        [
                            cfg.scheme.value,
                            _FLOAT_FMT % row.snr_db,
                            _FLOAT_FMT % row.delta_f,
                            _FLOAT_FMT % row.crlb_range,
                            _FLOAT_FMT % row.crlb_velocity,
                            _FLOAT_FMT % row.rcrlb_range,
                            _FLOAT_FMT % row.rcrlb_velocity,
                            method,
                        ]
                    )
        print(f"wrote {args.out}")
        return 0

    if args.command == "sweep":
        spec = ExperimentSpec(
            cfg=cfg,
            schemes=(cfg.scheme,),
            target=Target(args.range_m, args.velocity, args.gain),
            snr_grid=tuple(_parse_snr(args.snr)),
            trials=args.trials,
            master_seed=args.seed,
            solver=_solver(args),
        )
        write_sweep_csv(run_sweep(spec), args.out)
        print(f"wrote {args.out}")
        return 0

    if args.command == "compare-pilots":
        result = compare_pilots(
            cfg,
            Target(args.range_m, args.velocity, args.gain),
            _parse_snr(args.snr),
            trials=args.trials,
            master_seed=args.seed,
            solver=_solver(args),
        )
        write_sweep_csv(result, args.out)
        print(f"wrote {args.out}")
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
