"""Monte-Carlo experiment driver: RMSE sweeps, baselines, spectrum snapshots.

Trial seeds are derived from the master seed by counters (scheme, SNR
point, trial, stream), so runs are deterministic regardless of how trials
would be distributed. A failed trial aborts the run; silently skipping
trials would bias the RMSE.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from .channel import ChannelInfoMatrix, Target, TargetScene, sigma_for_snr, simulate_channel_info
from .config import CaConfig, Scheme, with_scheme
from .crlb import crlb_oracle, CrlbInputs, sigma_from_snr
from .estimators import (
    SolverOptions,
    estimate_any_scheme,
    estimate_band_range,
    estimate_band_velocity,
    estimate_range_staggered,
    estimate_velocity_staggered,
)
from .grids import generate_tx_grid


@dataclass(frozen=True)
class ExperimentSpec:
    """One RMSE-vs-SNR experiment over one or more schemes."""

    cfg: CaConfig
    schemes: tuple[Scheme, ...]
    target: Target
    snr_grid: tuple[float, ...]
    trials: int = 100
    master_seed: int = 0
    solver: SolverOptions = SolverOptions()
    random_targets: bool = False  # uniform off-grid placement per trial

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_grid:
            raise ValueError("snr grid must be nonempty")
        if not self.schemes:
            raise ValueError("need at least one scheme")


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    snr_db: float
    rmse_range: float
    rmse_velocity: float
    rcrlb_range: float
    rcrlb_velocity: float
    trials: int
    wall_time_s: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


def _trial_seed(master_seed: int, scheme_idx: int, snr_idx: int, trial: int, stream: int):
    return np.random.SeedSequence([master_seed, scheme_idx, snr_idx, trial, stream])


def _draw_target(spec: ExperimentSpec, rng: np.random.Generator) -> Target:
    if not spec.random_targets:
        return spec.target
    cfg = spec.cfg
    r_max = cfg.c0 / (2.0 * cfg.high.delta_f)
    v_max = cfg.c0 / (4.0 * cfg.high.fc * cfg.high.symbol_duration)
    return Target(
        range_m=rng.uniform(0.05, 0.45) * r_max,
        velocity_mps=rng.uniform(0.05, 0.45) * v_max,
        gain=spec.target.gain,
    )


def simulate_trial_matrices(
    cfg: CaConfig,
    target: Target,
    noise_sigma: float,
    seed_parts: tuple[int, int, int, int],
) -> tuple[ChannelInfoMatrix, ChannelInfoMatrix]:
    """Both bands' channel matrices for one trial, with independent streams."""
    master, scheme_idx, snr_idx, trial = seed_parts
    mats = []
    for band_idx, band in enumerate((cfg.low, cfg.high)):
        tx_seed = _trial_seed(master, scheme_idx, snr_idx, trial, 10 + band_idx)
        noise_seed = _trial_seed(master, scheme_idx, snr_idx, trial, 20 + band_idx)
        tx = generate_tx_grid(band, tx_seed)
        scene = TargetScene(targets=(target,), noise_sigma=noise_sigma, seed=noise_seed)
        mats.append(simulate_channel_info(tx, scene, c0=cfg.c0))
    return mats[0], mats[1]


def run_sweep(spec: ExperimentSpec) -> SweepResult:
    """RMSE over (scheme, SNR) with oracle RCRLBs alongside."""
    rows = []
    for scheme_idx, scheme in enumerate(spec.schemes):
        cfg = spec.cfg if spec.cfg.scheme is scheme else with_scheme(spec.cfg, scheme)
        for snr_idx, snr_db in enumerate(spec.snr_grid):
            noise_sigma = sigma_for_snr(snr_db, spec.target.gain)
            t0 = time.perf_counter()
            sq_r = 0.0
            sq_v = 0.0
            for trial in range(spec.trials):
                rng = np.random.default_rng(
                    _trial_seed(spec.master_seed, scheme_idx, snr_idx, trial, 0)
                )
                target = _draw_target(spec, rng)
                d_low, d_high = simulate_trial_matrices(
                    cfg, target, noise_sigma, (spec.master_seed, scheme_idx, snr_idx, trial)
                )
                r_hat, v_hat = estimate_any_scheme(d_low, d_high, cfg, spec.solver)
                sq_r += (r_hat - target.range_m) ** 2
                sq_v += (v_hat - target.velocity_mps) ** 2
            wall = time.perf_counter() - t0
            if noise_sigma > 0:
                rep = crlb_oracle(
                    CrlbInputs(
                        cfg=cfg,
                        h=abs(spec.target.gain),
                        sigma=sigma_from_snr(snr_db, abs(spec.target.gain)),
                    )
                )
                rcrlb_r, rcrlb_v = rep.rcrlb_range, rep.rcrlb_velocity
            else:
                rcrlb_r = rcrlb_v = 0.0  # noiseless limit
            rows.append(
                SweepRow(
                    scheme=scheme.value,
                    snr_db=snr_db,
                    rmse_range=float(np.sqrt(sq_r / spec.trials)),
                    rmse_velocity=float(np.sqrt(sq_v / spec.trials)),
                    rcrlb_range=rcrlb_r,
                    rcrlb_velocity=rcrlb_v,
                    trials=spec.trials,
                    wall_time_s=wall,
                )
            )
    return SweepResult(rows=tuple(rows))


def run_high_band_baseline(
    cfg: CaConfig,
    target: Target,
    snr_grid,
    trials: int,
    master_seed: int = 0,
    solver: SolverOptions = SolverOptions(),
) -> list[dict]:
    """Single-band references: block high band for range, comb high band
    for velocity (each is the high-band half of the matching pipeline)."""
    cfg_block = cfg if cfg.scheme is Scheme.CA1 else with_scheme(cfg, Scheme.CA1)
    cfg_comb = with_scheme(cfg, Scheme.CA4)
    rows = []
    for snr_idx, snr_db in enumerate(snr_grid):
        noise_sigma = sigma_for_snr(snr_db, target.gain)
        sq_r = 0.0
        sq_v = 0.0
        for trial in range(trials):
            _, d_block = simulate_trial_matrices(
                cfg_block, target, noise_sigma, (master_seed, 100, snr_idx, trial)
            )
            _, d_comb = simulate_trial_matrices(
                cfg_comb, target, noise_sigma, (master_seed, 101, snr_idx, trial)
            )
            r_hat = estimate_band_range(d_block, cfg.c0, solver).value
            v_hat = estimate_band_velocity(d_comb, cfg.c0, solver).value
            sq_r += (r_hat - target.range_m) ** 2
            sq_v += (v_hat - target.velocity_mps) ** 2
        rows.append(
            {
                "snr_db": float(snr_db),
                "rmse_range_high_block": float(np.sqrt(sq_r / trials)),
                "rmse_velocity_high_comb": float(np.sqrt(sq_v / trials)),
                "trials": trials,
            }
        )
    return rows


def compare_pilots(
    cfg: CaConfig,
    target: Target,
    snr_grid,
    trials: int = 100,
    master_seed: int = 0,
    solver: SolverOptions = SolverOptions(),
) -> SweepResult:
    """All four pilot structures on one SNR grid."""
    spec = ExperimentSpec(
        cfg=cfg,
        schemes=(Scheme.CA1, Scheme.CA2, Scheme.CA3, Scheme.CA4),
        target=target,
        snr_grid=tuple(snr_grid),
        trials=trials,
        master_seed=master_seed,
        solver=solver,
    )
    return run_sweep(spec)


# ---------------------------------------------------------------------------
# spectrum snapshots and CSV emission
# ---------------------------------------------------------------------------

def snapshot_spectra(
    cfg: CaConfig,
    target: Target,
    snr_db: float,
    seed: int = 0,
    solver: SolverOptions = SolverOptions(),
) -> tuple[list[tuple], list[tuple]]:
    """Normalized range and velocity spectra rows: (bin, physical, power, is_peak).

    Only the staggered scheme produces single fused spectra; other schemes
    would need one snapshot per band.
    """
    if cfg.scheme is not Scheme.CA1:
        raise ValueError("snapshot_spectra expects the staggered scheme")
    noise_sigma = sigma_for_snr(snr_db, target.gain)
    d_low, d_high = simulate_trial_matrices(cfg, target, noise_sigma, (seed, 0, 0, 0))
    r_est = estimate_range_staggered(d_low, d_high, cfg, solver)
    v_est = estimate_velocity_staggered(d_low, d_high, cfg, solver)
    out = []
    for est in (r_est, v_est):
        spec = est.spectrum
        rows = [
            (b, b * spec.bin_width, float(spec.values[b]), int(b == est.peak_bin))
            for b in range(len(spec.values))
        ]
        out.append(rows)
    return out[0], out[1]


_FLOAT_FMT = "%.16e"  # 17 significant digits


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "scheme",
                "snr_db",
                "rmse_range_m",
                "rmse_velocity_mps",
                "rcrlb_range_m",
                "rcrlb_velocity_mps",
                "trials",
            ]
        )
        for r in result.rows:
            writer.writerow(
                [
                    r.scheme,
                    _FLOAT_FMT % r.snr_db,
                    _FLOAT_FMT % r.rmse_range,
                    _FLOAT_FMT % r.rmse_velocity,
                    _FLOAT_FMT % r.rcrlb_range,
                    _FLOAT_FMT % r.rcrlb_velocity,
                    r.trials,
                ]
            )


def write_spectrum_csv(rows: list[tuple], path, physical_label: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", physical_label, "power", "is_peak"])
        for b, phys, power, flag in rows:
            writer.writerow([b, _FLOAT_FMT % phys, _FLOAT_FMT % power, flag])
