"""Range and velocity estimation from one or two channel information matrices.

Staggered-scheme fusion accumulates magnitude spectra from both bands on a
shared bin grid before the single peak search:

* range: per-column IDFTs of the block high band plus per-column CS
  recoveries of the rearranged comb low band (leading-rows mask, effective
  spacing K*delta_f_low = delta_f_high);
* velocity: per-row FFTs of the comb low band plus per-row CS recoveries of
  the block high band (periodic rows mask; the low band's full-resolution
  peak disambiguates the periodic aliases).

The other three schemes estimate per band with the pattern-appropriate
primitive and average the two physical estimates. A lone periodic-mask CS
spectrum carries exact Q-fold aliases, so its peak search is restricted to
the band's unambiguous prefix of M/Q bins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelInfoMatrix
from .config import Block, CaConfig, Comb, Scheme
from .errors import SchemeMismatch, VelocityFusionConstraintViolated
from .fusion import build_range_selection, build_velocity_selection, rearrange_low_band
from .recovery import FORWARD, INVERSE, SensingOperator, fista_iterations


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the per-vector CS recoveries inside the estimators."""

    lambda_scale: float = 0.1
    max_iters: int = 200
    tol: float = 1e-6


@dataclass(frozen=True)
class PowerSpectrum:
    """Accumulated nonnegative spectrum with its bin-to-physical mapping."""

    values: np.ndarray  # real, (N,) or (M,)
    bin_width: float  # meters per bin, or m/s per bin
    normalized: bool = False

    def normalize(self) -> "PowerSpectrum":
        peak = float(self.values.max())
        if peak <= 0:
            return PowerSpectrum(self.values.copy(), self.bin_width, True)
        return PowerSpectrum(self.values / peak, self.bin_width, True)


@dataclass(frozen=True)
class Estimate:
    """Peak-derived physical estimate; value = peak_bin * bin_width."""

    kind: str  # "range" | "velocity"
    peak_bin: int
    value: float
    spectrum: PowerSpectrum


@dataclass(frozen=True)
class AveragedEstimate:
    """Arithmetic mean of two per-band estimates (schemes CA2..CA4)."""

    kind: str
    value: float
    per_band: tuple[Estimate, Estimate]


def peak_estimate(spectrum: PowerSpectrum, kind: str, search_bins: int | None = None) -> Estimate:
    """Normalize, search the (optionally restricted) window, map bin to physical."""
    norm = spectrum.normalize()
    window = norm.values if search_bins is None else norm.values[:search_bins]
    b = int(np.argmax(window))
    return Estimate(kind=kind, peak_bin=b, value=b * norm.bin_width, spectrum=norm)


def top_k_peaks(spectrum: PowerSpectrum, k: int, guard: int = 0) -> list[tuple[int, float]]:
    """Greedy maxima with +-guard exclusion zones, descending by value."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if guard < 0:
        raise ValueError("guard must be >= 0")
    work = spectrum.values.astype(float).copy()
    out: list[tuple[int, float]] = []
    for _ in range(k):
        b = int(np.argmax(work))
        if work[b] == -np.inf:
            break
        out.append((b, float(spectrum.values[b])))
        lo, hi = max(0, b - guard), min(len(work), b + guard + 1)
        work[lo:hi] = -np.inf
    return out


# ---------------------------------------------------------------------------
# per-band spectrum primitives
# ---------------------------------------------------------------------------

def _cs_magnitude_sum(op: SensingOperator, columns: np.ndarray, opts: SolverOptions) -> np.ndarray:
    """Batched FISTA over columns sharing one operator; sum of |x_hat| columns."""
    if columns.size == 0:
        return np.zeros(op.n)
    g0 = np.abs(op.adjoint(columns))
    lam = opts.lambda_scale * g0.max(axis=0)
    x, _ = fista_iterations(op, columns, lam, 1.0, opts.max_iters, opts.tol, momentum=True)
    return np.abs(x).sum(axis=1)


def range_spectrum_block(d: ChannelInfoMatrix, c0: float) -> PowerSpectrum:
    """Sum of per-column IDFT magnitudes over the pilot symbol columns.

    Bins live on the band's native grid: c0 / (2 delta_f N) meters wide.
    """
    if not isinstance(d.band.pilot, Block):
        raise SchemeMismatch("range_spectrum_block needs a block-pilot band")
    cols = d.values[:, :: d.band.pilot.interval]
    n = d.band.n_subcarriers
    acc = np.abs(np.fft.ifft(cols, axis=0) * np.sqrt(n)).sum(axis=1)
    return PowerSpectrum(acc, c0 / (2.0 * d.band.delta_f * n))


def range_spectrum_comb_cs(d: ChannelInfoMatrix, c0: float, opts: SolverOptions) -> PowerSpectrum:
    """CS recovery of every column of the rearranged comb band.

    After rearrangement the measurements occupy the leading N/K rows, so the
    recovered bins live on the effective grid with spacing K*delta_f: bins
    are c0 / (2 K delta_f N) meters wide and the unambiguous span is the
    same c0 / (2 K delta_f) as the raw comb's.
    """
    if not isinstance(d.band.pilot, Comb):
        raise SchemeMismatch("range_spectrum_comb_cs needs a comb-pilot band")
    k = d.band.pilot.interval
    rearranged = rearrange_low_band(d, k)
    n = d.band.n_subcarriers
    mask = build_range_selection(rearranged.valid_rows, n)
    op = SensingOperator(n=n, direction=FORWARD, row_mask=mask)
    acc = _cs_magnitude_sum(op, rearranged.values[mask, :], opts)
    return PowerSpectrum(acc, c0 / (2.0 * k * d.band.delta_f * n))


def velocity_spectrum_comb(d: ChannelInfoMatrix, c0: float) -> PowerSpectrum:
    """Sum of per-row FFT magnitudes over the pilot subcarrier rows."""
    if not isinstance(d.band.pilot, Comb):
        raise SchemeMismatch("velocity_spectrum_comb needs a comb-pilot band")
    rows = d.values[:: d.band.pilot.interval, :]
    m = d.band.n_symbols
    acc = np.abs(np.fft.fft(rows, axis=1) / np.sqrt(m)).sum(axis=0)
    return PowerSpectrum(acc, _velocity_bin_width(d, c0))


def velocity_spectrum_block_cs(d: ChannelInfoMatrix, c0: float, opts: SolverOptions) -> PowerSpectrum:
    """CS recovery of every row of a block band through the periodic mask."""
    if not isinstance(d.band.pilot, Block):
        raise SchemeMismatch("velocity_spectrum_block_cs needs a block-pilot band")
    m = d.band.n_symbols
    mask = build_velocity_selection(d.band.pilot.interval, m)
    op = SensingOperator(n=m, direction=INVERSE, row_mask=mask)
    acc = _cs_magnitude_sum(op, d.values[:, mask].T, opts)
    return PowerSpectrum(acc, _velocity_bin_width(d, c0))


def _velocity_bin_width(d: ChannelInfoMatrix, c0: float) -> float:
    return c0 / (2.0 * d.band.fc * d.band.symbol_duration * d.band.n_symbols)


def _check_bands(d_low: ChannelInfoMatrix, d_high: ChannelInfoMatrix, cfg: CaConfig) -> None:
    if d_low.band != cfg.low or d_high.band != cfg.high:
        raise SchemeMismatch("channel matrices do not come from the configured bands")


# ---------------------------------------------------------------------------
# staggered scheme (fused spectra)
# ---------------------------------------------------------------------------

def estimate_range_staggered(
    d_low: ChannelInfoMatrix,
    d_high: ChannelInfoMatrix,
    cfg: CaConfig,
    opts: SolverOptions = SolverOptions(),
) -> Estimate:
    """Fused range estimate for the staggered (low comb, high block) scheme.

    Accumulates |IDFT| over the high band's pilot columns plus |CS-IDFT| over
    all M rearranged low-band columns, normalizes once, then peak-searches.
    The shared grid has bins of c0 / (2 delta_f_high N) meters.
    """
    if cfg.scheme is not Scheme.CA1:
        raise SchemeMismatch(f"expected scheme CA1, got {cfg.scheme.value}")
    _check_bands(d_low, d_high, cfg)
    hi = range_spectrum_block(d_high, cfg.c0)
    lo = range_spectrum_comb_cs(d_low, cfg.c0, opts)
    fused = PowerSpectrum(hi.values + lo.values, hi.bin_width)
    return peak_estimate(fused, "range")


def estimate_velocity_staggered(
    d_low: ChannelInfoMatrix,
    d_high: ChannelInfoMatrix,
    cfg: CaConfig,
    opts: SolverOptions = SolverOptions(),
) -> Estimate:
    """Fused velocity estimate for the staggered scheme.

    Accumulates |FFT| over the low band's pilot rows plus |CS-DFT| over all
    N high-band rows. Peak bins of the two bands coincide because
    T_low * fc_low = T_high * fc_high; that constraint is re-checked here.
    """
    if cfg.scheme is not Scheme.CA1:
        raise SchemeMismatch(f"expected scheme CA1, got {cfg.scheme.value}")
    _check_bands(d_low, d_high, cfg)
    g_low = cfg.low.symbol_duration * cfg.low.fc
    g_high = cfg.high.symbol_duration * cfg.high.fc
    if abs(g_low - g_high) > 1e-12 * max(g_low, g_high):
        raise VelocityFusionConstraintViolated(
            f"|T1*fc1 - T2*fc2| = {abs(g_low - g_high):.6e}"
        )
    lo = velocity_spectrum_comb(d_low, cfg.c0)
    hi = velocity_spectrum_block_cs(d_high, cfg.c0, opts)
    fused = PowerSpectrum(lo.values + hi.values, hi.bin_width)
    return peak_estimate(fused, "velocity")


# ---------------------------------------------------------------------------
# per-band estimates and the averaging schemes
# ---------------------------------------------------------------------------

def estimate_band_range(
    d: ChannelInfoMatrix, c0: float, opts: SolverOptions = SolverOptions()
) -> Estimate:
    """Single-band range estimate with the pattern-appropriate primitive."""
    if isinstance(d.band.pilot, Block):
        return peak_estimate(range_spectrum_block(d, c0), "range")
    return peak_estimate(range_spectrum_comb_cs(d, c0, opts), "range")


def estimate_band_velocity(
    d: ChannelInfoMatrix, c0: float, opts: SolverOptions = SolverOptions()
) -> Estimate:
    """Single-band velocity estimate with the pattern-appropriate primitive.

    For a block band the periodic-mask CS spectrum repeats every M/Q bins,
    so the peak search is restricted to that unambiguous prefix.
    """
    if isinstance(d.band.pilot, Comb):
        return peak_estimate(velocity_spectrum_comb(d, c0), "velocity")
    spectrum = velocity_spectrum_block_cs(d, c0, opts)
    window = d.band.n_symbols // d.band.pilot.interval
    return peak_estimate(spectrum, "velocity", search_bins=window)


def estimate_scheme(
    d_low: ChannelInfoMatrix,
    d_high: ChannelInfoMatrix,
    cfg: CaConfig,
    opts: SolverOptions = SolverOptions(),
) -> tuple[AveragedEstimate, AveragedEstimate]:
    """Range and velocity for schemes CA2..CA4: per-band estimates, averaged.

    Block bands use plain IDFT columns for range and CS-DFT rows for
    velocity; comb bands use CS-IDFT columns for range and plain FFT pilot
    rows for velocity. Physical values (meters, m/s) are averaged because
    the two bands' bin widths differ.
    """
    if cfg.scheme is Scheme.CA1:
        raise SchemeMismatch("use estimate_range/velocity_staggered for CA1")
    _check_bands(d_low, d_high, cfg)
    r_low = estimate_band_range(d_low, cfg.c0, opts)
    r_high = estimate_band_range(d_high, cfg.c0, opts)
    v_low = estimate_band_velocity(d_low, cfg.c0, opts)
    v_high = estimate_band_velocity(d_high, cfg.c0, opts)
    rng = AveragedEstimate("range", 0.5 * (r_low.value + r_high.value), (r_low, r_high))
    vel = AveragedEstimate("velocity", 0.5 * (v_low.value + v_high.value), (v_low, v_high))
    return rng, vel


def estimate_any_scheme(
    d_low: ChannelInfoMatrix,
    d_high: ChannelInfoMatrix,
    cfg: CaConfig,
    opts: SolverOptions = SolverOptions(),
) -> tuple[float, float]:
    """(range_m, velocity_mps) under whatever scheme cfg declares."""
    if cfg.scheme is Scheme.CA1:
        r = estimate_range_staggered(d_low, d_high, cfg, opts)
        v = estimate_velocity_staggered(d_low, d_high, cfg, opts)
        return r.value, v.value
    r, v = estimate_scheme(d_low, d_high, cfg, opts)
    return r.value, v.value
