import numpy as np
import pytest

from casense.channel import Target, TargetScene, sigma_for_snr, simulate_channel_info
from casense.config import CaConfig, Scheme, make_table3_config, with_scheme
from casense.errors import SchemeMismatch, VelocityFusionConstraintViolated
from casense.estimators import (
    PowerSpectrum,
    SolverOptions,
    estimate_band_range,
    estimate_band_velocity,
    estimate_range_staggered,
    estimate_scheme,
    estimate_velocity_staggered,
    range_spectrum_block,
    range_spectrum_comb_cs,
    top_k_peaks,
)
from casense.grids import generate_tx_grid

C0 = 3e8


@pytest.fixture(scope="module")
def table3():
    return make_table3_config()


def channel_pair(cfg, target, snr_db=None, seed=0):
    sigma = 0.0 if snr_db is None else sigma_for_snr(snr_db, target.gain)
    out = []
    for i, band in enumerate((cfg.low, cfg.high)):
        tx = generate_tx_grid(band, seed=(seed, i))
        scene = TargetScene((target,), noise_sigma=sigma, seed=(seed, 10 + i))
        out.append(simulate_channel_info(tx, scene, c0=cfg.c0))
    return out


def test_range_staggered_reproduces_reference_point(table3):
    d_low, d_high = channel_pair(table3, Target(117.0, 30.0), snr_db=10.0, seed=3)
    est = estimate_range_staggered(d_low, d_high, table3)
    assert est.peak_bin == 48
    assert est.value == pytest.approx(117.1875, abs=1e-9)


def test_velocity_staggered_reproduces_reference_point(table3):
    d_low, d_high = channel_pair(table3, Target(117.0, 30.0), snr_db=10.0, seed=3)
    est = estimate_velocity_staggered(d_low, d_high, table3)
    assert est.peak_bin == 3
    assert est.value == pytest.approx(30.3176, abs=1e-3)


def test_zero_target_zero_bins(table3):
    d_low, d_high = channel_pair(table3, Target(0.0, 0.0))
    r = estimate_range_staggered(d_low, d_high, table3)
    v = estimate_velocity_staggered(d_low, d_high, table3)
    assert r.peak_bin == 0 and r.value == 0.0
    assert v.peak_bin == 0 and v.value == 0.0


def test_one_bin_targets(table3):
    r_bin = table3.range_bin_width
    v_bin = table3.velocity_bin_width
    assert v_bin == pytest.approx(10.106, abs=1e-3)
    d_low, d_high = channel_pair(table3, Target(r_bin, v_bin))
    assert estimate_range_staggered(d_low, d_high, table3).peak_bin == 1
    assert estimate_velocity_staggered(d_low, d_high, table3).peak_bin == 1


@pytest.mark.parametrize("bin_r", [2, 17, 100, 200])
def test_noiseless_on_grid_range_is_bin_exact(table3, bin_r):
    target = Target(bin_r * table3.range_bin_width, 0.0)
    d_low, d_high = channel_pair(table3, target, seed=bin_r)
    est = estimate_range_staggered(d_low, d_high, table3)
    assert est.peak_bin == bin_r
    assert est.value == pytest.approx(target.range_m, rel=1e-12)


@pytest.mark.parametrize("bin_v", [1, 2, 7, 15])
def test_noiseless_on_grid_velocity_is_bin_exact(table3, bin_v):
    target = Target(0.0, bin_v * table3.velocity_bin_width)
    d_low, d_high = channel_pair(table3, target, seed=bin_v)
    est = estimate_velocity_staggered(d_low, d_high, table3)
    assert est.peak_bin == bin_v


def test_noiseless_off_grid_lands_on_nearest_bin(table3):
    rng = np.random.default_rng(12)
    for _ in range(4):
        r = rng.uniform(5.0, 400.0)
        v = rng.uniform(0.0, 120.0)
        d_low, d_high = channel_pair(table3, Target(r, v), seed=int(r))
        r_est = estimate_range_staggered(d_low, d_high, table3)
        v_est = estimate_velocity_staggered(d_low, d_high, table3)
        assert abs(r_est.value - r) <= table3.range_bin_width / 2 + 1e-9
        assert abs(v_est.value - v) <= table3.velocity_bin_width / 2 + 1e-9


def test_peak_bin_invariant_under_complex_scaling(table3):
    from dataclasses import replace

    d_low, d_high = channel_pair(table3, Target(117.0, 30.0), snr_db=0.0, seed=9)
    scale = 3.4e4 * np.exp(1.1j)
    d_low_s = replace(d_low, values=d_low.values * scale)
    d_high_s = replace(d_high, values=d_high.values * scale)
    r1 = estimate_range_staggered(d_low, d_high, table3)
    r2 = estimate_range_staggered(d_low_s, d_high_s, table3)
    assert r1.peak_bin == r2.peak_bin
    assert r1.spectrum.normalized and r2.spectrum.normalized
    assert r1.spectrum.values.max() == pytest.approx(1.0)


def test_staggered_spectrum_is_high_plus_nonnegative_low(table3):
    d_low, d_high = channel_pair(table3, Target(200.0, 10.0), seed=4)
    hi = range_spectrum_block(d_high, table3.c0)
    lo = range_spectrum_comb_cs(d_low, table3.c0, SolverOptions())
    assert np.all(lo.values >= 0)
    fused = hi.values + lo.values
    assert np.argmax(fused) == np.argmax(hi.values)
    assert np.argmax(lo.values) == np.argmax(hi.values)


def test_scheme_mismatch_errors(table3):
    d_low, d_high = channel_pair(table3, Target(10.0, 0.0))
    cfg2 = with_scheme(table3, Scheme.CA2)
    with pytest.raises(SchemeMismatch):
        estimate_range_staggered(d_low, d_high, cfg2)
    with pytest.raises(SchemeMismatch):
        estimate_scheme(d_low, d_high, table3)


def test_velocity_constraint_rechecked(table3):
    from dataclasses import replace

    bad_low = replace(table3.low, t_cp=table3.low.t_cp + 2e-6)
    bad = CaConfig(low=bad_low, high=table3.high, scheme=Scheme.CA1, c0=table3.c0)
    tx = generate_tx_grid(bad_low, seed=0)
    d_low = simulate_channel_info(tx, TargetScene((Target(10.0, 5.0),), 0.0), c0=C0)
    tx_h = generate_tx_grid(table3.high, seed=1)
    d_high = simulate_channel_info(tx_h, TargetScene((Target(10.0, 5.0),), 0.0), c0=C0)
    with pytest.raises(VelocityFusionConstraintViolated):
        estimate_velocity_staggered(d_low, d_high, bad)


def scheme_pair(scheme, target, snr_db=None, seed=0):
    cfg = with_scheme(make_table3_config(), scheme)
    return cfg, channel_pair(cfg, target, snr_db=snr_db, seed=seed)


def test_ca3_noiseless_aligned_bins_average_to_themselves():
    target = Target(117.1875, 0.0)  # on both block bands' grids
    cfg, (d_low, d_high) = scheme_pair(Scheme.CA3, target)
    r, v = estimate_scheme(d_low, d_high, cfg)
    assert r.per_band[0].value == pytest.approx(117.1875, rel=1e-12)
    assert r.per_band[1].value == pytest.approx(117.1875, rel=1e-12)
    assert r.value == pytest.approx(117.1875, rel=1e-12)


def test_ca4_zero_target():
    cfg, (d_low, d_high) = scheme_pair(Scheme.CA4, Target(0.0, 0.0))
    r, v = estimate_scheme(d_low, d_high, cfg)
    assert r.value == 0.0 and v.value == 0.0


def test_ca2_noiseless_within_band_bin_widths():
    target = Target(117.0, 30.0)
    cfg, (d_low, d_high) = scheme_pair(Scheme.CA2, target)
    r, v = estimate_scheme(d_low, d_high, cfg)
    # low band is block on the 30 kHz grid, high band comb on the rearranged
    # 480 kHz-effective grid
    w_low = C0 / (2 * cfg.low.delta_f * cfg.low.n_subcarriers)
    w_high = C0 / (2 * 4 * cfg.high.delta_f * cfg.high.n_subcarriers)
    assert abs(r.per_band[0].value - 117.0) <= w_low
    assert abs(r.per_band[1].value - 117.0) <= w_high
    assert r.value == pytest.approx(0.5 * (r.per_band[0].value + r.per_band[1].value))
    assert v.value == pytest.approx(30.3176, abs=1e-3)


@pytest.mark.parametrize("scheme", [Scheme.CA2, Scheme.CA3, Scheme.CA4])
def test_averaging_schemes_noiseless_quantization_bound(scheme):
    target = Target(117.0, 30.0)
    cfg, (d_low, d_high) = scheme_pair(scheme, target, seed=2)
    r, v = estimate_scheme(d_low, d_high, cfg)
    assert abs(r.value - 117.0) <= 5.0  # coarsest grid is 9.77 m wide
    assert abs(v.value - 30.0) <= 5.1


def test_single_band_estimates(table3):
    d_low, d_high = channel_pair(table3, Target(117.0, 30.0), snr_db=10.0, seed=6)
    r = estimate_band_range(d_high, table3.c0)
    assert r.value == pytest.approx(117.1875, abs=1e-9)
    cfg4 = with_scheme(table3, Scheme.CA4)
    d_low4, d_high4 = channel_pair(cfg4, Target(117.0, 30.0), snr_db=10.0, seed=6)
    v = estimate_band_velocity(d_high4, cfg4.c0)
    assert v.value == pytest.approx(30.3176, abs=1e-3)


def test_block_band_velocity_search_window():
    # a lone periodic-mask CS spectrum repeats every M/Q bins; the peak
    # search must stay inside the unambiguous prefix
    cfg = with_scheme(make_table3_config(), Scheme.CA3)
    target = Target(50.0, 30.0)
    tx = generate_tx_grid(cfg.high, seed=8)
    d = simulate_channel_info(tx, TargetScene((target,), 0.0), c0=C0)
    est = estimate_band_velocity(d, cfg.c0)
    assert est.peak_bin < cfg.high.n_symbols // cfg.high.pilot.interval
    assert est.value == pytest.approx(30.3176, abs=1e-3)


def test_top_k_peaks_delta():
    spec = PowerSpectrum(np.eye(16)[5], bin_width=1.0)
    assert top_k_peaks(spec, 1) == [(5, 1.0)]


def test_top_k_peaks_two_separated():
    values = np.zeros(64)
    values[10] = 1.0
    values[40] = 0.7
    spec = PowerSpectrum(values, bin_width=1.0)
    peaks = top_k_peaks(spec, 2, guard=5)
    assert [b for b, _ in peaks] == [10, 40]


def test_top_k_peaks_exhausts_gracefully():
    spec = PowerSpectrum(np.ones(8), bin_width=1.0)
    peaks = top_k_peaks(spec, 20, guard=3)
    assert len(peaks) <= 3  # exclusion zones cover the spectrum quickly
    with pytest.raises(ValueError):
        top_k_peaks(spec, 0)
