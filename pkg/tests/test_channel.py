import numpy as np
import pytest

from casense.channel import (
    Target,
    TargetScene,
    sigma_for_snr,
    simulate_channel_info,
)
from casense.config import make_table3_config
from casense.errors import EmptyScene, VelocityAmbiguityWarning
from casense.grids import generate_tx_grid

C0 = 3e8


@pytest.fixture
def table3():
    return make_table3_config()


def make_matrix(band, targets, sigma=0.0, seed=0, c0=C0):
    tx = generate_tx_grid(band, seed=seed)
    scene = TargetScene(targets=tuple(targets), noise_sigma=sigma, seed=seed + 1)
    return simulate_channel_info(tx, scene, c0=c0)


def test_zero_target_gives_all_ones(table3):
    d = make_matrix(table3.high, [Target(0.0, 0.0, 1.0)])
    assert np.allclose(d.values[d.mask], 1.0, atol=1e-12)
    assert np.all(d.values[~d.mask] == 0)


def test_unit_modulus_phase_factors(table3):
    d = make_matrix(table3.low, [Target(80.0, 12.0, 0.7 - 0.1j)])
    mags = np.abs(d.values[d.mask])
    assert np.allclose(mags, abs(0.7 - 0.1j), atol=1e-12)


def test_range_phase_step_high_band(table3):
    # phase advance between adjacent subcarriers is -2 pi delta_f 2R/c0
    r = 117.0
    d = make_matrix(table3.high, [Target(r, 30.0, 1.0)])
    expected = -2 * np.pi * table3.high.delta_f * 2 * r / C0
    got = np.angle(d.values[1, 0] / d.values[0, 0])
    assert got == pytest.approx(np.angle(np.exp(1j * expected)), abs=1e-9)
    assert got == pytest.approx(-0.58811, abs=1e-4)


def test_doppler_phase_step(table3):
    v = 30.0
    d = make_matrix(table3.low, [Target(0.0, v, 1.0)])
    t1 = table3.low.symbol_duration
    expected = 2 * np.pi * t1 * 2 * v * table3.low.fc / C0
    got = np.angle(d.values[0, 1] / d.values[0, 0])
    assert got == pytest.approx(expected, abs=1e-9)


def test_sigma_for_snr_values():
    assert sigma_for_snr(0.0, 1.0) == pytest.approx(1.0)
    assert sigma_for_snr(10.0, 1.0) == pytest.approx(10 ** -0.5)
    assert sigma_for_snr(-20.0, 2.0) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        sigma_for_snr(0.0, 0.0)


def test_noiseless_single_target_is_rank_one(table3):
    d = make_matrix(table3.low, [Target(53.3, 17.1, 0.8 + 0.6j)])
    sub = d.values[::4, :]  # populated comb rows
    # all 2x2 minors of a rank-1 matrix vanish
    rng = np.random.default_rng(0)
    for _ in range(200):
        i, j = rng.integers(0, sub.shape[0], 2)
        p, q = rng.integers(0, sub.shape[1], 2)
        minor = sub[i, p] * sub[j, q] - sub[i, q] * sub[j, p]
        assert abs(minor) < 1e-9


def test_noise_reproducible_and_masked(table3):
    tgt = [Target(90.0, 10.0)]
    d1 = make_matrix(table3.high, tgt, sigma=0.5, seed=7)
    d2 = make_matrix(table3.high, tgt, sigma=0.5, seed=7)
    d3 = make_matrix(table3.high, tgt, sigma=0.5, seed=8)
    assert np.array_equal(d1.values, d2.values)
    assert not np.array_equal(d1.values, d3.values)
    assert np.all(d1.values[~d1.mask] == 0)


def test_scale_equivariance_of_noiseless_part(table3):
    base = make_matrix(table3.high, [Target(70.0, 5.0, 1.0)])
    scaled = make_matrix(table3.high, [Target(70.0, 5.0, 2.0)])
    s1 = np.abs(np.fft.ifft(base.values[:, 0]))
    s2 = np.abs(np.fft.ifft(scaled.values[:, 0]))
    assert np.allclose(s1 / s1.max(), s2 / s2.max(), atol=1e-12)


def test_multiple_targets_superpose(table3):
    t1, t2 = Target(40.0, 5.0, 1.0), Target(90.0, -8.0, 0.5j)
    d1 = make_matrix(table3.high, [t1])
    d2 = make_matrix(table3.high, [t2])
    d12 = make_matrix(table3.high, [t1, t2])
    assert np.allclose(d12.values, d1.values + d2.values, atol=1e-12)


def test_empty_scene_rejected(table3):
    tx = generate_tx_grid(table3.high, seed=0)
    with pytest.raises(EmptyScene):
        simulate_channel_info(tx, TargetScene(targets=(), noise_sigma=0.0), c0=C0)


def test_velocity_ambiguity_warns(table3):
    # unambiguous span of the high band is ~323 m/s
    with pytest.warns(VelocityAmbiguityWarning):
        make_matrix(table3.high, [Target(10.0, 400.0)])


def test_range_beyond_unambiguous_span_rejected(table3):
    r_max = C0 / (2 * table3.high.delta_f)
    with pytest.raises(ValueError):
        make_matrix(table3.high, [Target(r_max + 1.0, 0.0)])


def test_target_validation():
    with pytest.raises(ValueError):
        Target(-1.0, 0.0)
    with pytest.raises(ValueError):
        Target(10.0, 0.0, gain=0.0)
    with pytest.raises(ValueError):
        TargetScene(targets=(Target(1.0, 1.0),), noise_sigma=-0.1)
