import json
from dataclasses import replace

import pytest

from casense.config import (
    BandConfig,
    Block,
    CaConfig,
    Comb,
    Scheme,
    load_config,
    make_table3_config,
    save_config,
    validate,
    with_high_band_spacing,
    with_scheme,
)
from casense.errors import (
    NonIntegerSpacingRatio,
    PilotIntervalDoesNotDivide,
    SchemeMismatch,
    VelocityFusionConstraintViolated,
)


def test_table3_config_is_valid():
    cfg = make_table3_config()
    assert cfg.scheme is Scheme.CA1
    assert cfg.k_ratio == 4
    assert cfg.low.fc == 5.9e9 and cfg.high.fc == 24e9
    assert cfg.low.delta_f == 30e3 and cfg.high.delta_f == 120e3
    assert cfg.low.n_subcarriers == 512 and cfg.low.n_symbols == 64
    assert isinstance(cfg.low.pilot, Comb) and cfg.low.pilot.interval == 4
    assert isinstance(cfg.high.pilot, Block) and cfg.high.pilot.interval == 4


def test_table3_symbol_durations():
    cfg = make_table3_config()
    t2 = cfg.high.symbol_duration
    assert t2 == pytest.approx(1.0 / 120e3 + 1.33e-6, rel=1e-15)
    # displays as 9.7 us after rounding to one decimal
    assert round(t2 * 1e6, 1) == 9.7
    # low-band duration is derived from the exact velocity-fusion constraint
    t1 = cfg.low.symbol_duration
    assert t1 * cfg.low.fc == pytest.approx(t2 * cfg.high.fc, rel=1e-15)
    assert t1 == pytest.approx(t2 * 24e9 / 5.9e9, rel=1e-12)
    assert cfg.low.t_cp >= 0


def test_table3_bin_widths():
    cfg = make_table3_config()
    # c0 / (2 delta_f2 N) with round c0
    assert cfg.range_bin_width == pytest.approx(2.44140625, abs=0)
    # 48 bins land exactly on the 117.1875 m reference point
    assert 48 * cfg.range_bin_width == 117.1875
    # c0 / (2 fc2 T2 M); T2*fc2 = 231920 for the 1.33 us CP
    assert cfg.velocity_bin_width == pytest.approx(3e8 / (2 * 231920.0 * 64), rel=1e-12)
    assert cfg.velocity_bin_width == pytest.approx(10.105855, abs=1e-5)


def test_spacing_ratio_must_be_integer():
    cfg = make_table3_config()
    low = replace(cfg.low, delta_f=30e3)
    high = replace(cfg.high, delta_f=100e3)  # ratio 10/3
    with pytest.raises(NonIntegerSpacingRatio):
        validate(CaConfig(low=low, high=high, scheme=Scheme.CA1, c0=cfg.c0))


def test_pilot_interval_must_divide():
    with pytest.raises(PilotIntervalDoesNotDivide):
        BandConfig(5.9e9, 30e3, 512, 64, 1e-6, Comb(5))
    with pytest.raises(PilotIntervalDoesNotDivide):
        BandConfig(5.9e9, 30e3, 512, 64, 1e-6, Block(7))


def test_velocity_fusion_constraint_reports_residual():
    cfg = make_table3_config()
    low = replace(cfg.low, t_cp=cfg.low.t_cp + 1e-6)
    with pytest.raises(VelocityFusionConstraintViolated) as err:
        validate(CaConfig(low=low, high=cfg.high, scheme=Scheme.CA1, c0=cfg.c0))
    assert "T1*fc1" in str(err.value)


def test_comb_interval_tied_to_spacing_ratio_in_ca1():
    cfg = make_table3_config()
    low = replace(cfg.low, pilot=Comb(2))  # ratio is 4
    with pytest.raises(SchemeMismatch):
        validate(CaConfig(low=low, high=cfg.high, scheme=Scheme.CA1, c0=cfg.c0))


def test_pattern_scheme_agreement():
    cfg = make_table3_config()
    swapped = CaConfig(low=cfg.high, high=cfg.low, scheme=Scheme.CA1, c0=cfg.c0)
    with pytest.raises((SchemeMismatch, NonIntegerSpacingRatio)):
        validate(swapped)


def test_validate_is_idempotent():
    cfg = make_table3_config()
    assert validate(validate(cfg)) is cfg


def test_k_ratio_exact():
    cfg = make_table3_config()
    assert cfg.k_ratio * cfg.low.delta_f == cfg.high.delta_f


@pytest.mark.parametrize("scheme", list(Scheme))
def test_with_scheme_builds_each_structure(scheme):
    cfg = with_scheme(make_table3_config(), scheme)
    low_kind, high_kind = scheme.patterns
    assert isinstance(cfg.low.pilot, low_kind)
    assert isinstance(cfg.high.pilot, high_kind)
    assert cfg.low.pilot.interval == 4 and cfg.high.pilot.interval == 4


def test_with_high_band_spacing_preserves_constraints():
    cfg = make_table3_config()
    scaled = with_high_band_spacing(cfg, 240e3)
    assert scaled.high.delta_f == 240e3
    assert scaled.low.delta_f == 60e3
    g1 = scaled.low.symbol_duration * scaled.low.fc
    g2 = scaled.high.symbol_duration * scaled.high.fc
    assert g1 == pytest.approx(g2, rel=1e-14)


def test_config_file_round_trip(tmp_path):
    cfg = make_table3_config(scheme=Scheme.CA2)
    path = tmp_path / "cfg.json"
    save_config(cfg, path)
    loaded = load_config(path)
    assert loaded == cfg
    # file is a readable nested key/value document with plain decimals
    doc = json.loads(path.read_text())
    assert doc["low"]["fc"] == 5.9e9
    assert doc["high"]["pilot"]["kind"] == "comb"


def test_band_config_rejects_bad_values():
    with pytest.raises(ValueError):
        BandConfig(0.0, 30e3, 512, 64, 0.0, Comb(4))
    with pytest.raises(ValueError):
        BandConfig(5.9e9, 30e3, 1, 64, 0.0, Comb(1))
    with pytest.raises(ValueError):
        BandConfig(5.9e9, 30e3, 512, 64, -1e-9, Comb(4))
