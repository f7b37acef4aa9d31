"""Per-band OFDM parameters and cross-band aggregation constraints.

All frequencies are in Hz, all durations in seconds. A carrier-aggregated
configuration binds a low-frequency and a high-frequency OFDM band whose
subcarrier spacings differ by an integer factor and whose symbol durations
are tuned (via cyclic-prefix length) so that ``T_low * fc_low`` equals
``T_high * fc_high``. Both constraints are what make cross-band fusion of
range and velocity spectra bin-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    NonIntegerSpacingRatio,
    PilotIntervalDoesNotDivide,
    SchemeMismatch,
    VelocityFusionConstraintViolated,
)

C0_EXACT = 299_792_458.0  # speed of light, m/s
C0_ROUND = 3e8  # round value used for reproduction runs

_REL_TOL = 1e-12


@dataclass(frozen=True)
class Comb:
    """Pilots on every ``interval``-th subcarrier, every OFDM symbol."""

    interval: int


@dataclass(frozen=True)
class Block:
    """Pilots on every subcarrier, every ``interval``-th OFDM symbol."""

    interval: int


PilotPattern = Comb | Block


class Scheme(Enum):
    """The four aggregated pilot structures."""

    CA1 = "CA1"  # staggered: low comb, high block
    CA2 = "CA2"  # low block, high comb
    CA3 = "CA3"  # both block
    CA4 = "CA4"  # both comb

    @property
    def patterns(self) -> tuple[type, type]:
        """(low pattern class, high pattern class) expected by the scheme."""
        return {
            Scheme.CA1: (Comb, Block),
            Scheme.CA2: (Block, Comb),
            Scheme.CA3: (Block, Block),
            Scheme.CA4: (Comb, Comb),
        }[self]


@dataclass(frozen=True)
class BandConfig:
    """One OFDM component carrier.

    Attributes
    ----------
    fc : float
        Carrier frequency (Hz).
    delta_f : float
        Subcarrier spacing (Hz).
    n_subcarriers : int
        Number of subcarriers N.
    n_symbols : int
        Number of OFDM symbols M per frame.
    t_cp : float
        Cyclic-prefix duration (s).
    pilot : Comb | Block
        Pilot pattern of this band.
    """

    fc: float
    delta_f: float
    n_subcarriers: int
    n_symbols: int
    t_cp: float
    pilot: PilotPattern

    def __post_init__(self):
        if self.n_subcarriers < 2 or self.n_symbols < 2:
            raise ValueError("need at least 2 subcarriers and 2 symbols")
        if self.fc <= 0 or self.delta_f <= 0:
            raise ValueError("fc and delta_f must be positive")
        if self.t_cp < 0:
            raise ValueError("t_cp must be nonnegative")
        if self.pilot.interval < 1:
            raise PilotIntervalDoesNotDivide(
                f"pilot interval must be >= 1, got {self.pilot.interval}"
            )
        if isinstance(self.pilot, Comb) and self.n_subcarriers % self.pilot.interval:
            raise PilotIntervalDoesNotDivide(
                f"comb interval {self.pilot.interval} does not divide N={self.n_subcarriers}"
            )
        if isinstance(self.pilot, Block) and self.n_symbols % self.pilot.interval:
            raise PilotIntervalDoesNotDivide(
                f"block interval {self.pilot.interval} does not divide M={self.n_symbols}"
            )

    @property
    def symbol_duration(self) -> float:
        """Total OFDM symbol duration T = 1/delta_f + t_cp (s)."""
        return 1.0 / self.delta_f + self.t_cp

    @property
    def n_pilot_subcarriers(self) -> int:
        """N' = N/K for a comb band, N otherwise."""
        if isinstance(self.pilot, Comb):
            return self.n_subcarriers // self.pilot.interval
        return self.n_subcarriers

    @property
    def n_pilot_symbols(self) -> int:
        """M' = M/Q for a block band, M otherwise."""
        if isinstance(self.pilot, Block):
            return self.n_symbols // self.pilot.interval
        return self.n_symbols


@dataclass(frozen=True)
class CaConfig:
    """A validated pair of aggregated bands plus the pilot scheme."""

    low: BandConfig
    high: BandConfig
    scheme: Scheme
    c0: float = C0_EXACT

    @property
    def k_ratio(self) -> int:
        """Integer subcarrier-spacing ratio delta_f_high / delta_f_low."""
        ratio = self.high.delta_f / self.low.delta_f
        return int(round(ratio))

    @property
    def range_bin_width(self) -> float:
        """Fused range bin width c0 / (2 * delta_f_high * N) in meters."""
        return self.c0 / (2.0 * self.high.delta_f * self.high.n_subcarriers)

    @property
    def velocity_bin_width(self) -> float:
        """Fused velocity bin width c0 / (2 * fc_high * T_high * M) in m/s."""
        return self.c0 / (
            2.0 * self.high.fc * self.high.symbol_duration * self.high.n_symbols
        )


def validate(cfg: CaConfig) -> CaConfig:
    """Check all aggregation invariants; return the config unchanged.

    Raises
    ------
    NonIntegerSpacingRatio
        If delta_f_high / delta_f_low is not an integer.
    VelocityFusionConstraintViolated
        If T_low * fc_low != T_high * fc_high (reports the residual).
    SchemeMismatch
        If band pilot patterns do not match the declared scheme, or a comb
        interval in scheme CA1/CA2 differs from the spacing ratio.

    Idempotent: ``validate(validate(cfg))`` returns the same object.
    """
    ratio = cfg.high.delta_f / cfg.low.delta_f
    k = round(ratio)
    if k < 1 or abs(ratio - k) > _REL_TOL * ratio:
        raise NonIntegerSpacingRatio(
            f"delta_f ratio {ratio!r} is not a positive integer within rel 1e-12"
        )
    g_low = cfg.low.symbol_duration * cfg.low.fc
    g_high = cfg.high.symbol_duration * cfg.high.fc
    residual = abs(g_low - g_high)
    if residual > _REL_TOL * max(g_low, g_high):
        raise VelocityFusionConstraintViolated(
            f"|T1*fc1 - T2*fc2| = {residual:.6e} (T1*fc1={g_low!r}, T2*fc2={g_high!r})"
        )
    low_kind, high_kind = cfg.scheme.patterns
    if not isinstance(cfg.low.pilot, low_kind) or not isinstance(cfg.high.pilot, high_kind):
        raise SchemeMismatch(
            f"scheme {cfg.scheme.value} expects low={low_kind.__name__}, "
            f"high={high_kind.__name__}; got low={type(cfg.low.pilot).__name__}, "
            f"high={type(cfg.high.pilot).__name__}"
        )
    if cfg.scheme in (Scheme.CA1, Scheme.CA2):
        for band in (cfg.low, cfg.high):
            if isinstance(band.pilot, Comb) and band.pilot.interval != k:
                raise SchemeMismatch(
                    f"comb interval {band.pilot.interval} must equal the spacing "
                    f"ratio {k} in scheme {cfg.scheme.value}"
                )
    if cfg.c0 <= 0:
        raise ValueError("c0 must be positive")
    return cfg


def make_table3_config(
    scheme: Scheme = Scheme.CA1,
    t_cp_high: float = 1.33e-6,
    comb_interval: int = 4,
    block_interval: int = 4,
    c0: float = C0_ROUND,
) -> CaConfig:
    """Canonical 5.9 GHz / 24 GHz vehicular sensing configuration.

    fc 5.9/24 GHz, delta_f 30/120 kHz, N=512, M=64, K=Q=4. The high-band CP
    is 1.33 us (the maximum round-trip delay of a 200 m scene), which puts
    the high-band symbol duration at 9.6633 us (9.7 us after rounding). The
    low-band CP is then derived so that T1*fc1 = T2*fc2 holds exactly, which
    the fused velocity spectrum requires; this yields T1 = 39.3 us.

    Fused bin widths with the default round c0: 2.44140625 m in range and
    10.1059 m/s in velocity.
    """
    fc1, fc2 = 5.9e9, 24e9
    df1, df2 = 30e3, 120e3
    t2 = 1.0 / df2 + t_cp_high
    t1 = t2 * fc2 / fc1
    t_cp_low = t1 - 1.0 / df1
    if t_cp_low < 0:
        raise ValueError(f"derived low-band CP is negative: {t_cp_low!r}")
    low_kind, high_kind = scheme.patterns
    low_pilot = Comb(comb_interval) if low_kind is Comb else Block(block_interval)
    high_pilot = Comb(comb_interval) if high_kind is Comb else Block(block_interval)
    cfg = CaConfig(
        low=BandConfig(fc1, df1, 512, 64, t_cp_low, low_pilot),
        high=BandConfig(fc2, df2, 512, 64, t_cp_high, high_pilot),
        scheme=scheme,
        c0=c0,
    )
    return validate(cfg)


def with_scheme(
    cfg: CaConfig,
    scheme: Scheme,
    comb_interval: int | None = None,
    block_interval: int | None = None,
) -> CaConfig:
    """Rebuild a validated config with pilot patterns set for another scheme.

    Pilot intervals default to the ones already present in ``cfg`` (falling
    back to the spacing ratio for combs).
    """
    existing_comb = next(
        (b.pilot.interval for b in (cfg.low, cfg.high) if isinstance(b.pilot, Comb)),
        cfg.k_ratio,
    )
    existing_block = next(
        (b.pilot.interval for b in (cfg.low, cfg.high) if isinstance(b.pilot, Block)),
        existing_comb,
    )
    k = comb_interval if comb_interval is not None else existing_comb
    q = block_interval if block_interval is not None else existing_block
    low_kind, high_kind = scheme.patterns
    low = replace(cfg.low, pilot=Comb(k) if low_kind is Comb else Block(q))
    high = replace(cfg.high, pilot=Comb(k) if high_kind is Comb else Block(q))
    return validate(CaConfig(low=low, high=high, scheme=scheme, c0=cfg.c0))


def with_high_band_spacing(cfg: CaConfig, delta_f_high: float) -> CaConfig:
    """Rescale both subcarrier spacings, preserving the ratio and T1*fc1 = T2*fc2.

    The high-band CP is kept; the low-band CP is re-derived from the velocity
    fusion constraint. Used by CRLB sweeps over subcarrier spacing.
    """
    k = cfg.k_ratio
    df2 = float(delta_f_high)
    df1 = df2 / k
    t2 = 1.0 / df2 + cfg.high.t_cp
    t1 = t2 * cfg.high.fc / cfg.low.fc
    t_cp_low = t1 - 1.0 / df1
    if t_cp_low < 0:
        raise ValueError(f"delta_f_high={df2!r} would need negative low-band CP")
    low = replace(cfg.low, delta_f=df1, t_cp=t_cp_low)
    high = replace(cfg.high, delta_f=df2)
    return validate(CaConfig(low=low, high=high, scheme=cfg.scheme, c0=cfg.c0))


# ---------------------------------------------------------------------------
# config file round-trip (JSON, plain decimals, Hz and seconds)
# ---------------------------------------------------------------------------

def _pilot_to_dict(p: PilotPattern) -> dict:
    return {"kind": "comb" if isinstance(p, Comb) else "block", "interval": p.interval}


def _pilot_from_dict(d: dict) -> PilotPattern:
    kind = d["kind"].lower()
    if kind == "comb":
        return Comb(int(d["interval"]))
    if kind == "block":
        return Block(int(d["interval"]))
    raise ValueError(f"unknown pilot kind {d['kind']!r}")


def _band_to_dict(b: BandConfig) -> dict:
    return {
        "fc": b.fc,
        "delta_f": b.delta_f,
        "n_subcarriers": b.n_subcarriers,
        "n_symbols": b.n_symbols,
        "t_cp": b.t_cp,
        "pilot": _pilot_to_dict(b.pilot),
    }


def _band_from_dict(d: dict) -> BandConfig:
    return BandConfig(
        fc=float(d["fc"]),
        delta_f=float(d["delta_f"]),
        n_subcarriers=int(d["n_subcarriers"]),
        n_symbols=int(d["n_symbols"]),
        t_cp=float(d["t_cp"]),
        pilot=_pilot_from_dict(d["pilot"]),
    )


def config_to_dict(cfg: CaConfig) -> dict:
    return {
        "scheme": cfg.scheme.value,
        "c0": cfg.c0,
        "low": _band_to_dict(cfg.low),
        "high": _band_to_dict(cfg.high),
    }


def config_from_dict(d: dict) -> CaConfig:
    return validate(
        CaConfig(
            low=_band_from_dict(d["low"]),
            high=_band_from_dict(d["high"]),
            scheme=Scheme(d["scheme"]),
            c0=float(d.get("c0", C0_EXACT)),
        )
    )


def save_config(cfg: CaConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")


def load_config(path) -> CaConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))
