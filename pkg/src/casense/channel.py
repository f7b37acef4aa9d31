"""Point-target delay/Doppler channel applied at the symbol-grid level.

A target at range R and closing velocity v imprints a phase ramp
``exp(-j 2 pi n delta_f 2R/c0)`` across subcarriers and
``exp(+j 2 pi m T 2 v fc/c0)`` across symbols. Dividing the received pilot
symbols by the known unit-modulus transmit symbols leaves exactly these
ramps (times the complex gain) plus noise of unchanged distribution: the
channel information matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import BandConfig
from .errors import EmptyScene, VelocityAmbiguityWarning
from .grids import TxGrid


@dataclass(frozen=True)
class Target:
    """Point target: range (m), closing velocity (m/s), complex gain."""

    range_m: float
    velocity_mps: float
    gain: complex = 1.0 + 0j

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("range must be nonnegative")
        if self.gain == 0 or not np.isfinite(self.gain):
            raise ValueError("gain must be finite and nonzero")


@dataclass(frozen=True)
class TargetScene:
    """Targets plus per-sample complex noise level and RNG seed."""

    targets: tuple[Target, ...]
    noise_sigma: float = 0.0
    seed: int | tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")


@dataclass(frozen=True)
class ChannelInfoMatrix:
    """Received-over-transmitted symbol ratios on the pilot positions."""

    values: np.ndarray  # complex, (N, M), zero off-mask
    mask: np.ndarray  # bool, (N, M)
    band: BandConfig


def sigma_for_snr(snr_db: float, gain: complex = 1.0 + 0j) -> float:
    """Noise std giving per-pilot-sample SNR |gain|^2 / sigma^2 = 10^(snr/10).

    sigma is the total standard deviation of the circular complex noise
    (E|w|^2 = sigma^2).
    """
    g = abs(gain)
    if g == 0:
        raise ValueError("gain must be nonzero")
    return g * 10.0 ** (-snr_db / 20.0)


def check_velocity_unambiguous(band: BandConfig, velocity_mps: float, c0: float) -> None:
    """Warn when |v| exceeds the band's unambiguous Doppler span."""
    frac = abs(velocity_mps) * 2.0 * band.fc * band.symbol_duration / c0
    if frac >= 0.5:
        warnings.warn(
            f"|v|={abs(velocity_mps)} m/s aliases: normalized Doppler "
            f"{frac:.3f} >= 1/2 at fc={band.fc:g} Hz",
            VelocityAmbiguityWarning,
            stacklevel=3,
        )


def simulate_channel_info(
    tx: TxGrid, scene: TargetScene, c0: float = 299_792_458.0
) -> ChannelInfoMatrix:
    """Apply the delay/Doppler channel plus AWGN and divide out the pilots.

    For each pilot position (n, m) the value is

        sum_targets  h * exp(-j 2 pi n delta_f 2R/c0)
                       * exp(+j 2 pi m T 2 v fc/c0)   +   w / d_tx(n, m)

    with w i.i.d. circular complex Gaussian of std ``scene.noise_sigma``.
    Division by the unit-modulus pilot leaves the noise distribution
    unchanged. Non-pilot positions stay zero. Deterministic per scene seed.
    """
    if not scene.targets:
        raise EmptyScene("estimation needs at least one target")
    band = tx.band
    n = np.arange(band.n_subcarriers)[:, None]
    m = np.arange(band.n_symbols)[None, :]
    t_sym = band.symbol_duration
    r_max = c0 / (2.0 * band.delta_f)
    values = np.zeros(tx.mask.shape, dtype=complex)
    for tgt in scene.targets:
        if tgt.range_m >= r_max:
            raise ValueError(
                f"range {tgt.range_m} m is beyond the unambiguous span {r_max} m"
            )
        check_velocity_unambiguous(band, tgt.velocity_mps, c0)
        k_r = np.exp(-2j * np.pi * n * band.delta_f * 2.0 * tgt.range_m / c0)
        k_d = np.exp(2j * np.pi * m * t_sym * 2.0 * tgt.velocity_mps * band.fc / c0)
        values += tgt.gain * (k_r * k_d)
    if scene.noise_sigma > 0:
        rng = np.random.default_rng(scene.seed)
        w = rng.standard_normal(values.shape) + 1j * rng.standard_normal(values.shape)
        w *= scene.noise_sigma / np.sqrt(2.0)
        values += w / np.where(tx.mask, tx.symbols, 1.0)
    values[~tx.mask] = 0.0
    return ChannelInfoMatrix(values=values, mask=tx.mask.copy(), band=band)
