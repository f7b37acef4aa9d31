"""Transmit modulation-symbol grids with pilot masks.

Grids are oriented subcarrier-major: rows index subcarriers n, columns index
OFDM symbols m. Non-pilot resource elements carry zeros; the sensing chain
only ever reads pilot positions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .config import BandConfig, Block, Comb

_QPSK = np.exp(1j * np.pi * (2 * np.arange(4) + 1) / 4)  # unit-modulus corners


@dataclass(frozen=True)
class TxGrid:
    """N x M transmit grid: unit-modulus symbols on pilot positions, zeros off."""

    symbols: np.ndarray  # complex, (N, M)
    mask: np.ndarray  # bool, (N, M)
    band: BandConfig


def pilot_mask(band: BandConfig) -> np.ndarray:
    """Boolean (N, M) mask of pilot resource elements."""
    n = np.arange(band.n_subcarriers)
    m = np.arange(band.n_symbols)
    if isinstance(band.pilot, Comb):
        return ((n % band.pilot.interval) == 0)[:, None] & np.ones(
            (1, band.n_symbols), dtype=bool
        )
    return np.ones((band.n_subcarriers, 1), dtype=bool) & ((m % band.pilot.interval) == 0)[None, :]


def pilot_index_sets(band: BandConfig) -> tuple[np.ndarray, np.ndarray]:
    """Exact (subcarrier indices, symbol indices) occupied by pilots.

    Comb with interval K: subcarriers {0, K, ..., N-K}, all M symbols.
    Block with interval Q: all N subcarriers, symbols {0, Q, ..., M-Q}.
    These are the index sets the Fisher-information sums run over.
    """
    if isinstance(band.pilot, Comb):
        return (
            np.arange(0, band.n_subcarriers, band.pilot.interval),
            np.arange(band.n_symbols),
        )
    return (
        np.arange(band.n_subcarriers),
        np.arange(0, band.n_symbols, band.pilot.interval),
    )


def generate_tx_grid(band: BandConfig, seed) -> TxGrid:
    """Fill pilot positions with uniformly random QPSK symbols.

    Deterministic per seed. Off-pilot positions are exactly zero.
    """
    rng = np.random.default_rng(seed)
    mask = pilot_mask(band)
    symbols = np.zeros(mask.shape, dtype=complex)
    symbols[mask] = _QPSK[rng.integers(0, 4, size=int(mask.sum()))]
    return TxGrid(symbols=symbols, mask=mask, band=band)


def dump_grid_csv(values: np.ndarray, mask: np.ndarray, path) -> None:
    """Debug dump of a complex grid: one row per (n, m) with re/im/mask."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "re", "im", "mask"])
        n_rows, n_cols = values.shape
        for n in range(n_rows):
            for m in range(n_cols):
                writer.writerow(
                    [n, m, repr(values[n, m].real), repr(values[n, m].imag), int(mask[n, m])]
                )
