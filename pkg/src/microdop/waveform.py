"""OFDM transmit-signal model: subcarrier grid, modulation symbols, timing.

Subcarriers are indexed n = 1..N with f_n = f0 + n/T; the active band
defaults to the centered block of the grid. The Newman phase schedule gives
a constant-magnitude spectrum with a low crest factor, matching a
channel-sounding excitation that is repeated every symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class OfdmConfig:
    f0: float                 # carrier frequency of the grid origin, Hz
    n_subcarriers: int        # total grid size N
    active_band: tuple[int, int]  # inclusive (first, last) 1-based subcarrier
    symbol_duration: float    # T, seconds
    n_symbols: int            # slow-time length M

    def __post_init__(self):
        n = self.n_subcarriers
        lo, hi = self.active_band
        if n < 1:
            raise ValueError("n_subcarriers must be >= 1")
        if not (1 <= lo <= hi <= n):
            raise ValueError(f"active_band {self.active_band} outside [1, {n}]")
        if self.symbol_duration <= 0:
            raise ValueError("symbol_duration must be positive")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.f0 <= 0:
            raise ValueError("f0 must be positive")

    @property
    def subcarrier_spacing(self) -> float:
        return 1.0 / self.symbol_duration

    @property
    def n_active(self) -> int:
        return self.active_band[1] - self.active_band[0] + 1

    @property
    def occupied_bandwidth(self) -> float:
        """Bandwidth actually carrying energy, n_active / T."""
        return self.n_active / self.symbol_duration

    @property
    def grid_bandwidth(self) -> float:
        """Full fast-time grid bandwidth N / T (sets the range cell size)."""
        return self.n_subcarriers / self.symbol_duration

    def active_indices(self) -> np.ndarray:
        """1-based subcarrier indices carrying energy."""
        lo, hi = self.active_band
        return np.arange(lo, hi + 1)

    def subcarrier_frequency(self, n) -> np.ndarray:
        return self.f0 + np.asarray(n) / self.symbol_duration

    def subcarrier_omega(self, n) -> np.ndarray:
        return 2.0 * np.pi * self.subcarrier_frequency(n)


def centered_active_band(n_subcarriers: int, n_active: int) -> tuple[int, int]:
    if not (1 <= n_active <= n_subcarriers):
        raise ValueError("n_active must lie in [1, n_subcarriers]")
    lo = (n_subcarriers - n_active) // 2 + 1
    return (lo, lo + n_active - 1)


def symbol_time(cfg: OfdmConfig, m, mu):
    """Authoritative discrete time t = (m + mu/N) * T.

    Every module evaluates rotation phases through this function so slow
    and fast time cannot drift apart.
    """
    return (np.asarray(m) + np.asarray(mu) / cfg.n_subcarriers) * cfg.symbol_duration


@dataclass
class ModulationGrid:
    """Complex modulation symbols D(n, m).

    ``values`` holds either a length-N vector (same sequence every symbol,
    the sounding case) or an (N, M) matrix for externally supplied payloads.
    Index 0 of the vector corresponds to subcarrier n = 1.
    """

    values: np.ndarray
    n_symbols: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim not in (1, 2):
            raise ValueError("grid values must be 1-D or 2-D")
        if self.values.ndim == 2 and self.values.shape[1] != self.n_symbols:
            raise ValueError("2-D grid must have n_symbols columns")

    @property
    def constant_across_symbols(self) -> bool:
        return self.values.ndim == 1

    def column(self, m: int) -> np.ndarray:
        """D(:, m) as a length-N vector (n = 1..N at indices 0..N-1)."""
        if self.constant_across_symbols:
            return self.values
        return self.values[:, m]


def newman_grid(cfg: OfdmConfig) -> ModulationGrid:
    """Newman-phase sounding sequence on the active band.

    D(n) = exp(j*pi*(k-1)^2 / K) for the k-th of K active subcarriers,
    unit magnitude on the active band and zero elsewhere, identical for
    every symbol.
    """
    k_total = cfg.n_active
    if k_total < 1:
        raise ValueError("active band is empty")
    k = np.arange(k_total)
    phases = np.pi * k.astype(float) ** 2 / k_total
    values = np.zeros(cfg.n_subcarriers, dtype=complex)
    lo, hi = cfg.active_band
    values[lo - 1 : hi] = np.exp(1j * phases)
    return ModulationGrid(values=values, n_symbols=cfg.n_symbols)


def synthesize_symbol(cfg: OfdmConfig, grid: ModulationGrid, m: int) -> np.ndarray:
    """Baseband fast-time frame x(mu, m) = sum_n D(n,m) exp(j 2 pi n mu / N).

    The carrier term is factored out; scattering phases reinstate it
    analytically. Implemented as an inverse DFT of the spectrum rolled so
    that vector index j holds subcarrier n = j (mod N).
    """
    if not (0 <= m < cfg.n_symbols):
        raise ValueError("symbol index out of range")
    d = grid.column(m)
    n = cfg.n_subcarriers
    spectrum = np.roll(d, 1)  # index j <- subcarrier n = j, with n=N at j=0
    return n * np.fft.ifft(spectrum)


def crest_factor(samples: np.ndarray) -> float:
    """Peak magnitude over RMS of a complex baseband waveform."""
    mag = np.abs(np.asarray(samples))
    rms = np.sqrt(np.mean(mag**2))
    if rms == 0:
        raise ValueError("zero-power waveform has no crest factor")
    return float(mag.max() / rms)
