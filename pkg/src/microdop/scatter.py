"""Propeller echo models.

Three routes to the same physics:

* ``closed_form_returns`` — the closed-form bistatic OFDM model: per
  fast-time cell the blade segment inside the cell contributes a
  phase-centered sinc term.
* ``point_oracle_returns`` — brute-force coherent sum over discretized
  blade points, used as the independent cross-check.
* ``classic_cw_returns`` — the classic narrowband monostatic CW rotor
  model, the low-resolution reference.

The fast-time delay cell adopted here is one sample wide (cT/N in
bistatic range); returns whose bistatic range exceeds c*T wrap modulo the
symbol length, as the inverse-DFT structure implies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .geometry import TWO_PI, BistaticFactors
from .waveform import ModulationGrid, OfdmConfig

# |A_B * cos(rotation phase)| below this means the blade is range-degenerate:
# every point sits at the hub range within numerical resolution.
_DEGENERATE_EPS = 1e-9


@dataclass(frozen=True)
class Propeller:
    n_blades: int
    blade_length: float        # m
    rotation_rate: float       # rad/s, signed (sign = rotation direction)
    initial_phase: float = 0.0  # blade-1 azimuth at t = 0, rad
    center_offset: tuple[float, float, float] = (0.0, 0.0, 0.0)  # hub vs scene origin, m
    rcs_density: float = 0.01  # m^2 per m of blade length

    def __post_init__(self):
        if self.n_blades < 1:
            raise ValueError("n_blades must be >= 1")
        if self.blade_length <= 0:
            raise ValueError("blade_length must be positive")
        if self.rcs_density < 0:
            raise ValueError("rcs_density must be non-negative")

    @property
    def rotation_frequency(self) -> float:
        """Rotations per second, unsigned."""
        return abs(self.rotation_rate) / TWO_PI


@dataclass
class EchoFrame:
    """One fast-time frame of baseband echo samples y(mu, m)."""

    samples: np.ndarray        # complex, length N
    symbol_index: int
    range_bin_width: float     # bistatic meters per fast-time sample (cT/N)

    def range_bin_axis(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.range_bin_width


def blade_phase(factors: BistaticFactors, prop: Propeller, i: int) -> float:
    """Cosine-argument phase of blade i (0-based) in the range model."""
    return factors.phi_b - prop.initial_phase + TWO_PI * i / prop.n_blades


def radar_amplitude(sigma: float, r_t: float, r_r: float, f, gamma0: float = 1.0):
    """Returned-signal amplitude sqrt(c*sigma / (4 pi^3 R_T^2 R_R^2 f^2)).

    Monostatic usage passes r_t = r_r = R; the bistatic power budget
    replaces R^4 by R_T^2 * R_R^2.
    """
    f = np.asarray(f, dtype=float)
    if r_t <= 0 or r_r <= 0:
        raise ValueError("ranges must be positive")
    if np.any(f <= 0):
        raise ValueError("frequency must be positive")
    if sigma < 0:
        raise ValueError("RCS must be non-negative")
    return gamma0 * np.sqrt(C_LIGHT * sigma / (4.0 * np.pi**3 * (r_t * r_r) ** 2)) / f


def _amplitude_density(factors: BistaticFactors, prop: Propeller, f_n, gamma0=1.0):
    """Per-subcarrier amplitude for unit (l2-l1); scaled by sqrt(l2-l1) later."""
    return radar_amplitude(prop.rcs_density, factors.r_t, factors.r_r, f_n, gamma0)


def _med3(center, a, b):
    """Median of {center, a, b}, elementwise."""
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return np.minimum(np.maximum(lo, center), hi)


def _limits_for_cell(r_lo, r_hi, factors: BistaticFactors, prop: Propeller,
                     cos_chi):
    """Blade-length interval [l1, l2] illuminated by the range cell [r_lo, r_hi).

    l1 = median{0, a, b}, l2 = median{L, a, b} with a, b the radii whose
    model range hits the two cell boundaries, then clipped to [0, L]. When
    the denominator vanishes the blade is range-degenerate: the whole
    blade if the hub range falls in the cell, nothing otherwise.
    """
    cos_chi = np.asarray(cos_chi, dtype=float)
    lb = prop.blade_length
    denom = factors.a_b * cos_chi
    safe = np.where(np.abs(denom) < _DEGENERATE_EPS, 1.0, denom)
    a = (factors.r_o - r_lo) / safe
    b = (factors.r_o - r_hi) / safe
    l1 = np.clip(_med3(0.0, a, b), 0.0, lb)
    l2 = np.clip(_med3(lb, a, b), 0.0, lb)
    degenerate = np.abs(denom) < _DEGENERATE_EPS
    if np.any(degenerate):
        hub_in_cell = (r_lo <= factors.r_o) & (factors.r_o < r_hi)
        l1 = np.where(degenerate, 0.0, l1)
        l2 = np.where(degenerate, np.where(hub_in_cell, lb, 0.0), l2)
    return l1, l2


def blade_limits(mu: int, i: int, factors: BistaticFactors, prop: Propeller,
                 cfg: OfdmConfig, t: float) -> tuple[float, float]:
    """Illuminated blade-length interval of blade i for fast-time cell mu."""
    n = cfg.n_subcarriers
    ct = C_LIGHT * cfg.symbol_duration
    cell = ct / n
    # pick the range-ambiguity branch whose cell lies nearest the hub range
    k = round(factors.r_o / ct - (mu + 0.5) / n)
    r_lo = (k + mu / n) * ct
    r_hi = r_lo + cell
    cos_chi = math.cos(prop.rotation_rate * t + blade_phase(factors, prop, i))
    l1, l2 = _limits_for_cell(r_lo, r_hi, factors, prop, cos_chi)
    return float(l1), float(l2)


def _sinc(x):
    """Unnormalized sinc: sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


def _active_cells(factors: BistaticFactors, prop: Propeller, cfg: OfdmConfig):
    """Global cell indices g (bin = g mod N) whose range band can touch the blade."""
    cell = C_LIGHT * cfg.symbol_duration / cfg.n_subcarriers
    band = factors.a_b * prop.blade_length
    g_lo = math.floor((factors.r_o - band) / cell)
    g_hi = math.floor((factors.r_o + band) / cell)
    return np.arange(g_lo, g_hi + 1)


def closed_form_frames(factors: BistaticFactors, prop: Propeller,
                       cfg: OfdmConfig, grid: ModulationGrid,
                       m_indices=None, frozen_time: bool = False,
                       gamma0: float = 1.0,
                       chunk: int = 2048) -> np.ndarray:
    """Closed-form echo frames of one propeller, shape (len(m_indices), N).

    frozen_time=True evaluates the rotation phase at the symbol start
    (t = m*T) instead of per fast-time sample; off by default.
    """
    n = cfg.n_subcarriers
    t_sym = cfg.symbol_duration
    cell = C_LIGHT * t_sym / n
    if m_indices is None:
        m_indices = np.arange(cfg.n_symbols)
    m_indices = np.asarray(m_indices)
    n_act = cfg.active_indices()
    w_over_c = cfg.subcarrier_omega(n_act) / C_LIGHT
    amp_n = _amplitude_density(factors, prop, cfg.subcarrier_frequency(n_act), gamma0)

    out = np.zeros((len(m_indices), n), dtype=complex)
    if not grid.constant_across_symbols:
        chunk = 1  # per-symbol D columns; keep the loop simple
    cells = _active_cells(factors, prop, cfg)

    for start in range(0, len(m_indices), chunk):
        sel = slice(start, start + chunk)
        m_blk = m_indices[sel]
        for g in cells:
            mu = int(g % n)
            r_lo = g * cell
            r_hi = r_lo + cell
            t = (m_blk if frozen_time else m_blk + mu / n) * t_sym
            if grid.constant_across_symbols:
                d_mu = grid.values[n_act - 1]
            else:
                d_mu = grid.column(int(m_blk[0]))[n_act - 1]
            base = d_mu * np.exp(2j * np.pi * n_act * mu / n) * amp_n
            acc = np.zeros(len(m_blk), dtype=complex)
            for i in range(prop.n_blades):
                chi = prop.rotation_rate * t + blade_phase(factors, prop, i)
                cos_chi = np.cos(chi)
                l1, l2 = _limits_for_cell(r_lo, r_hi, factors, prop, cos_chi)
                dl = l2 - l1
                hit = dl > 0
                if not np.any(hit):
                    continue
                dr_plus = factors.a_b * 0.5 * (l2[hit] + l1[hit]) * cos_chi[hit]
                dr_minus = factors.a_b * 0.5 * dl[hit] * cos_chi[hit]
                phase = np.exp(1j * np.outer(dr_plus - factors.r_o, w_over_c))
                snc = _sinc(np.outer(dr_minus, w_over_c))
                weight = np.sqrt(dl[hit]) * 0.5 * dl[hit]
                acc[hit] += weight * ((phase * snc) @ base)
            out[sel, mu] += acc
    return out


def closed_form_returns(factors: BistaticFactors, prop: Propeller,
                        cfg: OfdmConfig, grid: ModulationGrid, m: int,
                        frozen_time: bool = False,
                        gamma0: float = 1.0) -> EchoFrame:
    """One symbol of the closed-form model (noise-free; the scene owns noise)."""
    row = closed_form_frames(factors, prop, cfg, grid,
                             m_indices=np.array([m]),
                             frozen_time=frozen_time, gamma0=gamma0)[0]
    return EchoFrame(samples=row, symbol_index=m,
                     range_bin_width=C_LIGHT * cfg.symbol_duration / cfg.n_subcarriers)


def point_oracle_frames(factors: BistaticFactors, prop: Propeller,
                        cfg: OfdmConfig, grid: ModulationGrid,
                        k_points: int, m_indices=None,
                        gamma0: float = 1.0) -> np.ndarray:
    """Riemann-sum echo of the blade as k_points discrete scatter points.

    Each point carries its own model-range phase per subcarrier; the
    illuminated length of a cell is estimated from the point count in it,
    keeping the route independent of the closed-form interval algebra.
    """
    if k_points < 1:
        raise ValueError("k_points must be >= 1")
    n = cfg.n_subcarriers
    t_sym = cfg.symbol_duration
    ct = C_LIGHT * t_sym
    cell = ct / n
    if m_indices is None:
        m_indices = np.arange(cfg.n_symbols)
    m_indices = np.asarray(m_indices)
    n_act = cfg.active_indices()
    w_over_c = cfg.subcarrier_omega(n_act) / C_LIGHT
    amp_n = _amplitude_density(factors, prop, cfg.subcarrier_frequency(n_act), gamma0)

    dl = prop.blade_length / k_points
    l_k = (np.arange(k_points) + 0.5) * dl

    out = np.zeros((len(m_indices), n), dtype=complex)
    for row, m in enumerate(m_indices):
        d_col = grid.column(int(m))[n_act - 1]
        coef = d_col * amp_n
        for i in range(prop.n_blades):
            phi = blade_phase(factors, prop, i)
            # cell assignment at symbol start; the intra-symbol shift is
            # far below a cell for any sane rotor
            r0 = factors.r_o - factors.a_b * l_k * math.cos(
                prop.rotation_rate * m * t_sym + phi)
            mu_k = np.floor(r0 / cell).astype(int) % n
            t_k = (m + mu_k / n) * t_sym
            r_k = factors.r_o - factors.a_b * l_k * np.cos(
                prop.rotation_rate * t_k + phi)
            counts = np.bincount(mu_k, minlength=n)
            seg_len = counts[mu_k] * dl
            weight = 0.5 * np.sqrt(seg_len) * dl
            exponent = 1j * (np.outer(mu_k, TWO_PI * n_act / n)
                             - np.outer(r_k, w_over_c))
            contrib = weight * (np.exp(exponent) @ coef)
            np.add.at(out[row], mu_k, contrib)
    return out


def point_oracle_returns(factors: BistaticFactors, prop: Propeller,
                         cfg: OfdmConfig, grid: ModulationGrid, m: int,
                         k_points: int, gamma0: float = 1.0) -> EchoFrame:
    row = point_oracle_frames(factors, prop, cfg, grid, k_points,
                              m_indices=np.array([m]), gamma0=gamma0)[0]
    return EchoFrame(samples=row, symbol_index=m,
                     range_bin_width=C_LIGHT * cfg.symbol_duration / cfg.n_subcarriers)


def classic_cw_returns(prop: Propeller, elevation: float, r_o_mono: float,
                       f0: float, t, gamma0: float = 1.0) -> np.ndarray:
    """Classic monostatic CW slow-time rotor returns (narrowband reference).

    elevation is measured from the rotation plane; r_o_mono is the one-way
    radar-to-hub range.
    """
    t = np.asarray(t, dtype=float)
    w0_over_c = TWO_PI * f0 / C_LIGHT
    cos_el = math.cos(elevation)
    lb = prop.blade_length
    gamma = radar_amplitude(prop.rcs_density * lb, r_o_mono, r_o_mono, f0, gamma0)
    out = np.zeros_like(t, dtype=complex)
    for i in range(prop.n_blades):
        phi_i = prop.initial_phase + TWO_PI * i / prop.n_blades
        mod = np.cos(prop.rotation_rate * t + phi_i) * cos_el
        out += gamma * np.exp(
            1j * w0_over_c * (-2.0 * r_o_mono + lb * mod)
        ) * (0.5 * lb) * _sinc(w0_over_c * lb * mod)
    return out
