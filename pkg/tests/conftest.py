"""Shared fixtures and helpers for the microdop test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.constants import c as C_LIGHT

from microdop.geometry import bistatic_factors, in_plane_geometry
from microdop.scatter import Propeller, blade_phase, blade_limits
from microdop.waveform import OfdmConfig, centered_active_band


def small_cfg(n_subcarriers: int = 64, n_active: int | None = None,
              symbol_duration: float = 1e-4, n_symbols: int = 256,
              f0: float = 3.7e9) -> OfdmConfig:
    """Cheap grid: the whole blade fits in one coarse range cell."""
    if n_active is None:
        n_active = n_subcarriers
    return OfdmConfig(
        f0=f0,
        n_subcarriers=n_subcarriers,
        active_band=centered_active_band(n_subcarriers, n_active),
        symbol_duration=symbol_duration,
        n_symbols=n_symbols,
    )


def hrr_cfg(n_symbols: int = 16) -> OfdmConfig:
    """Fine grid: the blade spans ~10 range cells (cell = 1.46 cm)."""
    return OfdmConfig(
        f0=7.0e9,
        n_subcarriers=2048,
        active_band=centered_active_band(2048, 1024),
        symbol_duration=1e-7,
        n_symbols=n_symbols,
    )


def factors_at(beta_deg: float, r_t: float = 10.0, r_r: float = 10.0):
    return bistatic_factors(in_plane_geometry(r_t, r_r, math.radians(beta_deg)))


def two_blade_prop(f_rot: float = 25.0, **kw) -> Propeller:
    kw.setdefault("rcs_density", 0.05)
    return Propeller(n_blades=2, blade_length=0.1655,
                     rotation_rate=2.0 * math.pi * f_rot, **kw)


def interval_oracle_check(rng: np.random.Generator, cfg: OfdmConfig,
                          prop: Propeller, n_draws: int,
                          l_points: int = 2001) -> float:
    """Cross-check blade_limits against a dense-grid interval intersection.

    For each random draw the blade is sampled on a fine radius grid; the
    set of radii whose wrapped bistatic range lands in cell mu must match
    the closed-form (l1, l2) interval in both measure and endpoints.
    Returns the worst measure mismatch seen (for diagnostics).
    """
    n = cfg.n_subcarriers
    ct = C_LIGHT * cfg.symbol_duration
    cell = ct / n
    lb = prop.blade_length
    l_grid = np.linspace(0.0, lb, l_points)
    tol = 2.0 * lb / (l_points - 1)
    worst = 0.0
    for _ in range(n_draws):
        geom = in_plane_geometry(rng.uniform(5.0, 50.0), rng.uniform(5.0, 50.0),
                                 rng.uniform(0.05, math.pi - 0.05))
        fac = bistatic_factors(geom)
        t = float(rng.uniform(0.0, 0.05))
        g_hub = math.floor(fac.r_o / cell)
        mu = int((g_hub + rng.integers(-25, 26)) % n)
        l1, l2 = blade_limits(mu, 0, fac, prop, cfg, t)
        assert 0.0 <= l1 <= l2 <= lb
        r = fac.r_o - fac.a_b * l_grid * math.cos(
            prop.rotation_rate * t + blade_phase(fac, prop, 0))
        inside = np.floor((r % ct) / cell).astype(int) == mu
        measure = float(np.mean(inside)) * lb
        mismatch = abs((l2 - l1) - measure)
        assert mismatch <= tol, (fac, t, mu, l1, l2, measure)
        if np.any(inside):
            assert l_grid[inside].min() >= l1 - tol
            assert l_grid[inside].max() <= l2 + tol
        worst = max(worst, mismatch)
    return worst


def normalized_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """|<a, b>| / (||a|| ||b||) for complex vectors."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    return float(abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
