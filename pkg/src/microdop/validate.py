"""Built-in self-validation: quick oracle and invariant checks.

These run from the CLI (`microdop validate`) without a test harness; the
full pytest suite covers the same ground at higher depth.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import (BistaticGeometry, bistatic_factors, in_plane_geometry,
                       rotating_point_bistatic_range)
from .scatter import Propeller, _limits_for_cell, blade_limits
from .waveform import OfdmConfig, centered_active_band, newman_grid, synthesize_symbol
from . import presets


def _check_geometry_fit() -> tuple[bool, str]:
    """Fit the exact two-leg range of a rotating point to the range model."""
    geom = BistaticGeometry(r_t=40.0, r_r=55.0,
                            zen_t=math.radians(80), zen_r=math.radians(70),
                            az_t=0.0, az_r=math.radians(40))
    fac = bistatic_factors(geom)
    omega, l = 2 * math.pi * 25.0, 0.1
    t = np.linspace(0, 2 * math.pi / omega, 4096, endpoint=False)
    pos = l * np.stack([np.cos(-omega * t), np.sin(-omega * t),
                        np.zeros_like(t)], axis=1)
    exact = (np.linalg.norm(pos - geom.tx_position(), axis=1)
             + np.linalg.norm(pos - geom.rx_position(), axis=1))
    coef = 2.0 / len(t) * np.sum(exact * np.exp(-1j * omega * t))
    a_fit = abs(coef) / l
    phi_fit = float(np.angle(-coef))
    err_a = abs(a_fit - fac.a_b) / fac.a_b
    err_p = abs((phi_fit - fac.phi_b + math.pi) % (2 * math.pi) - math.pi)
    ok = err_a < 0.01 and err_p < 0.01
    return ok, f"amplitude err {err_a:.2e}, phase err {err_p:.2e} rad"


def _check_parseval() -> tuple[bool, str]:
    cfg = OfdmConfig(f0=3.7e9, n_subcarriers=256,
                     active_band=centered_active_band(256, 128),
                     symbol_duration=8e-6, n_symbols=1)
    grid = newman_grid(cfg)
    x = synthesize_symbol(cfg, grid, 0)
    lhs = np.sum(np.abs(x) ** 2)
    rhs = cfg.n_subcarriers * np.sum(np.abs(grid.values) ** 2)
    err = abs(lhs - rhs) / rhs
    return err < 1e-10, f"relative error {err:.2e}"


def _check_blade_limits() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    cfg = presets.setup1_ofdm(n_symbols=1)
    prop = presets.setup1_scene().propellers[0]
    worst = 0.0
    for _ in range(2000):
        geom = in_plane_geometry(10.0, 10.0, rng.uniform(0.05, math.pi))
        fac = bistatic_factors(geom)
        t = rng.uniform(0, 0.04)
        mu = int(rng.integers(0, cfg.n_subcarriers))
        l1, l2 = blade_limits(mu, 0, fac, prop, cfg, t)
        if not (0.0 <= l1 <= l2 <= prop.blade_length):
            return False, f"interval ({l1}, {l2}) escapes [0, L]"
        worst = max(worst, l2 - l1)
    return True, f"2000 draws OK, widest interval {worst:.4f} m"


def _check_range_model() -> tuple[bool, str]:
    geom = in_plane_geometry(10.0, 10.0, math.radians(60))
    fac = bistatic_factors(geom)
    omega, l = 2 * math.pi * 25.0, 0.1655
    t = np.linspace(0, 2 * 2 * math.pi / omega, 512, endpoint=False)
    r = rotating_point_bistatic_range(fac, l, omega, t)
    period_ok = np.allclose(r[:256], r[256:], rtol=0, atol=1e-9)
    bound_ok = np.all(np.abs(r - fac.r_o) <= fac.a_b * l + 1e-12)
    return period_ok and bound_ok, "periodicity and amplitude bound"


def _check_determinism() -> tuple[bool, str]:
    cfg = presets.setup1_ofdm(n_symbols=4)
    a = newman_grid(cfg).values
    b = newman_grid(cfg).values
    ok = np.array_equal(a, b)
    return ok, "identical config gives bit-identical grid"


CHECKS = [
    ("geometry range-model fit vs exact two-leg range", _check_geometry_fit),
    ("rotating-point range periodicity and bound", _check_range_model),
    ("waveform Parseval identity", _check_parseval),
    ("blade-limit interval invariants (randomized)", _check_blade_limits),
    ("modulation grid determinism", _check_determinism),
]


def run_validation(verbose: bool = True) -> bool:
    """Run all self-checks; returns True when everything passes."""
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
