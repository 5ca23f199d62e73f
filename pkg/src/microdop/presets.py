"""Named measurement-setup presets.

Setup 1: 3.7 GHz carrier, 200 MHz grid (1600 carriers, 1280 with energy),
8 us symbols, one two-blade propeller at 1500 rpm.
Setup 2: 7 GHz carrier, ~2.46 GHz grid (2500 carriers, 2048 with energy),
1.02 us symbols, two two-blade propellers at 1500 and 2000 rpm.

Geometry and scene strengths are not part of the published setups; the
defaults below are a desk-scale bistatic placement with the rotor hub(s)
near the scene origin and a static body point at the origin.
"""

from __future__ import annotations

import math

from .geometry import BistaticGeometry, in_plane_geometry
from .scatter import Propeller
from .scene import Scene, StaticScatterer
from .waveform import OfdmConfig, centered_active_band

PROPELLER_RADIUS = 0.1655  # m

DEFAULT_RANGE = 10.0       # m, per-leg range to the rotation center
DEFAULT_BISTATIC_ANGLE = math.radians(30.0)
# Scene strengths are calibrated only qualitatively: the central static
# line should sit a few tens of dB above the blade-flash lines.
DEFAULT_RCS_DENSITY = 0.05   # m^2/m
DEFAULT_BODY_RCS = 0.005     # m^2


def rpm_to_rad_per_s(rpm: float) -> float:
    return 2.0 * math.pi * rpm / 60.0


def setup1_ofdm(n_symbols: int = 16384) -> OfdmConfig:
    return OfdmConfig(
        f0=3.7e9,
        n_subcarriers=1600,
        active_band=centered_active_band(1600, 1280),
        symbol_duration=8e-6,
        n_symbols=n_symbols,
    )


def setup2_ofdm(n_symbols: int = 16384) -> OfdmConfig:
    return OfdmConfig(
        f0=7.0e9,
        n_subcarriers=2500,
        active_band=centered_active_band(2500, 2048),
        symbol_duration=1.02e-6,
        n_symbols=n_symbols,
    )


def setup1_scene(rpm: float = 1500.0, noise_power: float = 0.0,
                 seed: int = 0) -> Scene:
    return Scene(
        propellers=[Propeller(
            n_blades=2,
            blade_length=PROPELLER_RADIUS,
            rotation_rate=rpm_to_rad_per_s(rpm),
            rcs_density=DEFAULT_RCS_DENSITY,
        )],
        static_scatterers=[StaticScatterer(offset=(0.0, 0.0, 0.0),
                                           rcs=DEFAULT_BODY_RCS)],
        noise_power=noise_power,
        rng_seed=seed,
    )


def setup2_scene(noise_power: float = 0.0, seed: int = 0,
                 hub_separation: float = 0.5) -> Scene:
    half = 0.5 * hub_separation
    return Scene(
        propellers=[
            Propeller(
                n_blades=2,
                blade_length=PROPELLER_RADIUS,
                rotation_rate=rpm_to_rad_per_s(1500.0),
                center_offset=(-half, 0.0, 0.0),
                rcs_density=DEFAULT_RCS_DENSITY,
            ),
            Propeller(
                n_blades=2,
                blade_length=PROPELLER_RADIUS,
                rotation_rate=rpm_to_rad_per_s(2000.0),
                center_offset=(half, 0.0, 0.0),
                rcs_density=DEFAULT_RCS_DENSITY,
            ),
        ],
        static_scatterers=[StaticScatterer(offset=(0.0, 0.0, 0.0),
                                           rcs=DEFAULT_BODY_RCS)],
        noise_power=noise_power,
        rng_seed=seed,
    )


def default_geometry(bistatic_angle: float = DEFAULT_BISTATIC_ANGLE,
                     r_t: float = DEFAULT_RANGE,
                     r_r: float = DEFAULT_RANGE) -> BistaticGeometry:
    """In-plane symmetric Tx/Rx placement around the x axis."""
    return in_plane_geometry(r_t, r_r, bistatic_angle)
