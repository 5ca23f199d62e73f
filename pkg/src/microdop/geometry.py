"""Bistatic transmitter-target-receiver geometry for rotating scatter points.

Angle convention: zenith angles are measured from the rotation axis (+z),
azimuths in the rotation plane (x-y). A positive rotation rate means the
scatter point azimuth decreases with time (clockwise seen from +z); with
that convention the composite phase below drops straight out of the
small-target expansion of the two-leg range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Radicand of the modulation-amplitude factor can go very slightly negative
# from floating point at exact forward scatter; clamp instead of erroring.
_RADICAND_EPS = 0.0


@dataclass(frozen=True)
class BistaticGeometry:
    """Placement of Tx and Rx relative to a rotation center at the origin.

    r_t, r_r: ranges to the rotation center (m), both > 0
    zen_t, zen_r: zenith angles from the rotation axis (rad), in [0, pi]
    az_t, az_r: azimuths in the rotation plane (rad)
    """

    r_t: float
    r_r: float
    zen_t: float
    zen_r: float
    az_t: float
    az_r: float

    def __post_init__(self):
        if not (self.r_t > 0 and self.r_r > 0):
            raise ValueError("ranges r_t, r_r must be positive")
        for name in ("zen_t", "zen_r"):
            v = getattr(self, name)
            if not (0.0 <= v <= math.pi):
                raise ValueError(f"{name} must lie in [0, pi], got {v}")

    def tx_direction(self) -> np.ndarray:
        """Unit vector from the rotation center toward the transmitter."""
        return _unit(self.zen_t, self.az_t)

    def rx_direction(self) -> np.ndarray:
        return _unit(self.zen_r, self.az_r)

    def tx_position(self) -> np.ndarray:
        return self.r_t * self.tx_direction()

    def rx_position(self) -> np.ndarray:
        return self.r_r * self.rx_direction()


@dataclass(frozen=True)
class BistaticFactors:
    """Derived quantities of the rotating-point range model.

    a_b: modulation amplitude factor, in [0, 2]
    phi_b: composite initial phase (rad)
    r_o: total bistatic range of the rotation center (m)
    beta: bistatic angle (rad), in [0, pi]
    clamped: True if the radicand had to be clamped at zero
    """

    a_b: float
    phi_b: float
    r_o: float
    beta: float
    clamped: bool = False
    r_t: float = 0.0
    r_r: float = 0.0


def geometry_from_positions(tx: np.ndarray, rx: np.ndarray) -> BistaticGeometry:
    """Build a geometry from Cartesian Tx/Rx positions (rotation center at 0)."""
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    r_t = float(np.linalg.norm(tx))
    r_r = float(np.linalg.norm(rx))
    if r_t <= 0 or r_r <= 0:
        raise ValueError("Tx/Rx must not sit on the rotation center")
    return BistaticGeometry(
        r_t=r_t,
        r_r=r_r,
        zen_t=math.acos(np.clip(tx[2] / r_t, -1.0, 1.0)),
        zen_r=math.acos(np.clip(rx[2] / r_r, -1.0, 1.0)),
        az_t=math.atan2(tx[1], tx[0]) % TWO_PI,
        az_r=math.atan2(rx[1], rx[0]) % TWO_PI,
    )


def in_plane_geometry(r_t: float, r_r: float, bistatic_angle: float) -> BistaticGeometry:
    """Symmetric in-plane placement producing the requested bistatic angle."""
    half = 0.5 * bistatic_angle
    return BistaticGeometry(
        r_t=r_t, r_r=r_r,
        zen_t=0.5 * math.pi, zen_r=0.5 * math.pi,
        az_t=half % TWO_PI, az_r=(-half) % TWO_PI,
    )


def bistatic_angle(geom: BistaticGeometry) -> float:
    """Angle at the target between the lines of sight to Tx and Rx."""
    cos_b = float(np.dot(geom.tx_direction(), geom.rx_direction()))
    return math.acos(np.clip(cos_b, -1.0, 1.0))


def bistatic_factors(geom: BistaticGeometry) -> BistaticFactors:
    """Amplitude factor, composite phase, total range and bistatic angle.

    The amplitude factor is
        A = sqrt(4 cos^2(beta/2) - (cos(zen_t) + cos(zen_r))^2)
    and the composite phase
        phi = az_t - atan2(sin(zen_r) sin(az_t - az_r),
                           sin(zen_t) + sin(zen_r) cos(az_t - az_r))
    so that a point at radius l has bistatic range
    r_o - a_b * l * cos(omega*t + phi_b).
    """
    beta = bistatic_angle(geom)
    radicand = 4.0 * math.cos(0.5 * beta) ** 2 - (
        math.cos(geom.zen_t) + math.cos(geom.zen_r)
    ) ** 2
    clamped = radicand < _RADICAND_EPS
    a_b = math.sqrt(max(radicand, 0.0))
    d_az = geom.az_t - geom.az_r
    phi_b = geom.az_t - math.atan2(
        math.sin(geom.zen_r) * math.sin(d_az),
        math.sin(geom.zen_t) + math.sin(geom.zen_r) * math.cos(d_az),
    )
    return BistaticFactors(
        a_b=a_b,
        phi_b=phi_b,
        r_o=geom.r_t + geom.r_r,
        beta=beta,
        clamped=clamped,
        r_t=geom.r_t,
        r_r=geom.r_r,
    )


def rotating_point_bistatic_range(factors: BistaticFactors, l, omega, t):
    """Bistatic range of a point at radius l on the rotating structure.

    Accepts scalars or numpy arrays for l and t.
    """
    l = np.asarray(l, dtype=float)
    if np.any(l < 0):
        raise ValueError("radius l must be non-negative")
    return factors.r_o - factors.a_b * l * np.cos(omega * np.asarray(t) + factors.phi_b)


def _unit(zen: float, az: float) -> np.ndarray:
    s = math.sin(zen)
    return np.array([s * math.cos(az), s * math.sin(az), math.cos(zen)])
