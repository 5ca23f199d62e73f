"""Scene composition: multiple rotors, static body scatterers, noise.

Each rotor gets its own geometry (hub offset shifts the Tx/Rx legs via
exact vector geometry); static parts are discrete point scatterers with a
fixed bistatic range. Noise is injected exactly once, here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .geometry import BistaticGeometry, bistatic_factors, geometry_from_positions
from .scatter import Propeller, closed_form_frames, radar_amplitude
from .waveform import ModulationGrid, OfdmConfig


@dataclass(frozen=True)
class StaticScatterer:
    offset: tuple[float, float, float]  # position relative to scene origin, m
    rcs: float                          # m^2

    def __post_init__(self):
        if self.rcs < 0:
            raise ValueError("rcs must be non-negative")


@dataclass
class Scene:
    propellers: list[Propeller] = field(default_factory=list)
    static_scatterers: list[StaticScatterer] = field(default_factory=list)
    noise_power: float = 0.0   # complex AWGN variance per baseband sample
    rng_seed: int = 0

    def __post_init__(self):
        if self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")


@dataclass
class FrameSet:
    """Stack of per-symbol baseband frames y(mu, m) with its grid metadata.

    symbol_stride > 1 means only every stride-th symbol of the nominal
    slow-time grid was generated (the stored rows are still consecutive).
    """

    samples: np.ndarray  # complex, shape (frames, N)
    cfg: OfdmConfig
    symbol_stride: int = 1

    @property
    def range_bin_width(self) -> float:
        """Bistatic meters per fast-time sample, cT/N."""
        return C_LIGHT * self.cfg.symbol_duration / self.cfg.n_subcarriers

    @property
    def frame_interval(self) -> float:
        """Seconds between stored frames."""
        return self.cfg.symbol_duration * self.symbol_stride


def offset_geometry(geom: BistaticGeometry, offset) -> BistaticGeometry:
    """Geometry as seen from a scatterer displaced from the scene origin."""
    offset = np.asarray(offset, dtype=float)
    return geometry_from_positions(geom.tx_position() - offset,
                                   geom.rx_position() - offset)


def simulate_scene(scene: Scene, geom: BistaticGeometry, cfg: OfdmConfig,
                   grid: ModulationGrid, frozen_time: bool = False,
                   gamma0: float = 1.0, add_noise: bool = True,
                   stride: int = 1) -> FrameSet:
    """Coherent sum of all rotor and static returns, plus seeded noise.

    stride > 1 generates only every stride-th symbol, which is exactly
    slow-time subsampling applied at generation time.
    """
    if not scene.propellers and not scene.static_scatterers:
        raise ValueError("scene has neither propellers nor static scatterers")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    n = cfg.n_subcarriers
    m_indices = np.arange(0, cfg.n_symbols, stride)
    frames = np.zeros((len(m_indices), n), dtype=complex)

    for prop in scene.propellers:
        rotor_geom = offset_geometry(geom, prop.center_offset)
        factors = bistatic_factors(rotor_geom)
        frames += closed_form_frames(factors, prop, cfg, grid,
                                     m_indices=m_indices,
                                     frozen_time=frozen_time, gamma0=gamma0)

    for sc in scene.static_scatterers:
        frames += _static_return(sc, geom, cfg, grid, m_indices, gamma0)

    if add_noise:
        inject_noise(frames, scene.noise_power, scene.rng_seed)
    return FrameSet(samples=frames, cfg=cfg, symbol_stride=stride)


def _static_return(sc: StaticScatterer, geom: BistaticGeometry,
                   cfg: OfdmConfig, grid: ModulationGrid,
                   m_indices, gamma0: float) -> np.ndarray:
    offset = np.asarray(sc.offset, dtype=float)
    leg_t = float(np.linalg.norm(geom.tx_position() - offset))
    leg_r = float(np.linalg.norm(geom.rx_position() - offset))
    r = leg_t + leg_r
    n = cfg.n_subcarriers
    ct = C_LIGHT * cfg.symbol_duration
    mu = int(math.floor((r % ct) / (ct / n)))
    n_act = cfg.active_indices()
    amp_n = radar_amplitude(sc.rcs, leg_t, leg_r,
                            cfg.subcarrier_frequency(n_act), gamma0)
    w_over_c = cfg.subcarrier_omega(n_act) / C_LIGHT
    phase = np.exp(1j * (2.0 * np.pi * n_act * mu / n - w_over_c * r))
    out = np.zeros((len(m_indices), n), dtype=complex)
    if grid.constant_across_symbols:
        out[:, mu] = np.sum(grid.values[n_act - 1] * amp_n * phase)
    else:
        for row, m in enumerate(m_indices):
            out[row, mu] = np.sum(grid.column(int(m))[n_act - 1] * amp_n * phase)
    return out


def inject_noise(frames, noise_power: float, seed: int):
    """Add circularly-symmetric complex AWGN in place, variance noise_power.

    Each symbol draws from its own child stream of the seed, so frame-
    parallel and serial execution produce identical output. Accepts a raw
    (M, N) array or a FrameSet; returns its argument.
    """
    samples = frames.samples if isinstance(frames, FrameSet) else frames
    if noise_power < 0:
        raise ValueError("noise_power must be non-negative")
    if noise_power == 0:
        return frames
    scale = math.sqrt(noise_power / 2.0)
    children = np.random.SeedSequence(seed).spawn(samples.shape[0])
    for m, child in enumerate(children):
        rng = np.random.default_rng(child)
        block = rng.standard_normal((2, samples.shape[1]))
        samples[m] += scale * (block[0] + 1j * block[1])
    return frames


def noise_power_for_snr(frames, snr_db: float, range_bin: int | None = None) -> float:
    """Noise variance giving the requested SNR against the simulated signal.

    Signal power is the mean |y|^2 over the chosen range bin (the dominant
    bin when None), matching how slow-time products are extracted.
    """
    samples = frames.samples if isinstance(frames, FrameSet) else frames
    if range_bin is None:
        range_bin = int(np.argmax(np.mean(np.abs(samples) ** 2, axis=0)))
    p_sig = float(np.mean(np.abs(samples[:, range_bin]) ** 2))
    return p_sig * 10.0 ** (-snr_db / 10.0)
