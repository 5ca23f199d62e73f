"""Scene composition: multi-rotor superposition, static returns, noise."""

import math

import numpy as np
import pytest
from scipy.constants import c as C_LIGHT

from microdop.geometry import in_plane_geometry
from microdop.scatter import Propeller
from microdop.scene import (FrameSet, Scene, StaticScatterer, inject_noise,
                            noise_power_for_snr, offset_geometry,
                            simulate_scene)
from microdop.waveform import newman_grid

from conftest import small_cfg, two_blade_prop

GEOM = in_plane_geometry(10.0, 10.0, math.radians(30.0))


def _rotor_scene(**prop_kw):
    return Scene(propellers=[two_blade_prop(**prop_kw)])


class TestSimulateScene:
    def test_output_shape(self):
        cfg = small_cfg(n_symbols=12)
        frames = simulate_scene(_rotor_scene(), GEOM, cfg, newman_grid(cfg))
        assert isinstance(frames, FrameSet)
        assert frames.samples.shape == (12, cfg.n_subcarriers)
        assert frames.frame_interval == pytest.approx(cfg.symbol_duration)
        assert frames.range_bin_width == pytest.approx(
            C_LIGHT * cfg.symbol_duration / cfg.n_subcarriers)

    def test_empty_scene_rejected(self):
        cfg = small_cfg(n_symbols=2)
        with pytest.raises(ValueError):
            simulate_scene(Scene(), GEOM, cfg, newman_grid(cfg))

    def test_superposition_of_rotors_and_statics(self):
        cfg = small_cfg(n_symbols=16)
        grid = newman_grid(cfg)
        p1 = two_blade_prop(f_rot=25.0, center_offset=(-0.25, 0.0, 0.0))
        p2 = two_blade_prop(f_rot=33.0, center_offset=(0.25, 0.0, 0.0))
        body = StaticScatterer(offset=(0.0, 0.0, 0.0), rcs=0.01)
        combined = simulate_scene(Scene(propellers=[p1, p2],
                                        static_scatterers=[body]),
                                  GEOM, cfg, grid, add_noise=False)
        parts = sum(
            simulate_scene(scene, GEOM, cfg, grid, add_noise=False).samples
            for scene in (Scene(propellers=[p1]), Scene(propellers=[p2]),
                          Scene(static_scatterers=[body])))
        assert np.allclose(combined.samples, parts, rtol=1e-12, atol=1e-24)

    def test_static_only_scene_is_a_pure_zero_hz_line(self):
        cfg = small_cfg(n_symbols=64)
        scene = Scene(static_scatterers=[StaticScatterer((0.0, 0.0, 0.0),
                                                         rcs=0.01)])
        frames = simulate_scene(scene, GEOM, cfg, newman_grid(cfg))
        # energy sits in the hub range cell and does not move in slow time
        cell = frames.range_bin_width
        ct = C_LIGHT * cfg.symbol_duration
        mu = math.floor((20.0 % ct) / cell)
        energy = np.mean(np.abs(frames.samples) ** 2, axis=0)
        assert np.argmax(energy) == mu
        spec = np.abs(np.fft.fft(frames.samples[:, mu]))
        assert np.argmax(spec) == 0
        assert np.max(spec[1:]) < 1e-9 * spec[0]

    def test_stride_generates_exact_slow_time_subsampling(self):
        cfg = small_cfg(n_symbols=32)
        grid = newman_grid(cfg)
        full = simulate_scene(_rotor_scene(), GEOM, cfg, grid,
                              add_noise=False)
        strided = simulate_scene(_rotor_scene(), GEOM, cfg, grid,
                                 add_noise=False, stride=4)
        assert strided.samples.shape[0] == 8
        assert strided.frame_interval == pytest.approx(4 * cfg.symbol_duration)
        assert np.allclose(strided.samples, full.samples[::4], rtol=1e-12)

    def test_all_zero_rcs_scene_is_pure_noise(self):
        cfg = small_cfg(n_subcarriers=128, n_symbols=512)
        scene = Scene(
            propellers=[two_blade_prop(rcs_density=0.0)],
            static_scatterers=[StaticScatterer((0.0, 0.0, 0.0), rcs=0.0)],
            noise_power=2e-3, rng_seed=11)
        frames = simulate_scene(scene, GEOM, cfg, newman_grid(cfg))
        var = np.mean(np.abs(frames.samples) ** 2)
        assert var == pytest.approx(2e-3, rel=0.05)

    def test_deterministic_under_seed(self):
        cfg = small_cfg(n_symbols=16)
        grid = newman_grid(cfg)
        scene = Scene(propellers=[two_blade_prop()], noise_power=1e-6,
                      rng_seed=42)
        a = simulate_scene(scene, GEOM, cfg, grid)
        b = simulate_scene(scene, GEOM, cfg, grid)
        assert np.array_equal(a.samples, b.samples)

    def test_hub_offset_shifts_range_cell(self):
        # 2048 fine cells: hubs 0.5 m apart land in distinct range bins
        from conftest import hrr_cfg
        cfg = hrr_cfg(n_symbols=4)
        grid = newman_grid(cfg)
        bins = []
        for x in (-0.25, 0.25):
            scene = Scene(propellers=[two_blade_prop(
                center_offset=(x, 0.0, 0.0))])
            frames = simulate_scene(scene, GEOM, cfg, grid, add_noise=False)
            bins.append(int(np.argmax(
                np.mean(np.abs(frames.samples) ** 2, axis=0))))
        assert bins[0] != bins[1]


class TestOffsetGeometry:
    def test_offset_reproduces_exact_leg_lengths(self):
        offset = np.array([0.3, -0.2, 0.05])
        shifted = offset_geometry(GEOM, offset)
        assert shifted.r_t == pytest.approx(
            np.linalg.norm(GEOM.tx_position() - offset))
        assert shifted.r_r == pytest.approx(
            np.linalg.norm(GEOM.rx_position() - offset))

    def test_zero_offset_is_identity(self):
        shifted = offset_geometry(GEOM, (0.0, 0.0, 0.0))
        assert np.allclose(shifted.tx_position(), GEOM.tx_position())
        assert np.allclose(shifted.rx_position(), GEOM.rx_position())


class TestInjectNoise:
    def test_zero_power_is_identity(self):
        data = np.ones((4, 8), dtype=complex)
        out = inject_noise(data, 0.0, seed=1)
        assert out is data
        assert np.all(data == 1.0)

    def test_sample_variance_matches_configured_power(self):
        data = np.zeros((1000, 1000), dtype=complex)
        inject_noise(data, 0.5, seed=3)
        assert np.mean(np.abs(data) ** 2) == pytest.approx(0.5, rel=0.01)
        # circular symmetry: real/imag parts carry half the power each
        assert np.var(data.real) == pytest.approx(0.25, rel=0.02)
        assert np.var(data.imag) == pytest.approx(0.25, rel=0.02)

    def test_same_seed_identical_different_seed_not(self):
        a = np.zeros((8, 16), dtype=complex)
        b = np.zeros((8, 16), dtype=complex)
        c = np.zeros((8, 16), dtype=complex)
        inject_noise(a, 1.0, seed=7)
        inject_noise(b, 1.0, seed=7)
        inject_noise(c, 1.0, seed=8)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_per_symbol_streams_are_row_independent(self):
        # rows are seeded independently: a taller array reproduces the
        # shorter one's rows exactly (parallel-generation contract)
        a = np.zeros((4, 16), dtype=complex)
        b = np.zeros((8, 16), dtype=complex)
        inject_noise(a, 1.0, seed=5)
        inject_noise(b, 1.0, seed=5)
        assert np.array_equal(a, b[:4])

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            inject_noise(np.zeros((2, 2), dtype=complex), -1.0, seed=0)


class TestNoisePowerForSnr:
    def test_snr_definition_against_dominant_bin(self):
        cfg = small_cfg(n_symbols=32)
        frames = simulate_scene(_rotor_scene(), GEOM, cfg, newman_grid(cfg),
                                add_noise=False)
        power = noise_power_for_snr(frames, 20.0)
        bin_idx = int(np.argmax(np.mean(np.abs(frames.samples) ** 2, axis=0)))
        p_sig = np.mean(np.abs(frames.samples[:, bin_idx]) ** 2)
        assert power == pytest.approx(p_sig / 100.0, rel=1e-12)

    def test_zero_db_equals_signal_power(self):
        cfg = small_cfg(n_symbols=8)
        frames = simulate_scene(_rotor_scene(), GEOM, cfg, newman_grid(cfg),
                                add_noise=False)
        p0 = noise_power_for_snr(frames, 0.0)
        p10 = noise_power_for_snr(frames, 10.0)
        assert p0 == pytest.approx(10.0 * p10, rel=1e-12)
