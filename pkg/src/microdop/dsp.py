"""Slow-time products: Doppler spectra, range-Doppler maps, validation metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.signal import find_peaks

from .scene import FrameSet

WINDOWS = ("rectangular", "hann")


@dataclass
class SlowTimeSignal:
    samples: np.ndarray      # complex, one per kept symbol
    slow_time_rate: float    # Hz, 1 / (T * subsample)
    range_bin: int

    def __post_init__(self):
        if self.slow_time_rate <= 0:
            raise ValueError("slow_time_rate must be positive")


@dataclass
class DopplerSpectrum:
    magnitude: np.ndarray    # real, centered
    freq_axis: np.ndarray    # Hz, centered two-sided

    @property
    def bin_width(self) -> float:
        return float(self.freq_axis[1] - self.freq_axis[0])


@dataclass
class RangeDopplerMap:
    magnitude: np.ndarray    # (range bins, Doppler bins)
    range_axis: np.ndarray   # m, monostatic-equivalent (bin * c/(2B))
    freq_axis: np.ndarray    # Hz, centered
    range_resolution: float  # c / (2 * grid bandwidth)


def dominant_range_bin(frames: FrameSet) -> int:
    """Fast-time bin holding the most slow-time energy."""
    return int(np.argmax(np.mean(np.abs(frames.samples) ** 2, axis=0)))


def slow_time_extract(frames: FrameSet, range_bin: int, subsample: int = 1) -> SlowTimeSignal:
    """Per-range-bin slice across symbols, keeping every subsample-th one."""
    m, n = frames.samples.shape
    if not (0 <= range_bin < n):
        raise ValueError(f"range_bin {range_bin} outside [0, {n})")
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    return SlowTimeSignal(
        samples=frames.samples[::subsample, range_bin].copy(),
        slow_time_rate=1.0 / (frames.frame_interval * subsample),
        range_bin=range_bin,
    )


def _window(name: str, length: int) -> np.ndarray:
    if name == "rectangular":
        return np.ones(length)
    if name == "hann":
        return np.hanning(length)
    raise ValueError(f"unknown window {name!r}; choose from {WINDOWS}")


def doppler_spectrum(sig: SlowTimeSignal, window: str = "rectangular") -> DopplerSpectrum:
    """Centered DFT magnitude of the windowed slow-time vector."""
    length = len(sig.samples)
    if length < 2:
        raise ValueError("need at least 2 slow-time samples")
    win = _window(window, length)
    spec = np.fft.fftshift(np.fft.fft(sig.samples * win))
    freqs = np.fft.fftshift(np.fft.fftfreq(length, d=1.0 / sig.slow_time_rate))
    return DopplerSpectrum(magnitude=np.abs(spec), freq_axis=freqs)


def range_doppler_map(frames: FrameSet, subsample: int = 1,
                      window: str = "rectangular") -> RangeDopplerMap:
    """Per-range-bin Doppler spectra stacked over all fast-time bins."""
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    data = frames.samples[::subsample]
    m, n = data.shape
    win = _window(window, m)
    spec = np.fft.fftshift(np.fft.fft(data * win[:, None], axis=0), axes=0)
    rate = 1.0 / (frames.frame_interval * subsample)
    freqs = np.fft.fftshift(np.fft.fftfreq(m, d=1.0 / rate))
    delta_r = C_LIGHT / (2.0 * frames.cfg.grid_bandwidth)
    return RangeDopplerMap(
        magnitude=np.abs(spec).T,
        range_axis=np.arange(n) * delta_r,
        freq_axis=freqs,
        range_resolution=delta_r,
    )


def predict_bistatic_doppler(v: float, beta: float, delta: float,
                             wavelength: float) -> float:
    """Bistatic Doppler f_D = 2 v cos(beta/2) cos(delta) / lambda."""
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return 2.0 * v * math.cos(0.5 * beta) * math.cos(delta) / wavelength


def detect_peaks(spec: DopplerSpectrum, threshold_db: float = 10.0) -> np.ndarray:
    """Indices of local maxima above (median magnitude + threshold_db)."""
    mag = spec.magnitude
    floor = np.median(mag[mag > 0]) if np.any(mag > 0) else 0.0
    height = floor * 10.0 ** (threshold_db / 20.0)
    peaks, _ = find_peaks(mag, height=height, distance=2)
    return peaks


def _refine_peak(mag: np.ndarray, idx: int) -> float:
    """Sub-bin peak position via parabolic interpolation, in bins."""
    if idx == 0 or idx == len(mag) - 1:
        return float(idx)
    y0, y1, y2 = mag[idx - 1], mag[idx], mag[idx + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(idx)
    return idx + 0.5 * (y0 - y2) / denom


def impulse_spacing(spec: DopplerSpectrum, peak_threshold_db: float = 10.0) -> float:
    """Median spacing (Hz) of adjacent blade-flash impulses.

    Peak positions are refined to sub-bin accuracy so the spacing is not
    quantized to whole FFT bins.
    """
    peaks = detect_peaks(spec, peak_threshold_db)
    if len(peaks) < 3:
        raise ValueError(f"only {len(peaks)} peaks above threshold; need >= 3")
    positions = np.array([_refine_peak(spec.magnitude, p) for p in peaks])
    return float(np.median(np.diff(positions)) * spec.bin_width)


def doppler_spread(spec: DopplerSpectrum, floor_margin_db: float = 6.0,
                   floor: float | None = None) -> float:
    """Two-sided width (Hz) of the support above the noise floor + margin.

    The edge is the outermost bin exceeding the threshold; the floor
    defaults to the median magnitude. A spectrum with nothing but the
    central line reports one bin width.
    """
    mag = spec.magnitude
    if floor is None:
        floor = float(np.median(mag[mag > 0])) if np.any(mag > 0) else 0.0
    threshold = floor * 10.0 ** (floor_margin_db / 20.0)
    above = np.nonzero(mag > threshold)[0]
    if len(above) == 0:
        return spec.bin_width
    edge = float(np.max(np.abs(spec.freq_axis[above])))
    return 2.0 * edge + spec.bin_width


def pearson_correlation(a: DopplerSpectrum, b: DopplerSpectrum) -> float:
    """Pearson coefficient between two spectrum magnitude vectors."""
    x = np.asarray(a.magnitude, dtype=float)
    y = np.asarray(b.magnitude, dtype=float)
    if x.shape != y.shape:
        raise ValueError("spectra must have equal length")
    if np.std(x) == 0 or np.std(y) == 0:
        raise ValueError("zero-variance input")
    return float(np.corrcoef(x, y)[0, 1])
