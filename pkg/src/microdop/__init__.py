"""Bistatic OFDM micro-Doppler simulator for drone rotating propellers."""

from .geometry import (BistaticFactors, BistaticGeometry, bistatic_angle,
                       bistatic_factors, geometry_from_positions,
                       in_plane_geometry, rotating_point_bistatic_range)
from .waveform import (ModulationGrid, OfdmConfig, centered_active_band,
                       crest_factor, newman_grid, symbol_time, synthesize_symbol)
from .scatter import (EchoFrame, Propeller, blade_limits, classic_cw_returns,
                      closed_form_frames, closed_form_returns,
                      point_oracle_frames, point_oracle_returns, radar_amplitude)
from .scene import (FrameSet, Scene, StaticScatterer, inject_noise,
                    noise_power_for_snr, offset_geometry, simulate_scene)
from .dsp import (DopplerSpectrum, RangeDopplerMap, SlowTimeSignal,
                  dominant_range_bin, doppler_spectrum, doppler_spread,
                  impulse_spacing, pearson_correlation,
                  predict_bistatic_doppler, range_doppler_map,
                  slow_time_extract)

__version__ = "0.1.0"
