"""Run configuration: YAML parsing, validation, presets, sweep expansion.

Keys carry explicit unit suffixes (rotation_rate_rpm, f0_ghz, ...) and are
converted to SI at parse time. Validation collects every violation before
failing, and unknown keys are rejected.
"""

from __future__ import annotations

import copy
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .geometry import BistaticGeometry, in_plane_geometry
from .scatter import Propeller
from .scene import Scene, StaticScatterer
from . import presets
from .waveform import OfdmConfig, centered_active_band


class ConfigError(ValueError):
    """Carries the full list of validation problems."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


@dataclass
class DspOptions:
    subsample: int = 8
    window: str = "rectangular"
    peak_threshold_db: float = 10.0
    floor_margin_db: float = 6.0


@dataclass
class RunConfig:
    ofdm: OfdmConfig
    geometry: BistaticGeometry
    scene: Scene
    dsp: DspOptions
    output_dir: Path
    seed: int
    export_format: str = "binary"   # binary | csv | both
    snr_db: float | None = None     # resolved into noise power at run time
    label: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)


_TOP_KEYS = {"preset", "seed", "output_dir", "format", "ofdm", "geometry",
             "scene", "dsp", "sweep"}
_OFDM_KEYS = {"f0_ghz", "n_subcarriers", "active_subcarriers", "active_band",
              "symbol_duration_us", "n_symbols"}
_GEOM_KEYS = {"r_t_m", "r_r_m", "bistatic_angle_deg",
              "zen_t_deg", "zen_r_deg", "az_t_deg", "az_r_deg"}
_SCENE_KEYS = {"propellers", "static_scatterers", "noise_power", "snr_db", "seed"}
_PROP_KEYS = {"n_blades", "blade_length_m", "rotation_rate_rpm",
              "initial_phase_deg", "center_offset_m", "rcs_density_m2_per_m"}
_STATIC_KEYS = {"offset_m", "rcs_m2"}
_DSP_KEYS = {"subsample", "window", "peak_threshold_db", "floor_margin_db"}


def _check_keys(mapping, allowed, where, problems):
    if not isinstance(mapping, dict):
        problems.append(f"{where}: expected a mapping")
        return False
    for key in mapping:
        if key not in allowed:
            problems.append(f"{where}: unknown key {key!r}")
    return True


def _preset_raw(name: str) -> dict:
    if name == "setup1":
        return {
            "ofdm": {"f0_ghz": 3.7, "n_subcarriers": 1600,
                     "active_subcarriers": 1280,
                     "symbol_duration_us": 8.0, "n_symbols": 16384},
            "geometry": {"r_t_m": presets.DEFAULT_RANGE,
                         "r_r_m": presets.DEFAULT_RANGE,
                         "bistatic_angle_deg": 30.0},
            "scene": {
                "propellers": [{"n_blades": 2,
                                "blade_length_m": presets.PROPELLER_RADIUS,
                                "rotation_rate_rpm": 1500.0,
                                "rcs_density_m2_per_m": presets.DEFAULT_RCS_DENSITY}],
                "static_scatterers": [{"offset_m": [0.0, 0.0, 0.0],
                                       "rcs_m2": presets.DEFAULT_BODY_RCS}],
                "noise_power": 0.0,
            },
            "dsp": {"subsample": 8},
        }
    if name == "setup2":
        return {
            "ofdm": {"f0_ghz": 7.0, "n_subcarriers": 2500,
                     "active_subcarriers": 2048,
                     "symbol_duration_us": 1.02, "n_symbols": 16384},
            "geometry": {"r_t_m": presets.DEFAULT_RANGE,
                         "r_r_m": presets.DEFAULT_RANGE,
                         "bistatic_angle_deg": 30.0},
            "scene": {
                "propellers": [
                    {"n_blades": 2,
                     "blade_length_m": presets.PROPELLER_RADIUS,
                     "rotation_rate_rpm": 1500.0,
                     "center_offset_m": [-0.25, 0.0, 0.0],
                     "rcs_density_m2_per_m": presets.DEFAULT_RCS_DENSITY},
                    {"n_blades": 2,
                     "blade_length_m": presets.PROPELLER_RADIUS,
                     "rotation_rate_rpm": 2000.0,
                     "center_offset_m": [0.25, 0.0, 0.0],
                     "rcs_density_m2_per_m": presets.DEFAULT_RCS_DENSITY},
                ],
                "static_scatterers": [{"offset_m": [0.0, 0.0, 0.0],
                                       "rcs_m2": presets.DEFAULT_BODY_RCS}],
                "noise_power": 0.0,
            },
            "dsp": {"subsample": 8},
        }
    raise ConfigError([f"unknown preset {name!r} (choose setup1 or setup2)"])


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _build_ofdm(raw: dict, problems: list[str]) -> OfdmConfig | None:
    if not _check_keys(raw, _OFDM_KEYS, "ofdm", problems):
        return None
    missing = [k for k in ("f0_ghz", "n_subcarriers", "symbol_duration_us",
                           "n_symbols") if k not in raw]
    for k in missing:
        problems.append(f"ofdm: missing required key {k!r}")
    if "active_subcarriers" not in raw and "active_band" not in raw:
        problems.append("ofdm: need active_subcarriers or active_band")
    if missing or problems and any(p.startswith("ofdm") for p in problems):
        if missing or ("active_subcarriers" not in raw and "active_band" not in raw):
            return None
    try:
        n = int(raw["n_subcarriers"])
        if "active_band" in raw:
            band = tuple(int(v) for v in raw["active_band"])
        else:
            band = centered_active_band(n, int(raw["active_subcarriers"]))
        return OfdmConfig(
            f0=float(raw["f0_ghz"]) * 1e9,
            n_subcarriers=n,
            active_band=band,
            symbol_duration=float(raw["symbol_duration_us"]) * 1e-6,
            n_symbols=int(raw["n_symbols"]),
        )
    except (ValueError, TypeError) as exc:
        problems.append(f"ofdm: {exc}")
        return None


def _build_geometry(raw: dict, problems: list[str]) -> BistaticGeometry | None:
    if not _check_keys(raw, _GEOM_KEYS, "geometry", problems):
        return None
    for k in ("r_t_m", "r_r_m"):
        if k not in raw:
            problems.append(f"geometry: missing required key {k!r}")
            return None
    try:
        if "bistatic_angle_deg" in raw:
            extra = {"zen_t_deg", "zen_r_deg", "az_t_deg", "az_r_deg"} & set(raw)
            if extra:
                problems.append(
                    "geometry: bistatic_angle_deg excludes explicit angles "
                    f"{sorted(extra)}")
                return None
            return in_plane_geometry(float(raw["r_t_m"]), float(raw["r_r_m"]),
                                     math.radians(float(raw["bistatic_angle_deg"])))
        missing = [k for k in ("zen_t_deg", "zen_r_deg", "az_t_deg", "az_r_deg")
                   if k not in raw]
        if missing:
            problems.append(f"geometry: missing keys {missing}")
            return None
        return BistaticGeometry(
            r_t=float(raw["r_t_m"]), r_r=float(raw["r_r_m"]),
            zen_t=math.radians(float(raw["zen_t_deg"])),
            zen_r=math.radians(float(raw["zen_r_deg"])),
            az_t=math.radians(float(raw["az_t_deg"])) % (2 * math.pi),
            az_r=math.radians(float(raw["az_r_deg"])) % (2 * math.pi),
        )
    except (ValueError, TypeError) as exc:
        problems.append(f"geometry: {exc}")
        return None


def _build_propeller(raw: dict, idx: int, problems: list[str]) -> Propeller | None:
    where = f"scene.propellers[{idx}]"
    if not _check_keys(raw, _PROP_KEYS, where, problems):
        return None
    missing = [k for k in ("n_blades", "blade_length_m", "rotation_rate_rpm")
               if k not in raw]
    if missing:
        for k in missing:
            problems.append(f"{where}: missing required key {k!r}")
        return None
    try:
        return Propeller(
            n_blades=int(raw["n_blades"]),
            blade_length=float(raw["blade_length_m"]),
            rotation_rate=presets.rpm_to_rad_per_s(float(raw["rotation_rate_rpm"])),
            initial_phase=math.radians(float(raw.get("initial_phase_deg", 0.0))),
            center_offset=tuple(float(v) for v in raw.get("center_offset_m",
                                                          (0.0, 0.0, 0.0))),
            rcs_density=float(raw.get("rcs_density_m2_per_m",
                                      presets.DEFAULT_RCS_DENSITY)),
        )
    except (ValueError, TypeError) as exc:
        problems.append(f"{where}: {exc}")
        return None


def _build_scene(raw: dict, seed: int, problems: list[str]):
    if not _check_keys(raw, _SCENE_KEYS, "scene", problems):
        return None, None
    props = []
    for idx, p in enumerate(raw.get("propellers", [])):
        built = _build_propeller(p, idx, problems)
        if built is not None:
            props.append(built)
    statics = []
    for idx, s in enumerate(raw.get("static_scatterers", [])):
        where = f"scene.static_scatterers[{idx}]"
        if not _check_keys(s, _STATIC_KEYS, where, problems):
            continue
        try:
            statics.append(StaticScatterer(
                offset=tuple(float(v) for v in s.get("offset_m", (0, 0, 0))),
                rcs=float(s["rcs_m2"])))
        except (KeyError, ValueError, TypeError) as exc:
            problems.append(f"{where}: {exc}")
    if not props and not statics:
        problems.append("scene: needs at least one propeller or static scatterer")
        return None, None
    snr_db = raw.get("snr_db")
    noise_power = float(raw.get("noise_power", 0.0))
    # a zero noise_power (the preset default) does not conflict with snr_db
    if snr_db is not None and noise_power != 0.0:
        problems.append("scene: give either noise_power or snr_db, not both")
    try:
        scene = Scene(propellers=props, static_scatterers=statics,
                      noise_power=noise_power,
                      rng_seed=int(raw.get("seed", seed)))
    except ValueError as exc:
        problems.append(f"scene: {exc}")
        return None, None
    return scene, (float(snr_db) if snr_db is not None else None)


def _build_dsp(raw: dict, problems: list[str]) -> DspOptions:
    opts = DspOptions()
    if not _check_keys(raw, _DSP_KEYS, "dsp", problems):
        return opts
    try:
        if "subsample" in raw:
            opts.subsample = int(raw["subsample"])
            if opts.subsample < 1:
                problems.append("dsp: subsample must be >= 1")
        if "window" in raw:
            opts.window = str(raw["window"])
            if opts.window not in ("rectangular", "hann"):
                problems.append(f"dsp: unknown window {opts.window!r}")
        if "peak_threshold_db" in raw:
            opts.peak_threshold_db = float(raw["peak_threshold_db"])
        if "floor_margin_db" in raw:
            opts.floor_margin_db = float(raw["floor_margin_db"])
    except (ValueError, TypeError) as exc:
        problems.append(f"dsp: {exc}")
    return opts


def merge_preset(raw: dict) -> dict:
    """Overlay a raw mapping onto its named preset, if any."""
    if "preset" not in raw:
        return raw
    return _deep_merge(_preset_raw(str(raw["preset"])),
                       {k: v for k, v in raw.items() if k != "preset"})


def build_run_config(raw: dict) -> RunConfig:
    """Validate a raw config mapping; raises ConfigError with all problems."""
    problems: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["top level: expected a mapping"])
    _check_keys(raw, _TOP_KEYS, "top level", problems)
    merged = merge_preset(raw)
    seed = int(merged.get("seed", 0))
    ofdm = _build_ofdm(merged.get("ofdm", {}), problems)
    geometry = _build_geometry(merged.get("geometry", {}), problems)
    scene, snr_db = (None, None)
    if "scene" in merged:
        scene, snr_db = _build_scene(merged["scene"], seed, problems)
    else:
        problems.append("scene: section is required")
    dsp = _build_dsp(merged.get("dsp", {}), problems)
    sweep = merged.get("sweep", {})
    if sweep and not isinstance(sweep, dict):
        problems.append("sweep: expected a mapping of dotted paths to lists")
    elif isinstance(sweep, dict):
        for path, values in sweep.items():
            if not isinstance(values, list) or not values:
                problems.append(f"sweep: {path!r} must map to a non-empty list")
    fmt = str(merged.get("format", "binary"))
    if fmt not in ("binary", "csv", "both"):
        problems.append(f"format: unknown value {fmt!r}")
    if problems:
        raise ConfigError(problems)
    return RunConfig(
        ofdm=ofdm, geometry=geometry, scene=scene, dsp=dsp,
        output_dir=Path(merged.get("output_dir", "out")),
        seed=seed, export_format=fmt, snr_db=snr_db, sweep=dict(sweep or {}),
    )


def load_config(path) -> RunConfig:
    raw = yaml.safe_load(Path(path).read_text())
    if raw is None:
        raise ConfigError([f"{path}: empty configuration"])
    try:
        return build_run_config(raw)
    except ConfigError as exc:
        raise ConfigError([f"{path}: {p}" for p in exc.problems]) from None


def _set_dotted(raw: dict, path: str, value):
    parts = path.split(".")
    node = raw
    for part in parts[:-1]:
        key = int(part) if part.isdigit() else part
        node = node[key]
    last = parts[-1]
    node[int(last) if last.isdigit() else last] = value


def expand_sweep(raw: dict) -> list[tuple[dict, dict]]:
    """Cartesian expansion of the sweep section over the raw mapping.

    Returns (label, expanded-raw) pairs; label maps each swept dotted path
    to its value for that run.
    """
    sweep = raw.get("sweep", {})
    if not sweep:
        return [({}, copy.deepcopy(raw))]
    paths = sorted(sweep)
    combos = itertools.product(*(sweep[p] for p in paths))
    out = []
    for combo in combos:
        expanded = copy.deepcopy(raw)
        expanded.pop("sweep", None)
        label = {}
        for path, value in zip(paths, combo):
            # preset keys only exist after merging; apply onto merged form
            _ensure_path(expanded, path)
            _set_dotted(expanded, path, value)
            label[path] = value
        out.append((label, expanded))
    return out


def _ensure_path(raw: dict, path: str):
    """Materialize intermediate mappings so sweeps can target preset fields."""
    parts = path.split(".")
    node = raw
    for part in parts[:-1]:
        key = int(part) if part.isdigit() else part
        if isinstance(key, int):
            if not isinstance(node, list) or key >= len(node):
                raise ConfigError([f"sweep: path {path!r} indexes a missing list entry"])
            node = node[key]
        else:
            node = node.setdefault(key, {})
