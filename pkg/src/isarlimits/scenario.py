"""Scenario files: an INI-style document with station, radar, target, window,
imaging and budget sections.

Example::

    [station]
    latitude_deg = 46
    longitude_deg = 130
    altitude_m = 0

    [radar]
    carrier_freq_hz = 16.7e9
    bandwidth_hz = 2e9
    duty_cycle = 0.2
    peak_power_w = 5000

    [target]
    name = COSMOS 2494
    tle1 = 1 39491U 13078B   24183.51288981  .00004231  00000-0  37027-3 0  9997
    tle2 = 2 39491  82.4151 229.6952 0021025 105.6371 254.7173 14.96334548571512

    [window]
    start = 2024-07-05T12:00:00+08:00
    end = 2024-07-06T00:00:00+08:00
    mask_deg = 0

Angles may be given with a ``_deg`` or ``_rad`` suffix; the writer emits radians so
that a write/read cycle is exact.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, fields
from datetime import datetime
from importlib import resources
from pathlib import Path
from typing import Optional

from .core import ConfigError, RadarParams, StationGeodetic, TimeWindow, format_utc, parse_utc
from .link import LinkBudget
from .orbit import OrbitalElements, parse_tle

REQUIRED_SECTIONS = ("station", "radar", "target", "window")


@dataclass(frozen=True)
class ImagingSettings:
    k_scatterers: int = 10
    desired_srl: Optional[float] = None  # meters; None means the range resolution
    psnr_min_db: float = 24.0
    psnr_max_db: Optional[float] = None
    t_start: Optional[datetime] = None
    t_cpi: Optional[float] = None

    def __post_init__(self):
        if self.k_scatterers < 2:
            raise ConfigError("k_scatterers must be >= 2")
        if self.desired_srl is not None and not self.desired_srl > 0:
            raise ConfigError("desired_srl must be positive")
        if self.t_cpi is not None and not self.t_cpi > 0:
            raise ConfigError("t_cpi must be positive")


@dataclass(frozen=True)
class ScenarioConfig:
    station: StationGeodetic
    radar: RadarParams
    tle1: str
    tle2: str
    window: TimeWindow
    name: str = ""
    mask: float = 0.0
    imaging: ImagingSettings = field(default_factory=ImagingSettings)
    budget: LinkBudget = field(default_factory=LinkBudget)

    @property
    def elements(self) -> OrbitalElements:
        return parse_tle(self.tle1, self.tle2, self.name)

    @property
    def desired_srl(self) -> float:
        if self.imaging.desired_srl is not None:
            return self.imaging.desired_srl
        return self.radar.range_resolution


def _get(sec, key, conv=float, default=None, required=False):
    if key in sec:
        raw = sec[key]
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"[{sec.name}] {key}: cannot parse {raw!r}") from exc
    if required:
        raise ConfigError(f"missing field [{sec.name}] {key}")
    return default


def _angle(sec, stem, default=None, required=False):
    if f"{stem}_rad" in sec:
        return _get(sec, f"{stem}_rad")
    if f"{stem}_deg" in sec:
        return math.radians(_get(sec, f"{stem}_deg"))
    if required:
        raise ConfigError(f"missing field [{sec.name}] {stem}_deg")
    return default


def _ratio(sec, stem, default):
    # linear value, or the same quantity in dB under "<stem>_db"
    if stem in sec:
        return _get(sec, stem)
    if f"{stem}_db" in sec:
        return 10.0 ** (_get(sec, f"{stem}_db") / 10.0)
    return default


def parse_scenario(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed scenario document: {exc}") from exc
    for name in REQUIRED_SECTIONS:
        if not cp.has_section(name):
            raise ConfigError(f"missing section [{name}]")

    s = cp["station"]
    station = StationGeodetic(
        _angle(s, "latitude", required=True),
        _angle(s, "longitude", required=True),
        _get(s, "altitude_m", default=0.0),
    )

    r = cp["radar"]
    radar = RadarParams(
        carrier_freq=_get(r, "carrier_freq_hz", required=True),
        bandwidth=_get(r, "bandwidth_hz", required=True),
        duty_cycle=_get(r, "duty_cycle", required=True),
        peak_power=_get(r, "peak_power_w"),
        avg_power=_get(r, "avg_power_w"),
        prf=_get(r, "prf_hz"),
    )

    t = cp["target"]
    tle1 = _get(t, "tle1", conv=str, required=True)
    tle2 = _get(t, "tle2", conv=str, required=True)
    name = _get(t, "name", conv=str, default="")
    parse_tle(tle1, tle2, name)  # validate early

    w = cp["window"]
    window = TimeWindow(
        _get(w, "start", conv=parse_utc, required=True), _get(w, "end", conv=parse_utc, required=True)
    )
    mask = _angle(w, "mask", default=0.0)

    imaging = ImagingSettings()
    if cp.has_section("imaging"):
        im = cp["imaging"]
        imaging = ImagingSettings(
            k_scatterers=_get(im, "k_scatterers", conv=int, default=10),
            desired_srl=_get(im, "desired_srl_m"),
            psnr_min_db=_get(im, "psnr_min_db", default=24.0),
            psnr_max_db=_get(im, "psnr_max_db"),
            t_start=_get(im, "t_start", conv=parse_utc),
            t_cpi=_get(im, "t_cpi_s"),
        )

    budget = LinkBudget()
    if cp.has_section("budget"):
        b = cp["budget"]
        d = LinkBudget()
        budget = LinkBudget(
            tx_gain=_ratio(b, "tx_gain", d.tx_gain),
            effective_aperture=_get(b, "effective_aperture_m2", default=d.effective_aperture),
            integration_efficiency=_get(b, "integration_efficiency", default=d.integration_efficiency),
            propagation_factor4=_get(b, "propagation_factor4", default=d.propagation_factor4),
            noise_figure=_ratio(b, "noise_figure", d.noise_figure),
            system_losses=_ratio(b, "system_losses", d.system_losses),
            ref_temp=_get(b, "ref_temp_k", default=d.ref_temp),
            boltzmann=_get(b, "boltzmann", default=d.boltzmann),
            rcs=_get(b, "rcs_m2", default=d.rcs),
        )

    return ScenarioConfig(
        station=station,
        radar=radar,
        tle1=tle1,
        tle2=tle2,
        window=window,
        name=name,
        mask=mask,
        imaging=imaging,
        budget=budget,
    )


def serialize_scenario(cfg: ScenarioConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp["station"] = {
        "latitude_rad": repr(cfg.station.latitude),
        "longitude_rad": repr(cfg.station.longitude),
        "altitude_m": repr(cfg.station.altitude),
    }
    radar = {
        "carrier_freq_hz": repr(cfg.radar.carrier_freq),
        "bandwidth_hz": repr(cfg.radar.bandwidth),
        "duty_cycle": repr(cfg.radar.duty_cycle),
        "peak_power_w": repr(cfg.radar.peak_power),
        "avg_power_w": repr(cfg.radar.avg_power),
    }
    if cfg.radar.prf is not None:
        radar["prf_hz"] = repr(cfg.radar.prf)
    cp["radar"] = radar
    cp["target"] = {"name": cfg.name, "tle1": cfg.tle1, "tle2": cfg.tle2}
    cp["window"] = {
        "start": format_utc(cfg.window.start),
        "end": format_utc(cfg.window.end),
        "mask_rad": repr(cfg.mask),
    }
    im = cfg.imaging
    imaging = {"k_scatterers": str(im.k_scatterers), "psnr_min_db": repr(im.psnr_min_db)}
    if im.desired_srl is not None:
        imaging["desired_srl_m"] = repr(im.desired_srl)
    if im.psnr_max_db is not None:
        imaging["psnr_max_db"] = repr(im.psnr_max_db)
    if im.t_start is not None:
        imaging["t_start"] = format_utc(im.t_start)
    if im.t_cpi is not None:
        imaging["t_cpi_s"] = repr(im.t_cpi)
    cp["imaging"] = imaging
    keys = {
        "tx_gain": "tx_gain",
        "effective_aperture": "effective_aperture_m2",
        "integration_efficiency": "integration_efficiency",
        "propagation_factor4": "propagation_factor4",
        "noise_figure": "noise_figure",
        "system_losses": "system_losses",
        "ref_temp": "ref_temp_k",
        "boltzmann": "boltzmann",
        "rcs": "rcs_m2",
    }
    cp["budget"] = {keys[f.name]: repr(getattr(cfg.budget, f.name)) for f in fields(cfg.budget)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def load_scenario(path) -> ScenarioConfig:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


BUILTIN_SCENARIOS = ("cosmos2494", "navstar81", "beidou9", "geo_synthetic")


def builtin_scenario(name: str) -> ScenarioConfig:
    """One of the scenario files shipped with the package."""
    if name not in BUILTIN_SCENARIOS:
        raise ConfigError(f"unknown builtin scenario {name!r}")
    text = resources.files("isarlimits").joinpath("data").joinpath(f"{name}.cfg").read_text(encoding="utf-8")
    return parse_scenario(text)


def resolve_scenario(ref: str) -> ScenarioConfig:
    """Load a scenario from a path, or a builtin by name."""
    if ref in BUILTIN_SCENARIOS and not Path(ref).exists():
        return builtin_scenario(ref)
    if not Path(ref).exists():
        raise ConfigError(f"no scenario file {ref!r} and no builtin of that name ({', '.join(BUILTIN_SCENARIOS)})")
    return load_scenario(ref)
