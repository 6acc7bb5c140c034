"""Physical constants, unit helpers and the small value types shared by every module."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Optional

C_LIGHT = 299_792_458.0  # m/s, exact
BOLTZMANN = 1.380649e-23  # J/K, exact
EARTH_RADIUS = 6_378_137.0  # m
EARTH_ROTATION_RATE = 7.2921159e-5  # rad/s
GM_EARTH = 3.986004418e14  # m^3/s^2

J2000 = datetime(2000, 1, 1, 12, 0, 0, tzinfo=timezone.utc)


class ConfigError(ValueError):
    """Raised for invalid or inconsistent configuration values."""


class InfeasibleError(RuntimeError):
    """Raised when a scenario cannot satisfy a single-point request."""


# ---------------------------------------------------------------------------
# dB handling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DbValue:
    """A power ratio carried in both linear and decibel form."""

    linear: float
    db: float

    @classmethod
    def from_linear(cls, value: float) -> "DbValue":
        value = float(value)
        if not value > 0.0:
            raise ValueError(f"linear value must be positive, got {value!r}")
        return cls(linear=value, db=10.0 * math.log10(value))

    @classmethod
    def from_db(cls, value: float) -> "DbValue":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"dB value must be finite, got {value!r}")
        try:
            lin = 10.0 ** (value / 10.0)
        except OverflowError:
            lin = math.inf
        return cls(linear=lin, db=value)

    def __str__(self) -> str:
        return f"{self.db:.4f} dB"


def db(linear_value: float) -> DbValue:
    """Wrap a positive linear ratio."""
    return DbValue.from_linear(linear_value)


def linear(db_value: float) -> DbValue:
    """Wrap a decibel value."""
    return DbValue.from_db(db_value)


# ---------------------------------------------------------------------------
# Time
# ---------------------------------------------------------------------------


def as_utc(t: datetime) -> datetime:
    if t.tzinfo is None:
        return t.replace(tzinfo=timezone.utc)
    return t.astimezone(timezone.utc)


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 instant; naive values are taken as UTC."""
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    # older fromisoformat only takes 3 or 6 fractional digits
    text = re.sub(r"(T\d\d:\d\d:\d\d)\.(\d+)", lambda m: f"{m[1]}.{(m[2] + '000000')[:6]}", text)
    try:
        return as_utc(datetime.fromisoformat(text))
    except ValueError as exc:
        raise ConfigError(f"bad UTC instant {text!r}") from exc


def format_utc(t: datetime) -> str:
    t = as_utc(t)
    if t.microsecond:
        return t.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def j2000_seconds(t: datetime) -> float:
    """Seconds elapsed since J2000.0 on the UTC scale."""
    return (as_utc(t) - J2000).total_seconds()


def from_j2000_seconds(s: float) -> datetime:
    return J2000 + timedelta(seconds=float(s))


def gmst(seconds_since_j2000):
    """Greenwich mean sidereal angle [rad] from the IAU-1982 polynomial (UT1 taken as UTC).

    Accepts scalars or numpy arrays.
    """
    import numpy as np

    s = np.asarray(seconds_since_j2000, dtype=float)
    t = s / (86400.0 * 36525.0)
    # seconds of sidereal time
    g = 67310.54841 + (876600.0 * 3600.0 + 8640184.812866) * t + 0.093104 * t**2 - 6.2e-6 * t**3
    ang = np.mod(g, 86400.0) * (2.0 * math.pi / 86400.0)
    if ang.ndim == 0:
        return float(ang)
    return ang


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


def _normalize_longitude(lon: float) -> float:
    lon = math.fmod(lon, 2.0 * math.pi)
    if lon <= -math.pi:
        lon += 2.0 * math.pi
    elif lon > math.pi:
        lon -= 2.0 * math.pi
    return lon


@dataclass(frozen=True)
class StationGeodetic:
    """Radar site on a spherical Earth. Angles in radians, altitude in meters."""

    latitude: float
    longitude: float
    altitude: float = 0.0

    def __post_init__(self):
        if not abs(self.latitude) <= math.pi / 2:
            raise ConfigError(f"latitude out of range: {self.latitude!r} rad")
        object.__setattr__(self, "longitude", _normalize_longitude(self.longitude))

    @property
    def radius(self) -> float:
        return EARTH_RADIUS + self.altitude

    @classmethod
    def from_degrees(cls, lat_deg: float, lon_deg: float, alt_m: float = 0.0) -> "StationGeodetic":
        return cls(math.radians(lat_deg), math.radians(lon_deg), alt_m)


@dataclass(frozen=True)
class RadarParams:
    """Waveform and power settings of the imaging radar.

    Any two of ``peak_power``, ``avg_power`` and ``duty_cycle`` fix the third;
    supplying all three inconsistently is an error.
    """

    carrier_freq: float
    bandwidth: float
    duty_cycle: float
    peak_power: Optional[float] = None
    avg_power: Optional[float] = None
    prf: Optional[float] = None

    def __post_init__(self):
        if not self.carrier_freq > 0:
            raise ConfigError("carrier frequency must be positive")
        if not self.bandwidth > 0:
            raise ConfigError("bandwidth must be positive")
        if not 0.0 < self.duty_cycle <= 1.0:
            raise ConfigError(f"duty cycle out of range: {self.duty_cycle!r}")
        if self.prf is not None and not self.prf > 0:
            raise ConfigError("prf must be positive")
        pt, pav = self.peak_power, self.avg_power
        if pt is None and pav is None:
            raise ConfigError("one of peak_power / avg_power is required")
        if pt is not None and pav is not None:
            if not math.isclose(pav, pt * self.duty_cycle, rel_tol=1e-9):
                raise ConfigError(
                    f"inconsistent power triple: P_av={pav} != P_t*p_DC={pt * self.duty_cycle}"
                )
        elif pt is None:
            object.__setattr__(self, "peak_power", pav / self.duty_cycle)
        else:
            object.__setattr__(self, "avg_power", pt * self.duty_cycle)
        if not self.peak_power > 0:
            raise ConfigError("power must be positive")

    @property
    def wavelength(self) -> float:
        return C_LIGHT / self.carrier_freq

    @property
    def range_resolution(self) -> float:
        """c / (2 B_w)."""
        return C_LIGHT / (2.0 * self.bandwidth)


@dataclass(frozen=True)
class TimeWindow:
    start: datetime
    end: datetime

    def __post_init__(self):
        object.__setattr__(self, "start", as_utc(self.start))
        object.__setattr__(self, "end", as_utc(self.end))
        if not self.end > self.start:
            raise ConfigError("time window end must be after start")

    @property
    def duration(self) -> float:
        return (self.end - self.start).total_seconds()
