import math
from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from isarlimits.core import (
    C_LIGHT,
    ConfigError,
    DbValue,
    RadarParams,
    StationGeodetic,
    TimeWindow,
    format_utc,
    from_j2000_seconds,
    gmst,
    j2000_seconds,
    parse_utc,
)


@given(st.floats(min_value=-200, max_value=200))
def test_db_roundtrip(x):
    v = DbValue.from_db(x)
    assert DbValue.from_linear(v.linear).db == pytest.approx(x, abs=1e-9)


def test_db_rejects_nonpositive():
    with pytest.raises(ValueError):
        DbValue.from_linear(0.0)
    with pytest.raises(ValueError):
        DbValue.from_db(float("nan"))


def test_parse_utc_offsets():
    t = parse_utc("2024-07-05T12:00:00+08:00")
    assert t == datetime(2024, 7, 5, 4, tzinfo=timezone.utc)
    assert format_utc(t) == "2024-07-05T04:00:00Z"
    assert parse_utc("2024-07-05T04:00:00") == t
    with pytest.raises(ConfigError):
        parse_utc("yesterday")


def test_j2000_roundtrip():
    t = parse_utc("2024-07-05T11:03:07.25Z")
    assert from_j2000_seconds(j2000_seconds(t)) == t
    assert j2000_seconds(parse_utc("2000-01-01T12:00:00Z")) == 0.0


def test_gmst_reference_values():
    # GMST at J2000.0 is 280.46061837 deg; one sidereal day later it returns to the same angle
    assert math.degrees(gmst(0.0)) == pytest.approx(280.46061837, abs=1e-6)
    sidereal_day = 86164.0905
    assert gmst(sidereal_day) == pytest.approx(gmst(0.0), abs=2e-6)


def test_radar_params_completes_power_triple():
    r = RadarParams(16.7e9, 2e9, 0.2, avg_power=1000.0)
    assert r.peak_power == pytest.approx(5000.0)
    assert r.range_resolution == pytest.approx(C_LIGHT / 4e9)
    assert r.wavelength == pytest.approx(C_LIGHT / 16.7e9)
    r2 = RadarParams(16.7e9, 2e9, 0.2, peak_power=5000.0)
    assert r2.avg_power == pytest.approx(1000.0)


@pytest.mark.parametrize(
    "kwargs, msg",
    [
        (dict(duty_cycle=0.0, peak_power=1.0), "duty cycle out of range"),
        (dict(duty_cycle=1.5, peak_power=1.0), "duty cycle out of range"),
        (dict(duty_cycle=0.2, peak_power=1000.0, avg_power=1000.0), "inconsistent power triple"),
        (dict(duty_cycle=0.2), "required"),
    ],
)
def test_radar_params_errors(kwargs, msg):
    with pytest.raises(ConfigError, match=msg):
        RadarParams(16.7e9, 2e9, **kwargs)


def test_station_and_window_validation():
    s = StationGeodetic.from_degrees(46, 370)
    assert math.degrees(s.longitude) == pytest.approx(10.0)
    with pytest.raises(ConfigError):
        StationGeodetic(2.0, 0.0)
    t = parse_utc("2024-07-05T00:00:00Z")
    with pytest.raises(ConfigError):
        TimeWindow(t, t)
