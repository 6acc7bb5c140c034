import math

import pytest

from isarlimits.core import ConfigError
from isarlimits.scenario import (
    BUILTIN_SCENARIOS,
    builtin_scenario,
    load_scenario,
    parse_scenario,
    resolve_scenario,
    serialize_scenario,
)

DOC = """
[station]
latitude_deg = 46
longitude_deg = 130

[radar]
carrier_freq_hz = 16.7e9
bandwidth_hz = 2e9
duty_cycle = 0.2
peak_power_w = 5000   # transmitter rating

[target]
name = COSMOS 2494
tle1 = 1 39491U 13078B   24183.51288981  .00004231  00000-0  37027-3 0  9997
tle2 = 2 39491  82.4151 229.6952 0021025 105.6371 254.7173 14.96334548571512

[window]
start = 2024-07-05T12:00:00+08:00
end = 2024-07-06T00:00:00+08:00

[imaging]
k_scatterers = 4
desired_srl_m = 0.05

[budget]
tx_gain_db = 40
rcs_m2 = 2
"""


def test_parse_fields():
    sc = parse_scenario(DOC)
    assert math.degrees(sc.station.latitude) == pytest.approx(46)
    assert sc.radar.avg_power == pytest.approx(1000)
    assert sc.imaging.k_scatterers == 4
    assert sc.desired_srl == 0.05
    assert sc.budget.tx_gain == pytest.approx(1e4)
    assert sc.budget.rcs == 2
    assert sc.window.start.hour == 4


def test_roundtrip_exact():
    sc = parse_scenario(DOC)
    again = parse_scenario(serialize_scenario(sc))
    assert again == sc


@pytest.mark.parametrize("name", BUILTIN_SCENARIOS)
def test_builtins_load_and_roundtrip(name):
    sc = builtin_scenario(name)
    assert parse_scenario(serialize_scenario(sc)) == sc
    assert sc.desired_srl == pytest.approx(sc.radar.range_resolution)


def test_resolve_path_and_name(tmp_path):
    p = tmp_path / "s.cfg"
    p.write_text(DOC)
    assert resolve_scenario(str(p)) == load_scenario(p)
    assert resolve_scenario("navstar81").name.startswith("NAVSTAR")
    with pytest.raises(ConfigError, match="no scenario"):
        resolve_scenario("nowhere")


@pytest.mark.parametrize(
    "edit, msg",
    [
        (lambda d: d.replace("[window]", "[windows]"), "missing section"),
        (lambda d: d.replace("duty_cycle = 0.2", "duty_cycle = 2"), "duty cycle"),
        (lambda d: d.replace("9997", "9998"), "checksum"),
        (lambda d: d.replace("k_scatterers = 4", "k_scatterers = 1"), "k_scatterers"),
        (lambda d: d.replace("bandwidth_hz = 2e9", "bandwidth_hz = fast"), "cannot parse"),
        (lambda d: d.replace("latitude_deg = 46\n", ""), "latitude"),
    ],
)
def test_malformed(edit, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_scenario(edit(DOC))
