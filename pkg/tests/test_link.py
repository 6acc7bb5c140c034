import math

import pytest
from hypothesis import given, settings, strategies as st

from isarlimits import link
from isarlimits.core import BOLTZMANN, DbValue
from isarlimits.link import LinkBudget, ResourceState

pos = st.floats(min_value=1e-3, max_value=1e3)


def test_cst_reassociation():
    b = LinkBudget(tx_gain=3.1e4, effective_aperture=7.3, integration_efficiency=0.6, noise_figure=2.2, system_losses=4.1, rcs=2.0)
    den = 4 * math.pi * 4 * math.pi * BOLTZMANN * 290.0 * 2.2 * 4.1
    want = 0.6 * (7.3 * (3.1e4 * 1.0)) / den
    assert link.c_st(b) == pytest.approx(want, rel=1e-12)


def test_default_constant_magnitude():
    assert link.c_st(LinkBudget()) == pytest.approx(6.34e22, rel=1e-2)


@settings(max_examples=100, deadline=None)
@given(e=pos, r=st.floats(min_value=1e5, max_value=4e7), s=pos)
def test_psnr_scaling_laws(e, r, s):
    b = LinkBudget()
    base = link.psnr_from_energy(b, e, r).linear
    assert link.psnr_from_energy(b, 2 * e, r).linear == pytest.approx(2 * base, rel=1e-12)
    assert link.psnr_from_energy(b, e, 2 * r).linear == pytest.approx(base / 16, rel=1e-12)
    b2 = LinkBudget(rcs=s)
    assert link.psnr_from_energy(b2, e, r).linear == pytest.approx(s * base, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(e=pos, r=st.floats(min_value=1e5, max_value=4e7))
def test_energy_roundtrip(e, r):
    b = LinkBudget()
    rho = link.psnr_from_energy(b, e, r)
    assert link.required_energy(b, r, rho) == pytest.approx(e, rel=1e-9)


def test_power_helpers():
    b = LinkBudget()
    res = ResourceState(1000.0, 10.0, 2e6)
    rho = link.psnr(b, res)
    assert link.required_pav(b, 10.0, 2e6, rho) == pytest.approx(1000.0)
    assert link.required_peak_power(b, 10.0, 2e6, rho, 0.2) == pytest.approx(5000.0)
    with pytest.raises(ValueError):
        ResourceState(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        LinkBudget(integration_efficiency=1.5)
    with pytest.raises(ValueError):
        LinkBudget(system_losses=0.5)
    with pytest.raises(ValueError):
        link.required_pav(b, 0.0, 1e6, DbValue.from_db(10))
