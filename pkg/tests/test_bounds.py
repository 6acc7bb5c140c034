import math

import pytest
from hypothesis import given, settings, strategies as st

from isarlimits import bounds
from isarlimits.bounds import BoundsInput, compute_bounds
from isarlimits.core import C_LIGHT, DbValue

LAM = C_LIGHT / 16.7e9


def inp(theta_deg=0.5, psnr_db=26.0, k=5, t_cpi=None):
    return BoundsInput(LAM, math.radians(theta_deg), DbValue.from_db(psnr_db), k, t_cpi)


def test_rayleigh_is_half_wavelength_over_rotation():
    rep = compute_bounds(inp(theta_deg=6.86, t_cpi=4.0))
    assert rep.delta_a_rl == pytest.approx(LAM / (2 * math.radians(6.86)))
    assert rep.d_rl == 0.25
    assert rep.d_srl == pytest.approx(0.25 * rep.r_l)
    assert rep.d_sru == pytest.approx(0.25 * rep.r_u)


def test_bound_formulas_direct():
    rho = 10 ** 2.6
    rep = compute_bounds(inp(psnr_db=26.0, k=5))
    assert rep.r_l == pytest.approx(2 / (math.e * math.pi) * rho ** (-1 / 18), rel=1e-12)
    assert rep.r_u == pytest.approx(2.36 * math.e * rho ** (-1 / 18), rel=1e-12)
    assert rep.sru_variant == "general"


def test_k2_arcsin_branch():
    rep = compute_bounds(inp(psnr_db=30.0, k=2))
    assert rep.sru_variant == "arcsin-K2"
    assert rep.r_u == pytest.approx(3 / math.pi * math.asin(2 * 1000 ** (-1 / 6)), rel=1e-12)
    low = compute_bounds(inp(psnr_db=10.0, k=2))
    assert low.sru_variant == "general"


@settings(max_examples=200, deadline=None)
@given(
    theta=st.floats(min_value=1e-3, max_value=0.5),
    psnr_db=st.floats(min_value=0.0, max_value=100.0),
    k=st.integers(min_value=2, max_value=60),
)
def test_srl_below_rayleigh(theta, psnr_db, k):
    rep = compute_bounds(BoundsInput(LAM, theta, DbValue.from_db(psnr_db), k))
    assert rep.delta_a_srl < rep.delta_a_rl
    assert rep.r_l < 2 / (math.e * math.pi) + 1e-15


@settings(max_examples=100, deadline=None)
@given(psnr_db=st.floats(min_value=0.0, max_value=100.0), k=st.integers(min_value=2, max_value=59))
def test_srl_grows_with_k_and_shrinks_with_psnr(psnr_db, k):
    p = DbValue.from_db(psnr_db)
    assert bounds.lower_ratio(p, k + 1) >= bounds.lower_ratio(p, k)
    assert bounds.lower_ratio(DbValue.from_db(psnr_db + 1), k) < bounds.lower_ratio(p, k)


def test_huge_psnr_stays_finite():
    rep = compute_bounds(inp(psnr_db=3000.0, k=2))
    assert rep.delta_a_srl > 0 and math.isfinite(rep.delta_a_srl)


@pytest.mark.parametrize(
    "kw",
    [dict(theta_deg=0.0), dict(k=1), dict(t_cpi=0.0)],
)
def test_input_validation(kw):
    with pytest.raises(ValueError):
        inp(**kw)
    with pytest.raises(ValueError):
        BoundsInput(-1.0, 0.1, DbValue.from_db(10), 2)


def test_sensitivities_vs_finite_difference():
    i = inp(theta_deg=0.5, psnr_db=26.0, k=5)
    s = bounds.srl_sensitivities(i)
    base = bounds.srl(LAM, i.theta_delta, i.psnr, 5)
    h = 1e-6
    fd_theta = (bounds.srl(LAM, i.theta_delta + h, i.psnr, 5) - bounds.srl(LAM, i.theta_delta - h, i.psnr, 5)) / (2 * h)
    assert s.d_srl_d_theta == pytest.approx(fd_theta, rel=1e-5)
    rho = i.psnr.linear
    hr = rho * 1e-6
    fd_rho = (
        bounds.srl(LAM, i.theta_delta, DbValue.from_linear(rho + hr), 5)
        - bounds.srl(LAM, i.theta_delta, DbValue.from_linear(rho - hr), 5)
    ) / (2 * hr)
    assert s.d_srl_d_psnr == pytest.approx(fd_rho, rel=1e-5)
    hk = 1e-5
    fd_k = (bounds.srl(LAM, i.theta_delta, i.psnr, 5 + hk) - bounds.srl(LAM, i.theta_delta, i.psnr, 5 - hk)) / (2 * hk)
    assert s.d_srl_d_k == pytest.approx(fd_k, rel=1e-5)
    assert s.d_srl_d_theta < 0 < s.d_srl_d_k and s.d_srl_d_psnr < 0
    assert base > 0


def test_inversions():
    target = 0.05
    rho = bounds.required_psnr(target, LAM, math.radians(1.0), 4)
    assert bounds.srl(LAM, math.radians(1.0), rho, 4) == pytest.approx(target, rel=1e-12)
    th = bounds.required_theta(target, LAM, DbValue.from_db(30), 4)
    assert bounds.srl(LAM, th, DbValue.from_db(30), 4) == pytest.approx(target, rel=1e-12)


def test_theta_bounds_ordering():
    lo, hi = bounds.theta_bounds(0.075, LAM, 10, DbValue.from_db(24), DbValue.from_db(60))
    assert lo < hi
    assert bounds.srl(LAM, lo, DbValue.from_db(60), 10) == pytest.approx(0.075)
    with pytest.raises(ValueError):
        bounds.theta_bounds(0.075, LAM, 10, DbValue.from_db(60), DbValue.from_db(24))
    with pytest.raises(ValueError):
        bounds.required_theta(0.0, LAM, DbValue.from_db(20), 2)
