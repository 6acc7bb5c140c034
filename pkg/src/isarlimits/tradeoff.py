"""Resource tradeoffs: cumulative rotation vs CPI, transmit power, duty cycle and energy.

Every relation here composes three pieces: the cumulative rotation ``theta(T_CPI)``
from the orbit model, the PSNR from the range equation at the slant range of the CPI
start, and the super-resolution limit.  With ``n = 4K - 2``::

    da_SRL = lam/(2 theta) (2/e)/pi (C sigma E / R^4)^(-1/n)
    P_t    = R^4 / (C sigma p_DC T) (da pi theta / (lam/e))^(-n)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from datetime import datetime, timedelta
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np
from scipy import optimize

from . import bounds, link
from .core import DbValue, InfeasibleError, j2000_seconds
from .orbit import (
    NoEffectiveRotation,
    OrbitalElements,
    PassWindow,
    ThetaClampWarning,
    find_passes,
    los_eci,
    parse_tle,
    pass_containing,
    theta_delta_closed_form,
    theta_delta_numeric,
)
from .scenario import ScenarioConfig

THETA_TOL = 1e-8  # rad, two orders inside the 1e-6 rad requirement
MAX_BISECTIONS = 200
SCAN_POINTS = 64
METHODS = ("closed-form", "numeric")


class ThetaUnreachable(InfeasibleError):
    """The requested rotation cannot be accumulated before the target sets."""

    def __init__(self, target: float, max_theta: float):
        super().__init__(
            f"theta unreachable in pass: target {math.degrees(target):.4f} deg, "
            f"maximum achievable {math.degrees(max_theta):.4f} deg"
        )
        self.target = target
        self.max_theta = max_theta


@dataclass(frozen=True)
class TradeoffPoint:
    t_cpi: float
    theta_delta: float
    p_dc: float
    p_t: float
    p_av: float
    energy: float
    psnr: DbValue
    srl: float
    feasible: bool


@dataclass(frozen=True)
class RequirementPoint:
    t: datetime
    range: float
    min_tcpi: float
    min_pav: float
    theta_reached: float
    feasible: bool


# ---------------------------------------------------------------------------
# Geometry helpers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _elements(tle1: str, tle2: str, name: str) -> OrbitalElements:
    return parse_tle(tle1, tle2, name)


def elements_of(sc: ScenarioConfig) -> OrbitalElements:
    return _elements(sc.tle1, sc.tle2, sc.name)


def slant_range(sc: ScenarioConfig, t: datetime) -> float:
    return float(np.linalg.norm(los_eci(elements_of(sc), sc.station, j2000_seconds(t))))


@lru_cache(maxsize=32)
def _window_passes(sc: ScenarioConfig, step: float) -> tuple:
    return tuple(find_passes(elements_of(sc), sc.station, sc.window, mask=sc.mask, step=step))


def scenario_passes(sc: ScenarioConfig, step: Optional[float] = None) -> List[PassWindow]:
    if step is None:
        step = 1.0 if elements_of(sc).period < 4 * 3600 else 10.0
    return list(_window_passes(sc, step))


def visible_pass(sc: ScenarioConfig, t: datetime) -> PassWindow:
    # unclipped passes of the window are already known; search only outside them
    for p in scenario_passes(sc):
        if not p.clipped and p.rise <= t <= p.set:
            return p
    p = pass_containing(elements_of(sc), sc.station, t, mask=sc.mask)
    if p is None:
        raise InfeasibleError(f"target is not visible at {t.isoformat()}")
    return p


def imaging_start(sc: ScenarioConfig, pass_index: int = 0) -> datetime:
    """The configured imaging instant, else the midpoint of a pass in the window."""
    if sc.imaging.t_start is not None:
        return sc.imaging.t_start
    passes = scenario_passes(sc)
    if not passes:
        raise InfeasibleError("no visible pass in the scenario window")
    if pass_index >= len(passes):
        raise InfeasibleError(f"window holds {len(passes)} passes, pass {pass_index + 1} requested")
    p = passes[pass_index]
    return p.rise + timedelta(seconds=0.5 * p.duration)


def theta_of(sc: ScenarioConfig, t_start: datetime, t_cpi: float, method: str = "closed-form") -> float:
    """Cumulative rotation over [t_start, t_start + t_cpi]."""
    el = elements_of(sc)
    if method == "closed-form":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ThetaClampWarning)
            return theta_delta_closed_form(el, sc.station, t_start, t_cpi)[0]
    if method == "numeric":
        return theta_delta_numeric(el, sc.station, t_start, t_cpi)
    raise ValueError(f"unknown theta method {method!r}")


def _time_left(sc: ScenarioConfig, t_start: datetime) -> float:
    p = visible_pass(sc, t_start)
    return (p.set - t_start).total_seconds()


# ---------------------------------------------------------------------------
# Single-point relations
# ---------------------------------------------------------------------------


def srl_of_tcpi_energy(
    sc: ScenarioConfig,
    t_start: datetime,
    t_cpi: float,
    energy: float,
    k: int,
    method: str = "closed-form",
    check_pass: bool = True,
) -> float:
    """Super-resolution limit of a CPI of length ``t_cpi`` carrying ``energy`` joules."""
    if not t_cpi > 0:
        raise InfeasibleError("t_cpi must be positive: no rotation is accumulated")
    if check_pass and t_cpi > _time_left(sc, t_start):
        raise InfeasibleError("CPI extends outside the visible pass")
    theta = theta_of(sc, t_start, t_cpi, method)
    rho = link.psnr_from_energy(sc.budget, energy, slant_range(sc, t_start))
    return bounds.srl(sc.radar.wavelength, theta, rho, k)


def pt_for_target(
    sc: ScenarioConfig,
    desired_srl: float,
    t_start: datetime,
    t_cpi: float,
    p_dc: float,
    k: int,
    method: str = "closed-form",
) -> float:
    """Peak power at which a CPI of ``t_cpi`` at duty cycle ``p_dc`` reaches ``desired_srl``."""
    if not desired_srl > 0:
        raise ValueError("desired_srl must be positive")
    if not 0.0 < p_dc <= 1.0:
        raise ValueError("duty cycle out of range")
    theta = theta_of(sc, t_start, t_cpi, method) if t_cpi > 0 else 0.0
    if not theta > 0:
        raise InfeasibleError("zero cumulative rotation: no power reaches the target resolution")
    rng = slant_range(sc, t_start)
    n = 4 * k - 2
    lam = sc.radar.wavelength
    log_pt = (
        4.0 * math.log(rng)
        - math.log(link.c_st(sc.budget) * sc.budget.rcs * p_dc * t_cpi)
        - n * math.log(desired_srl * math.pi / (lam / math.e))
        - n * math.log(theta)  # the acos^(2-4K) factor
    )
    return math.exp(log_pt)


def resolution_pt_term(desired_srl, theta, t_cpi, p_dc, k, wavelength, budget, rng) -> float:
    """Peak power needed for the resolution alone."""
    rho = bounds.required_psnr(desired_srl, wavelength, theta, k)
    return link.required_peak_power(budget, t_cpi, rng, rho, p_dc)


def psnr_pt_term(t_cpi, p_dc, budget, rng, psnr_min: Optional[DbValue]) -> float:
    """Peak power needed to reach the minimum PSNR alone."""
    if psnr_min is None:
        return 0.0
    return link.required_peak_power(budget, t_cpi, rng, psnr_min, p_dc)


def min_pt(
    sc: ScenarioConfig,
    desired_srl: float,
    theta_delta: float,
    t_cpi: float,
    p_dc: float,
    k: int,
    psnr_min: Optional[DbValue],
    rng: float,
) -> float:
    """Lower limit on the peak power: the larger of the resolution and PSNR-floor terms."""
    if not (theta_delta > 0 and t_cpi > 0):
        raise InfeasibleError("theta_delta and t_cpi must be positive")
    res = resolution_pt_term(desired_srl, theta_delta, t_cpi, p_dc, k, sc.radar.wavelength, sc.budget, rng)
    return max(res, psnr_pt_term(t_cpi, p_dc, sc.budget, rng, psnr_min))


def tcpi_for_theta(
    sc: ScenarioConfig,
    t_start: datetime,
    theta_target: float,
    method: str = "closed-form",
    t_max: Optional[float] = None,
) -> float:
    """Shortest CPI from ``t_start`` whose cumulative rotation reaches ``theta_target``.

    Scans up to the end of the pass (or ``t_max``), then refines the first bracketing
    interval until the rotation is within THETA_TOL of the target.
    """
    if theta_target < 0:
        raise ValueError("theta_target must be non-negative")
    if theta_target == 0:
        return 0.0
    if t_max is None:
        t_max = _time_left(sc, t_start)
    if not t_max > 0:
        raise ThetaUnreachable(theta_target, 0.0)

    def f(T):
        return theta_of(sc, t_start, T, method)

    try:
        grid = np.linspace(0.0, t_max, SCAN_POINTS + 1)[1:]
        lo, best = 0.0, 0.0
        for T in grid:
            th = f(float(T))
            if th >= theta_target:
                hi = float(T)
                break
            lo, best = float(T), max(best, th)
        else:
            raise ThetaUnreachable(theta_target, best)
    except NoEffectiveRotation:
        raise ThetaUnreachable(theta_target, 0.0) from None

    def g(T):
        return f(T) - theta_target

    if g(hi) < THETA_TOL:
        return hi
    # Brent keeps the bracket of bisection but needs far fewer rotation evaluations
    T = optimize.brentq(g, lo, hi, xtol=1e-12, maxiter=MAX_BISECTIONS)
    if abs(g(T)) >= THETA_TOL:
        # fall back to plain halving on the rare non-smooth bracket
        for _ in range(MAX_BISECTIONS):
            T = 0.5 * (lo + hi)
            err = g(T)
            if abs(err) < THETA_TOL:
                break
            if err < 0:
                lo = T
            else:
                hi = T
    return T


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def make_point(sc, t_start, t_cpi, p_t, p_dc, k, time_left, method="closed-form") -> TradeoffPoint:
    energy = p_t * p_dc * t_cpi
    rho = link.psnr_from_energy(sc.budget, energy, slant_range(sc, t_start))
    try:
        theta = theta_of(sc, t_start, t_cpi, method)
    except NoEffectiveRotation:
        theta = 0.0
    srl = bounds.srl(sc.radar.wavelength, theta, rho, k) if theta > 0 else math.inf
    return TradeoffPoint(
        t_cpi=t_cpi,
        theta_delta=theta,
        p_dc=p_dc,
        p_t=p_t,
        p_av=p_t * p_dc,
        energy=energy,
        psnr=rho,
        srl=srl,
        feasible=bool(theta > 0 and t_cpi <= time_left),
    )


def duty_cycle_sweep(
    sc: ScenarioConfig,
    t_start: datetime,
    energy: float,
    p_av: float,
    p_dc_values: Sequence[float],
    k: int,
    method: str = "closed-form",
) -> List[TradeoffPoint]:
    """Exchange duty cycle for CPI length at constant energy.

    The transmitter peak power is fixed at ``p_av`` divided by the scenario duty
    cycle, so each duty cycle gives ``T_CPI = E / (P_t p_DC)``.  Points whose CPI
    outlasts the pass are kept and flagged infeasible.
    """
    if not (energy > 0 and p_av > 0):
        raise ValueError("energy and p_av must be positive")
    for p in p_dc_values:
        if not 0.0 < p <= 1.0:
            raise ValueError(f"duty cycle out of range: {p!r}")
    p_t = p_av / sc.radar.duty_cycle
    left = _time_left(sc, t_start)
    return [make_point(sc, t_start, energy / (p_t * p), p_t, p, k, left, method) for p in p_dc_values]


def pass_times(p: PassWindow, step: float) -> List[datetime]:
    """Sample instants strictly inside a pass."""
    n = int(p.duration // step)
    return [p.rise + timedelta(seconds=step * (i + 0.5)) for i in range(n) if step * (i + 0.5) < p.duration]


def min_requirements(
    sc: ScenarioConfig,
    times: Sequence[datetime],
    theta_target: float,
    desired_srl: float,
    k: int,
    psnr_min: Optional[DbValue],
    p_dc: Optional[float] = None,
    method: str = "closed-form",
) -> List[RequirementPoint]:
    """Shortest CPI and smallest average power for an image starting at each instant."""
    p_dc = sc.radar.duty_cycle if p_dc is None else p_dc
    out = []
    for t in times:
        rng = slant_range(sc, t)
        try:
            T = tcpi_for_theta(sc, t, theta_target, method)
            theta = theta_of(sc, t, T, method)
            pav = min_pt(sc, desired_srl, theta, T, p_dc, k, psnr_min, rng) * p_dc
            out.append(RequirementPoint(t, rng, T, pav, theta, True))
        except InfeasibleError as exc:
            reached = getattr(exc, "max_theta", 0.0)
            out.append(RequirementPoint(t, rng, math.nan, math.nan, reached, False))
    return out


@dataclass(frozen=True)
class PowerCpiPoint:
    t: datetime
    t_cpi: float
    theta_delta: float
    required_pav: float
    feasible: bool


def pav_tcpi_tradeoff(
    sc: ScenarioConfig,
    times: Sequence[datetime],
    t_cpi_values: Sequence[float],
    desired_srl: float,
    k: int,
    psnr_min: Optional[DbValue],
    p_dc: Optional[float] = None,
    method: str = "closed-form",
) -> List[PowerCpiPoint]:
    """Average power needed for ``desired_srl`` over a grid of start times and CPI lengths."""
    p_dc = sc.radar.duty_cycle if p_dc is None else p_dc
    out = []
    for t in times:
        rng = slant_range(sc, t)
        left = _time_left(sc, t)
        for T in t_cpi_values:
            try:
                theta = theta_of(sc, t, T, method)
            except NoEffectiveRotation:
                theta = 0.0
            if theta > 0:
                pav = min_pt(sc, desired_srl, theta, T, p_dc, k, psnr_min, rng) * p_dc
            else:
                pav = math.inf
            out.append(PowerCpiPoint(t, T, theta, pav, bool(theta > 0 and T <= left)))
    return out


@dataclass(frozen=True)
class LinkPoint:
    t: datetime
    range: float
    required_pav: float
    psnr: DbValue


def link_sweep(sc: ScenarioConfig, times: Sequence[datetime], t_cpi: float, psnr_target: DbValue) -> List[LinkPoint]:
    """Average power that reaches ``psnr_target`` within ``t_cpi`` at each instant."""
    out = []
    for t in times:
        rng = slant_range(sc, t)
        out.append(LinkPoint(t, rng, link.required_pav(sc.budget, t_cpi, rng, psnr_target), psnr_target))
    return out
