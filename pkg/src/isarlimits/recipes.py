"""Named dataset recipes.

Each recipe writes one or more CSV files plus ``<name>.manifest.json`` describing
what the data shows, which acceptance checks apply, and the parameters used.
Absolute watts depend on the illustrative link-budget constants; only shapes and
ratios are meaningful for those recipes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import bounds, link, report, tradeoff
from .core import DbValue, InfeasibleError
from .scenario import ScenarioConfig, builtin_scenario

THETA_RAYLEIGH_DEG = 6.86  # makes the Rayleigh limit equal to the range resolution
THETA_FACTORS_DEG = 0.5
DUTY_SWEEP_PAV = 1000.0
DUTY_SWEEP_ENERGY = 30e3
DUTY_SWEEP_THETA_DEG = 1.4


@dataclass(frozen=True)
class Recipe:
    name: str
    anchor: str
    checks: Tuple[str, ...]
    build: Callable[[Path], Dict]  # writes files, returns manifest parameters


REGISTRY: Dict[str, Recipe] = {}


def recipe(name: str, anchor: str, checks=()):
    def deco(fn):
        REGISTRY[name] = Recipe(name, anchor, tuple(checks), fn)
        return fn

    return deco


def _write(path: Path, header, rows) -> str:
    path.write_text(report.to_csv(header, rows), encoding="utf-8")
    return path.name


def _bounds(lam, theta, psnr_db, k) -> bounds.BoundsReport:
    return bounds.compute_bounds(bounds.BoundsInput(lam, theta, DbValue.from_db(psnr_db), k))


def _pass(sc: ScenarioConfig, index: int = 0):
    passes = tradeoff.scenario_passes(sc)
    if index >= len(passes):
        raise InfeasibleError(f"scenario has {len(passes)} passes")
    return passes[index]


def _default_theta(sc: ScenarioConfig) -> float:
    """Rotation at which the minimum PSNR just meets the desired resolution."""
    return bounds.required_theta(
        sc.desired_srl, sc.radar.wavelength, DbValue.from_db(sc.imaging.psnr_min_db), sc.imaging.k_scatterers
    )


# ---------------------------------------------------------------------------
# Closed-form bound recipes
# ---------------------------------------------------------------------------


@recipe("fig2", "ratio of the SRL and SRU bounds to the Rayleigh limit over K in [2, 50] and PSNR in [0, 100] dB", ["4"])
def _fig2(out: Path) -> Dict:
    sc = builtin_scenario("cosmos2494")
    lam, theta = sc.radar.wavelength, math.radians(THETA_RAYLEIGH_DEG)
    rows = []
    for k in range(2, 51):
        for db in range(0, 101):
            rows.append(report.bounds_row(theta, float(db), k, _bounds(lam, theta, db, k)))
    return {"files": [_write(out / "fig2.csv", report.BOUNDS_HEADER, rows)], "theta_deg": THETA_RAYLEIGH_DEG}


@recipe("fig3", "Rayleigh limit against both bounds over the first COSMOS 2494 pass for K in {2, 10} and P_av in {600 W, 400 kW}", ["6"])
def _fig3(out: Path) -> Dict:
    sc = builtin_scenario("cosmos2494")
    p = _pass(sc)
    theta = math.radians(THETA_RAYLEIGH_DEG)
    rows = []
    for t in tradeoff.pass_times(p, 10.0):
        try:
            T = tradeoff.tcpi_for_theta(sc, t, theta)
        except InfeasibleError:
            continue
        rng = tradeoff.slant_range(sc, t)
        for pav in (600.0, 400e3):
            rho = link.psnr(sc.budget, link.ResourceState(pav, T, rng))
            for k in (2, 10):
                rep = bounds.compute_bounds(bounds.BoundsInput(sc.radar.wavelength, theta, rho, k))
                rows.append([t, pav, T] + report.bounds_row(theta, rho.db, k, rep))
    header = ["t_utc", "p_av_w", "t_cpi_s"] + report.BOUNDS_HEADER
    return {"files": [_write(out / "fig3.csv", header, rows)], "theta_deg": THETA_RAYLEIGH_DEG}


@recipe("fig4", "PSNR over the first COSMOS 2494 pass for P_av in {600 W, 400 kW}")
def _fig4(out: Path) -> Dict:
    sc = builtin_scenario("cosmos2494")
    p = _pass(sc)
    theta = math.radians(THETA_RAYLEIGH_DEG)
    rows = []
    for t in tradeoff.pass_times(p, 10.0):
        try:
            T = tradeoff.tcpi_for_theta(sc, t, theta)
        except InfeasibleError:
            continue
        rng = tradeoff.slant_range(sc, t)
        for pav in (600.0, 400e3):
            rows.append([t, pav, T, rng, link.psnr(sc.budget, link.ResourceState(pav, T, rng)).db])
    header = ["t_utc", "p_av_w", "t_cpi_s", "range_m", "psnr_db"]
    return {"files": [_write(out / "fig4.csv", header, rows)], "theta_deg": THETA_RAYLEIGH_DEG}


@recipe("fig5", "SRL and its derivative against rotation, PSNR and K, and the SRL/RL ratio against K", ["2", "3", "4"])
def _fig5(out: Path) -> Dict:
    lam = builtin_scenario("cosmos2494").radar.wavelength
    th0 = math.radians(THETA_FACTORS_DEG)
    rows = []

    def add(panel, theta, db, k, deriv):
        inp = bounds.BoundsInput(lam, theta, DbValue.from_db(db), k)
        rep = bounds.compute_bounds(inp)
        rows.append([panel, math.degrees(theta), float(db), k, rep.delta_a_srl, rep.r_l, deriv(bounds.srl_sensitivities(inp))])

    for th_deg in np.round(np.arange(0.1, 2.0001, 0.05), 4):
        add("theta", math.radians(th_deg), 26.0, 5, lambda s: s.d_srl_d_theta)
    for k in (2, 5, 10):
        for db in range(0, 51):
            add("psnr", th0, float(db), k, lambda s: s.d_srl_d_psnr)
    for k in range(2, 51):
        add("k", th0, 26.0, k, lambda s: s.d_srl_d_k)
    for db in (6.0, 12.0, 24.0):
        for k in range(2, 51):
            add("ratio", th0, db, k, lambda s: s.d_srl_d_k)
    header = ["panel", "theta_deg", "psnr_db", "k", "delta_a_srl_m", "r_l", "derivative"]
    return {"files": [_write(out / "fig5.csv", header, rows)]}


@recipe("table3", "SRL at 10, 25 and 40 dB for K in {2, 5, 10} and the reduction per 15 dB step", ["1"])
def _table3(out: Path) -> Dict:
    lam = builtin_scenario("cosmos2494").radar.wavelength
    th = math.radians(THETA_FACTORS_DEG)
    rows = []
    for k in (2, 5, 10):
        prev = None
        for db in (10.0, 25.0, 40.0):
            rep = _bounds(lam, th, db, k)
            red = math.nan if prev is None else 100.0 * (1.0 - rep.delta_a_srl / prev)
            rows.append(report.bounds_row(th, db, k, rep) + [red])
            prev = rep.delta_a_srl
    header = report.BOUNDS_HEADER + ["reduction_pct"]
    return {"files": [_write(out / "table3.csv", header, rows)], "theta_deg": THETA_FACTORS_DEG}


@recipe("table4", "SRL/RL ratio at 6, 12 and 24 dB for K in {5, 50} and its change from the previous PSNR step", ["4"])
def _table4(out: Path) -> Dict:
    lam = builtin_scenario("cosmos2494").radar.wavelength
    th = math.radians(THETA_FACTORS_DEG)
    rows = []
    for k in (5, 50):
        prev = None
        for db in (6.0, 12.0, 24.0):
            rep = _bounds(lam, th, db, k)
            change = math.nan if prev is None else 100.0 * (1.0 - rep.r_l / prev)
            rows.append([k, db, 100.0 * rep.r_l, change])
            prev = rep.r_l
    return {"files": [_write(out / "table4.csv", ["k", "psnr_db", "ratio_pct", "change_pct"], rows)]}


# ---------------------------------------------------------------------------
# Orbit-coupled recipes
# ---------------------------------------------------------------------------


@recipe("fig6", "minimum PSNR, CPI and average power over the first COSMOS 2494 pass for rotations of 1.0 to 1.6 deg")
def _fig6(out: Path) -> Dict:
    sc = builtin_scenario("cosmos2494")
    k = sc.imaging.k_scatterers
    p = _pass(sc)
    rows = []
    for th_deg in np.round(np.arange(1.0, 1.6001, 0.1), 4):
        th = math.radians(th_deg)
        rho = bounds.required_psnr(sc.desired_srl, sc.radar.wavelength, th, k)
        for t in tradeoff.pass_times(p, 10.0):
            try:
                T = tradeoff.tcpi_for_theta(sc, t, th)
                pav = link.required_pav(sc.budget, T, tradeoff.slant_range(sc, t), rho)
                rows.append([t, float(th_deg), rho.db, T, pav, True])
            except InfeasibleError:
                rows.append([t, float(th_deg), rho.db, math.nan, math.nan, False])
    header = ["t_utc", "theta_deg", "required_psnr_db", "min_tcpi_s", "min_pav_w", "feasible"]
    return {"files": [_write(out / "fig6.csv", header, rows)], "k": k}


@recipe("fig7", "duty cycle traded for CPI length at constant energy with P_av = 1 kW, and the CPI/duty cycle that hold 1.4 deg over the pass", ["13"])
def _fig7(out: Path) -> Dict:
    sc = builtin_scenario("cosmos2494")
    k = sc.imaging.k_scatterers
    t0 = tradeoff.imaging_start(sc)
    pdc = [round(0.03 + 0.01 * i, 2) for i in range(28)]
    pts = tradeoff.duty_cycle_sweep(sc, t0, DUTY_SWEEP_ENERGY, DUTY_SWEEP_PAV, pdc, k)
    files = [_write(out / "fig7.csv", report.DUTY_HEADER, report.duty_rows(pts))]

    p_t = DUTY_SWEEP_PAV / sc.radar.duty_cycle
    th = math.radians(DUTY_SWEEP_THETA_DEG)
    rows = []
    for t in tradeoff.pass_times(_pass(sc), 10.0):
        try:
            T = tradeoff.tcpi_for_theta(sc, t, th)
        except InfeasibleError:
            continue
        p_dc = DUTY_SWEEP_ENERGY / (p_t * T)
        rho = link.psnr_from_energy(sc.budget, DUTY_SWEEP_ENERGY, tradeoff.slant_range(sc, t))
        srl = bounds.srl(sc.radar.wavelength, tradeoff.theta_of(sc, t, T), rho, k)
        rows.append([t, T, p_dc, DUTY_SWEEP_THETA_DEG, rho.db, srl, p_dc <= 1.0])
    header = ["t_utc", "t_cpi_s", "p_dc", "theta_deg", "psnr_db", "srl_m", "feasible"]
    files.append(_write(out / "fig7_pass.csv", header, rows))
    return {"files": files, "energy_j": DUTY_SWEEP_ENERGY, "p_av_w": DUTY_SWEEP_PAV, "t_start": t0.isoformat()}


def _requirements(name: str, scenario: str, step: float, out: Path) -> Dict:
    sc = builtin_scenario(scenario)
    th = _default_theta(sc)
    rho_min = DbValue.from_db(sc.imaging.psnr_min_db)
    rows = []
    for p in tradeoff.scenario_passes(sc):
        pts = tradeoff.min_requirements(
            sc, tradeoff.pass_times(p, step), th, sc.desired_srl, sc.imaging.k_scatterers, rho_min
        )
        rows.extend(report.requirement_rows(pts))
    return {
        "files": [_write(out / f"{name}.csv", report.REQUIREMENT_HEADER, rows)],
        "theta_deg": math.degrees(th),
        "scenario": scenario,
    }


def _orbit_tradeoff(name: str, scenario: str, step: float, cpis, out: Path) -> Dict:
    sc = builtin_scenario(scenario)
    rho_min = DbValue.from_db(sc.imaging.psnr_min_db)
    p = _pass(sc)
    pts = tradeoff.pav_tcpi_tradeoff(
        sc, tradeoff.pass_times(p, step), cpis, sc.desired_srl, sc.imaging.k_scatterers, rho_min
    )
    return {
        "files": [_write(out / f"{name}.csv", report.ORBIT_TRADEOFF_HEADER, report.orbit_tradeoff_rows(pts))],
        "t_cpi_s": list(cpis),
        "scenario": scenario,
    }


@recipe("fig8", "minimum average power and CPI in each COSMOS 2494 pass at the rotation that meets the minimum PSNR", ["9"])
def _fig8(out):
    return _requirements("fig8", "cosmos2494", 10.0, out)


@recipe("fig9", "average power against CPI length across the first COSMOS 2494 pass")
def _fig9(out):
    return _orbit_tradeoff("fig9", "cosmos2494", 20.0, [5.0, 10.0, 20.0, 30.0, 45.0, 60.0, 90.0, 120.0], out)


@recipe("fig10", "minimum average power and CPI over the NAVSTAR 81 pass")
def _fig10(out):
    return _requirements("fig10", "navstar81", 300.0, out)


@recipe("fig11", "average power against CPI length across the NAVSTAR 81 pass")
def _fig11(out):
    return _orbit_tradeoff("fig11", "navstar81", 600.0, [500.0, 1000.0, 2000.0, 3000.0, 4000.0, 5000.0], out)


@recipe("fig12", "minimum average power and CPI over the BeiDou 9 arc")
def _fig12(out):
    return _requirements("fig12", "beidou9", 900.0, out)


@recipe("fig13", "average power against CPI length across the BeiDou 9 arc")
def _fig13(out):
    return _orbit_tradeoff("fig13", "beidou9", 1800.0, [2000.0, 4000.0, 8000.0, 12000.0], out)


def names() -> List[str]:
    return list(REGISTRY)


def run(name: str, out_dir) -> Path:
    """Build a recipe into ``out_dir``; returns the manifest path."""
    if name not in REGISTRY:
        raise KeyError(f"unknown recipe {name!r}")
    r = REGISTRY[name]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = r.build(out)
    manifest = {
        "recipe": r.name,
        "anchor": r.anchor,
        "acceptance_checks": list(r.checks),
        **params,
    }
    path = out / f"{name}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
