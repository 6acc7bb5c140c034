"""Command-line front end: scenario files in, CSV out.

Exit status is 0 on success, 1 for usage or configuration errors and 2 when the
scenario cannot satisfy the request (target not visible, rotation unreachable,
no rotation at all).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import bounds, link, recipes, report, spectrum, tradeoff
from .core import C_LIGHT, ConfigError, DbValue, InfeasibleError, parse_utc
from .orbit import find_passes
from .scenario import BUILTIN_SCENARIOS, resolve_scenario

log = logging.getLogger("isarlimits")

DEFAULT_CARRIER = 16.7e9


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _add_angle(p, name: str, help_: str, required=False):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument(f"--{name}", type=float, help=f"{help_} [rad]")
    g.add_argument(f"--{name}-deg", type=float, help=f"{help_} [deg]")


def _add_ratio(p, name: str, help_: str, required=False):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument(f"--{name}", type=float, help=f"{help_} [linear]")
    g.add_argument(f"--{name}-db", type=float, help=f"{help_} [dB]")


def _angle(args, name: str, default=None) -> Optional[float]:
    key = name.replace("-", "_")
    if getattr(args, key, None) is not None:
        return getattr(args, key)
    deg = getattr(args, key + "_deg", None)
    if deg is not None:
        return math.radians(deg)
    return default


def _ratio(args, name: str, default=None) -> Optional[DbValue]:
    key = name.replace("-", "_")
    if getattr(args, key, None) is not None:
        return DbValue.from_linear(getattr(args, key))
    d = getattr(args, key + "_db", None)
    if d is not None:
        return DbValue.from_db(d)
    return default


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _grid(lo: float, hi: float, step: float) -> List[float]:
    if not step > 0 or hi < lo:
        raise UsageError("grid needs step > 0 and max >= min")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(n)]


def _scenario(args, required=True):
    if args.scenario is None:
        if required:
            raise UsageError("--scenario is required")
        return None
    return resolve_scenario(args.scenario)


def _wavelength(args) -> float:
    if getattr(args, "wavelength", None) is not None:
        return args.wavelength
    if getattr(args, "carrier_freq", None) is not None:
        return C_LIGHT / args.carrier_freq
    sc = _scenario(args, required=False)
    return sc.radar.wavelength if sc else C_LIGHT / DEFAULT_CARRIER


def _k(args, sc=None) -> int:
    if args.k is not None:
        return args.k
    if sc is not None:
        return sc.imaging.k_scatterers
    raise UsageError("--k is required")


def _t_start(args, sc):
    if getattr(args, "t_start", None):
        return parse_utc(args.t_start)
    return tradeoff.imaging_start(sc, getattr(args, "pass_index", 1) - 1)


def _emit(args, header, rows):
    text = report.to_csv(header, rows)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_bounds(args):
    lam = _wavelength(args)
    theta = _angle(args, "theta")
    rho = _ratio(args, "psnr")
    rep = bounds.compute_bounds(bounds.BoundsInput(lam, theta, rho, args.k, args.t_cpi))
    if rep.sru_variant == "general" and args.k == 2:
        log.warning("PSNR below the K = 2 arcsin domain; upper bound uses the general branch")
    _emit(args, report.BOUNDS_HEADER, [report.bounds_row(theta, rho.db, args.k, rep)])


def cmd_sweep_ratio(args):
    lam = _wavelength(args)
    theta = _angle(args, "theta", math.radians(recipes.THETA_RAYLEIGH_DEG))
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        for d in _grid(args.psnr_db_min, args.psnr_db_max, args.psnr_db_step):
            rep = bounds.compute_bounds(bounds.BoundsInput(lam, theta, DbValue.from_db(d), k))
            rows.append(report.bounds_row(theta, d, k, rep))
    _emit(args, report.BOUNDS_HEADER, rows)


def cmd_sensitivities(args):
    lam = _wavelength(args)
    theta = _angle(args, "theta")
    rho = _ratio(args, "psnr")
    inp = bounds.BoundsInput(lam, theta, rho, args.k)
    s = bounds.srl_sensitivities(inp)
    row = [math.degrees(theta), rho.db, args.k, bounds.compute_bounds(inp).delta_a_srl]
    _emit(args, report.SENSITIVITY_HEADER, [row + [s.d_srl_d_theta, s.d_srl_d_psnr, s.d_srl_d_k]])


def cmd_passes(args):
    sc = _scenario(args)
    el = tradeoff.elements_of(sc)
    mask = _angle(args, "mask", sc.mask)
    step = args.step if args.step else (1.0 if el.period < 4 * 3600 else 10.0)
    passes = find_passes(el, sc.station, sc.window, mask=mask, step=step)
    if not passes:
        log.warning("no visible pass in the window")
    _emit(args, report.PASS_HEADER, report.pass_rows(passes))


def cmd_theta(args):
    sc = _scenario(args)
    t0 = _t_start(args, sc)
    if args.t_cpi:
        cpis = _floats(args.t_cpi)
    else:
        cpis = _grid(0.0, args.t_cpi_max, args.t_cpi_step)
    rng = tradeoff.slant_range(sc, t0)
    rows = []
    for T in cpis:
        rows.append(
            [t0, T, math.degrees(tradeoff.theta_of(sc, t0, T)), math.degrees(tradeoff.theta_of(sc, t0, T, "numeric")), rng]
        )
    _emit(args, report.THETA_HEADER, rows)


def _passes_for(args, sc):
    passes = tradeoff.scenario_passes(sc)
    if not passes:
        raise InfeasibleError("no visible pass in the scenario window")
    if args.pass_index == 0:
        return passes
    if args.pass_index > len(passes):
        raise InfeasibleError(f"window holds {len(passes)} passes")
    return [passes[args.pass_index - 1]]


def _default_step(sc) -> float:
    period = tradeoff.elements_of(sc).period
    return 10.0 if period < 4 * 3600 else 300.0


def cmd_requirements(args):
    sc = _scenario(args)
    k = _k(args, sc)
    srl = args.desired_srl or sc.desired_srl
    rho_min = _ratio(args, "psnr-min", DbValue.from_db(sc.imaging.psnr_min_db))
    step = args.step or _default_step(sc)
    times = [t for p in _passes_for(args, sc) for t in tradeoff.pass_times(p, step)]
    if args.mode == "link":
        if args.t_cpi is None:
            raise UsageError("--mode link needs --t-cpi")
        target = _ratio(args, "psnr") or rho_min
        _emit(args, report.LINK_HEADER, report.link_rows(tradeoff.link_sweep(sc, times, args.t_cpi, target)))
        return
    theta = _angle(args, "theta", bounds.required_theta(srl, sc.radar.wavelength, rho_min, k))
    pts = tradeoff.min_requirements(sc, times, theta, srl, k, rho_min, method=args.theta_method)
    _emit(args, report.REQUIREMENT_HEADER, report.requirement_rows(pts))


def cmd_tradeoff(args):
    sc = _scenario(args)
    k = _k(args, sc)
    t0 = _t_start(args, sc)
    p_dc = args.p_dc or sc.radar.duty_cycle
    srl_target = args.desired_srl or sc.desired_srl
    T = args.t_cpi
    energy = args.energy if args.energy is not None else (args.p_av or sc.radar.avg_power) * T
    srl = tradeoff.srl_of_tcpi_energy(sc, t0, T, energy, k, method=args.theta_method)
    theta = tradeoff.theta_of(sc, t0, T, args.theta_method)
    rng = tradeoff.slant_range(sc, t0)
    rho = link.psnr_from_energy(sc.budget, energy, rng)
    pt_req = tradeoff.pt_for_target(sc, srl_target, t0, T, p_dc, k, method=args.theta_method)
    rho_min = DbValue.from_db(sc.imaging.psnr_min_db)
    pt_min = tradeoff.min_pt(sc, srl_target, theta, T, p_dc, k, rho_min, rng)
    row = [t0, T, math.degrees(theta), p_dc, energy, rho.db, srl, srl_target, pt_req, pt_min]
    _emit(args, report.TRADEOFF_HEADER, [row])


def cmd_duty_sweep(args):
    sc = _scenario(args)
    k = _k(args, sc)
    t0 = _t_start(args, sc)
    p_av = args.p_av or sc.radar.avg_power
    energy = args.energy or recipes.DUTY_SWEEP_ENERGY
    pdc = _floats(args.p_dc) if args.p_dc else _grid(args.p_dc_min, args.p_dc_max, args.p_dc_step)
    pts = tradeoff.duty_cycle_sweep(sc, t0, energy, p_av, pdc, k, method=args.theta_method)
    _emit(args, report.DUTY_HEADER, report.duty_rows(pts))


def cmd_orbit_tradeoff(args):
    sc = _scenario(args)
    k = _k(args, sc)
    rho_min = _ratio(args, "psnr-min", DbValue.from_db(sc.imaging.psnr_min_db))
    srl = args.desired_srl or sc.desired_srl
    step = args.step or _default_step(sc)
    times = [t for p in _passes_for(args, sc) for t in tradeoff.pass_times(p, step)]
    pts = tradeoff.pav_tcpi_tradeoff(sc, times, _floats(args.t_cpi), srl, k, rho_min, method=args.theta_method)
    _emit(args, report.ORBIT_TRADEOFF_HEADER, report.orbit_tradeoff_rows(pts))


def cmd_simulate(args):
    rho = _ratio(args, "psnr", None)
    if rho is None:
        raise UsageError("--psnr or --psnr-db is required")
    if args.separations:
        seps = _floats(args.separations)
    else:
        seps = list(np.geomspace(args.sep_min, args.sep_max, args.sep_count))
    curve = spectrum.phase_transition_sweep(
        args.k,
        rho,
        args.t_cpi,
        args.n_samples,
        seps,
        args.trials,
        args.seed,
        c_sv=args.c_sv,
        noise=args.noise,
        random_phase=args.random_phase,
    )
    log.info("50%% success at D/D_RL = %.4f (bounds %.4f .. %.4f)", curve.midpoint(), curve.srl, curve.sru)
    _emit(args, report.CURVE_HEADER, report.curve_rows(curve))


def cmd_witness(args):
    rho = _ratio(args, "psnr", None)
    if rho is None:
        raise UsageError("--psnr or --psnr-db is required")
    sigma = 1.0 / math.sqrt(rho.linear)
    d_rl = 1.0 / args.t_cpi
    if args.d_over_drl is not None:
        d = args.d_over_drl * d_rl
    else:
        d = args.d_over_srl * bounds.lower_ratio(rho, args.k) * d_rl
    w = spectrum.indistinguishability_search(
        args.k, sigma, 1.0, math.pi * args.t_cpi, d, n_samples=args.n_samples, max_sweeps=args.max_sweeps, seed=args.seed
    )
    if w is None:
        log.warning("no witness found within the search budget (inconclusive)")
        _emit(args, report.WITNESS_HEADER, [])
        return
    log.info("witness: max data deviation %.4g < sigma %.4g", w.deviation, w.sigma)
    _emit(args, report.WITNESS_HEADER, report.witness_rows(w))


def cmd_reproduce(args):
    if not args.recipe:
        for name in recipes.names():
            sys.stdout.write(f"{name}\t{recipes.REGISTRY[name].anchor}\n")
        return
    out = args.out if args.out not in (None, "-") else "reproduce_out"
    for name in args.recipe:
        if name not in recipes.REGISTRY:
            raise UsageError(f"unknown recipe {name!r}; run 'reproduce' without arguments for the list")
    for name in args.recipe:
        path = recipes.run(name, out)
        log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> Parser:
    p = Parser(prog="isarlimits", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", default=False)
    sub = p.add_subparsers(dest="command", parser_class=Parser, metavar="COMMAND")

    def command(name, fn, help_, scenario=False, out=True):
        c = sub.add_parser(name, help=help_, description=help_)
        c.set_defaults(func=fn)
        c.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        c.add_argument("--scenario", help=f"scenario file or builtin ({', '.join(BUILTIN_SCENARIOS)})", required=scenario)
        if out:
            c.add_argument("--out", default="-", help="output CSV path (default stdout)")
        return c

    def wave(c):
        g = c.add_mutually_exclusive_group()
        g.add_argument("--wavelength", type=float, help="[m]")
        g.add_argument("--carrier-freq", type=float, help="[Hz]")

    def theta_method(c):
        c.add_argument("--theta-method", choices=tradeoff.METHODS, default="closed-form")

    c = command("bounds", cmd_bounds, "Rayleigh limit and both computational-limit bounds")
    wave(c)
    _add_angle(c, "theta", "cumulative rotation", required=True)
    _add_ratio(c, "psnr", "peak SNR", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--t-cpi", type=float, help="CPI length [s] for the Doppler-domain limits")

    c = command("sweep-ratio", cmd_sweep_ratio, "bounds over a K x PSNR grid")
    wave(c)
    _add_angle(c, "theta", "cumulative rotation")
    c.add_argument("--k-min", type=int, default=2)
    c.add_argument("--k-max", type=int, default=50)
    c.add_argument("--psnr-db-min", type=float, default=0.0)
    c.add_argument("--psnr-db-max", type=float, default=100.0)
    c.add_argument("--psnr-db-step", type=float, default=1.0)

    c = command("sensitivities", cmd_sensitivities, "derivatives of the super-resolution limit")
    wave(c)
    _add_angle(c, "theta", "cumulative rotation", required=True)
    _add_ratio(c, "psnr", "peak SNR", required=True)
    c.add_argument("--k", type=int, required=True)

    c = command("passes", cmd_passes, "visibility passes in the scenario window", scenario=True)
    _add_angle(c, "mask", "elevation mask")
    c.add_argument("--step", type=float, help="scan step [s]")

    c = command("theta", cmd_theta, "cumulative rotation against CPI length (closed form and numeric)", scenario=True)
    c.add_argument("--t-start", help="CPI start (ISO-8601); default mid-pass")
    c.add_argument("--pass", dest="pass_index", type=int, default=1, help="pass used for the default start")
    c.add_argument("--t-cpi", help="comma-separated CPI lengths [s]")
    c.add_argument("--t-cpi-max", type=float, default=60.0)
    c.add_argument("--t-cpi-step", type=float, default=5.0)

    c = command("requirements", cmd_requirements, "minimum CPI and average power over passes", scenario=True)
    c.add_argument("--mode", choices=("min", "link"), default="min")
    c.add_argument("--pass", dest="pass_index", type=int, default=0, help="1-based pass, 0 for all")
    c.add_argument("--step", type=float, help="time step [s]")
    c.add_argument("--k", type=int)
    c.add_argument("--desired-srl", type=float, help="[m]; default range resolution")
    _add_angle(c, "theta", "target rotation; default where the minimum PSNR meets the resolution")
    _add_ratio(c, "psnr-min", "minimum PSNR")
    _add_ratio(c, "psnr", "PSNR target for --mode link")
    c.add_argument("--t-cpi", type=float, help="CPI length for --mode link [s]")
    theta_method(c)

    c = command("tradeoff", cmd_tradeoff, "SRL of one CPI and the peak power that meets the target", scenario=True)
    c.add_argument("--t-start")
    c.add_argument("--pass", dest="pass_index", type=int, default=1)
    c.add_argument("--t-cpi", type=float, required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--energy", type=float, help="[J]")
    g.add_argument("--p-av", type=float, help="[W]; energy = p_av * t_cpi")
    c.add_argument("--p-dc", type=float)
    c.add_argument("--k", type=int)
    c.add_argument("--desired-srl", type=float)
    theta_method(c)

    c = command("duty-sweep", cmd_duty_sweep, "duty cycle against CPI length at constant energy", scenario=True)
    c.add_argument("--t-start")
    c.add_argument("--pass", dest="pass_index", type=int, default=1)
    c.add_argument("--energy", type=float, help=f"[J] (default {recipes.DUTY_SWEEP_ENERGY:g})")
    c.add_argument("--p-av", type=float, help="[W]; fixes P_t = p_av / scenario duty cycle")
    c.add_argument("--p-dc", help="comma-separated duty cycles")
    c.add_argument("--p-dc-min", type=float, default=0.03)
    c.add_argument("--p-dc-max", type=float, default=0.30)
    c.add_argument("--p-dc-step", type=float, default=0.01)
    c.add_argument("--k", type=int)
    theta_method(c)

    c = command("orbit-tradeoff", cmd_orbit_tradeoff, "average power against CPI length over passes", scenario=True)
    c.add_argument("--pass", dest="pass_index", type=int, default=1, help="1-based pass, 0 for all")
    c.add_argument("--step", type=float)
    c.add_argument("--t-cpi", required=True, help="comma-separated CPI lengths [s]")
    c.add_argument("--k", type=int)
    c.add_argument("--desired-srl", type=float)
    _add_ratio(c, "psnr-min", "minimum PSNR")
    theta_method(c)

    c = command("simulate", cmd_simulate, "Monte Carlo success rate against separation")
    c.add_argument("--k", type=int, required=True)
    _add_ratio(c, "psnr", "a_min^2 / sigma^2")
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--n-samples", type=int, default=64)
    c.add_argument("--t-cpi", type=float, default=1.0)
    c.add_argument("--separations", help="comma-separated D/D_RL values")
    c.add_argument("--sep-min", type=float, default=0.02)
    c.add_argument("--sep-max", type=float, default=5.0)
    c.add_argument("--sep-count", type=int, default=30)
    c.add_argument("--c-sv", type=float, default=spectrum.C_SV)
    c.add_argument("--noise", choices=spectrum.NOISE_MODELS, default="bounded")
    c.add_argument("--random-phase", action="store_true")

    c = command("witness", cmd_witness, "search for two configurations the data cannot separate")
    c.add_argument("--k", type=int, required=True)
    _add_ratio(c, "psnr", "a_min^2 / sigma^2")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--d-over-srl", type=float, default=0.2)
    g.add_argument("--d-over-drl", type=float)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--n-samples", type=int, default=64)
    c.add_argument("--t-cpi", type=float, default=1.0)
    c.add_argument("--max-sweeps", type=int, default=400)

    c = command("reproduce", cmd_reproduce, "build named datasets; no name lists them", out=False)
    c.add_argument("recipe", nargs="*")
    c.add_argument("--out", default="reproduce_out", help="output directory")
    return p


def run(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="isarlimits: %(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            log.setLevel(logging.INFO)
        if not getattr(args, "command", None):
            raise UsageError("a command is required")
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"isarlimits: error[usage]: {exc}\n")
        return 1
    except InfeasibleError as exc:
        sys.stderr.write(f"isarlimits: error[infeasible]: {exc}\n")
        return 2
    except (ConfigError, ValueError, OSError) as exc:
        sys.stderr.write(f"isarlimits: error[config]: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
