"""CSV writers with fixed headers.

Numbers are written with ``repr`` so output is exact and byte-stable; instants as
ISO-8601 UTC with a ``Z`` suffix.
"""

from __future__ import annotations

import csv
import io
import math
from datetime import datetime
from typing import Iterable, List, Sequence

from .bounds import BoundsReport
from .core import format_utc

BOUNDS_HEADER = ["theta_deg", "psnr_db", "k", "delta_a_rl_m", "delta_a_srl_m", "delta_a_sru_m", "r_l", "r_u"]
SENSITIVITY_HEADER = ["theta_deg", "psnr_db", "k", "delta_a_srl_m", "d_srl_d_theta", "d_srl_d_psnr", "d_srl_d_k"]
PASS_HEADER = ["rise_utc", "set_utc", "duration_s", "max_elev_deg"]
THETA_HEADER = ["t_utc", "t_cpi_s", "theta_closed_deg", "theta_numeric_deg", "range_m"]
LINK_HEADER = ["t_utc", "range_m", "required_pav_w", "psnr_db"]
DUTY_HEADER = ["p_dc", "t_cpi_s", "theta_deg", "psnr_db", "srl_m", "feasible"]
REQUIREMENT_HEADER = ["t_utc", "min_pav_w", "min_tcpi_s"]
TRADEOFF_HEADER = [
    "t_utc",
    "t_cpi_s",
    "theta_deg",
    "p_dc",
    "energy_j",
    "psnr_db",
    "srl_m",
    "desired_srl_m",
    "pt_required_w",
    "pt_min_w",
]
ORBIT_TRADEOFF_HEADER = ["t_utc", "t_cpi_s", "theta_deg", "required_pav_w", "feasible"]
CURVE_HEADER = ["d_over_drl", "success_rate", "n_trials", "srl_over_drl", "sru_over_drl"]
WITNESS_HEADER = ["config", "index", "position_hz", "amp_real", "amp_imag", "deviation", "sigma"]


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return format_utc(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(float(value))
    if hasattr(value, "item"):  # numpy scalar
        return fmt(value.item())
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def bounds_row(theta: float, psnr_db: float, k: int, rep: BoundsReport) -> List:
    return [
        math.degrees(theta),
        psnr_db,
        k,
        rep.delta_a_rl,
        rep.delta_a_srl,
        rep.delta_a_sru,
        rep.r_l,
        rep.r_u,
    ]


def pass_rows(passes) -> List[List]:
    return [[p.rise, p.set, p.duration, math.degrees(p.max_elevation)] for p in passes]


def duty_rows(points) -> List[List]:
    return [
        [p.p_dc, p.t_cpi, math.degrees(p.theta_delta), p.psnr.db, p.srl, p.feasible] for p in points
    ]


def requirement_rows(points) -> List[List]:
    return [[p.t, p.min_pav, p.min_tcpi] for p in points]


def orbit_tradeoff_rows(points) -> List[List]:
    return [[p.t, p.t_cpi, math.degrees(p.theta_delta), p.required_pav, p.feasible] for p in points]


def link_rows(points) -> List[List]:
    return [[p.t, p.range, p.required_pav, p.psnr.db] for p in points]


def curve_rows(curve) -> List[List]:
    return [
        [float(d), float(r), curve.n_trials, curve.srl, curve.sru]
        for d, r in zip(curve.separations, curve.success_rate)
    ]


def witness_rows(w) -> List[List]:
    rows = []
    for name, sset in (("reference", w.first), ("alternative", w.second)):
        for i, (x, a) in enumerate(zip(sset.positions, sset.amplitudes)):
            rows.append([name, i, float(x), float(a.real), float(a.imag), w.deviation, w.sigma])
    return rows
