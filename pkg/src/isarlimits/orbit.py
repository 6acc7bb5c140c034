"""Circular two-body target motion, radar line of sight and cumulative rotation angle.

Frames used here:

* ECI   -- Earth-centred inertial, z along the rotation axis.
* SCF   -- target-fixed stellar frame; the target is Earth-pointing and three-axis
  stabilised, so the frame rotates with the orbital argument of latitude.
  ``M_eci_scf = (Rz(raan) Rx(i) Rz(u))^T`` maps ECI vectors into it.
* Img0  -- imaging frame built in SCF at a reference instant: ``y_im`` along the
  LOS, ``z_im`` along the LOS rotation axis, ``x_im = y_im x z_im`` (cross range).

All internal times are float seconds since J2000 (UTC); the public functions take
``datetime`` instants.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from .core import (
    EARTH_RADIUS,
    EARTH_ROTATION_RATE,
    GM_EARTH,
    ConfigError,
    InfeasibleError,
    StationGeodetic,
    TimeWindow,
    as_utc,
    from_j2000_seconds,
    gmst,
    j2000_seconds,
)

logger = logging.getLogger(__name__)

ACOS_CLAMP_TOL = 1e-12
MIN_LOS_RATE = 1e-10  # rad/s; below this the LOS is considered non-rotating
TWO_PI = 2.0 * math.pi


class TLEError(ConfigError):
    """Malformed two-line element set."""


class NoEffectiveRotation(InfeasibleError):
    """The LOS does not rotate relative to the target, so no imaging frame exists."""


class ThetaClampWarning(RuntimeWarning):
    """The closed-form acos argument left [-1, 1] by more than rounding."""


# ---------------------------------------------------------------------------
# Elements and TLE parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitalElements:
    """Keplerian elements of the target. Angles in radians, SI units otherwise.

    ``eccentricity`` is kept for reporting only; propagation treats the orbit as
    circular, so the anomaly at epoch is used directly as an angle along the orbit.
    """

    semi_major_axis: float
    eccentricity: float
    inclination: float
    raan: float
    arg_perigee: float
    true_anomaly_at_epoch: float
    mean_motion: float
    epoch: datetime
    name: str = ""
    catalog_number: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "epoch", as_utc(self.epoch))
        if not self.semi_major_axis > EARTH_RADIUS:
            raise ConfigError("semi-major axis must exceed the Earth radius")
        if not 0.0 <= self.eccentricity < 1.0:
            raise ConfigError("eccentricity must lie in [0, 1)")
        if not self.mean_motion > 0:
            raise ConfigError("mean motion must be positive")

    @classmethod
    def from_mean_motion(cls, mean_motion, **kwargs) -> "OrbitalElements":
        """Build elements with ``a`` from Kepler's third law."""
        a = (GM_EARTH / mean_motion**2) ** (1.0 / 3.0)
        return cls(semi_major_axis=a, mean_motion=mean_motion, **kwargs)

    @property
    def epoch_seconds(self) -> float:
        return j2000_seconds(self.epoch)

    @property
    def period(self) -> float:
        return TWO_PI / self.mean_motion


def tle_checksum(line: str) -> int:
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _field(line: str, lo: int, hi: int, what: str) -> float:
    # lo/hi are 1-based inclusive column numbers
    text = line[lo - 1 : hi]
    try:
        return float(text)
    except ValueError as exc:
        raise TLEError(f"cannot parse {what} from {text!r}") from exc


def parse_tle(line1: str, line2: str, name: str = "") -> OrbitalElements:
    """Parse a NORAD two-line element set.

    Mean motion is converted from rev/day to rad/s and the semi-major axis follows
    from Kepler's third law. The mean anomaly is stored as the anomaly at epoch,
    which is exact for the circular model used downstream.
    """
    line1 = line1.rstrip("\r\n")
    line2 = line2.rstrip("\r\n")
    for num, line in (("1", line1), ("2", line2)):
        if len(line) != 69:
            raise TLEError(f"TLE line {num} must be 69 characters, got {len(line)}")
        if line[0] != num:
            raise TLEError(f"TLE line {num} must start with {num!r}")
        if not line[68].isdigit():
            raise TLEError(f"TLE line {num} has no checksum digit")
        if tle_checksum(line) != int(line[68]):
            raise TLEError(
                f"TLE line {num} checksum failure: expected {tle_checksum(line)}, found {line[68]}"
            )
    if line1[2:7] != line2[2:7]:
        raise TLEError("catalog numbers of the two TLE lines differ")

    yy = int(_field(line1, 19, 20, "epoch year"))
    day = _field(line1, 21, 32, "epoch day")
    year = 2000 + yy if yy < 57 else 1900 + yy
    epoch = datetime(year, 1, 1, tzinfo=timezone.utc) + timedelta(days=day - 1.0)

    incl = math.radians(_field(line2, 9, 16, "inclination"))
    raan = math.radians(_field(line2, 18, 25, "RAAN"))
    ecc_text = line2[26:33].strip()
    if not ecc_text.isdigit():
        raise TLEError(f"cannot parse eccentricity from {ecc_text!r}")
    ecc = float("0." + ecc_text)
    argp = math.radians(_field(line2, 35, 42, "argument of perigee"))
    mean_anom = math.radians(_field(line2, 44, 51, "mean anomaly"))
    rev_per_day = _field(line2, 53, 63, "mean motion")
    n = rev_per_day * TWO_PI / 86400.0
    try:
        catnum = int(line1[2:7])
    except ValueError:
        catnum = None

    return OrbitalElements.from_mean_motion(
        n,
        eccentricity=ecc,
        inclination=incl,
        raan=raan,
        arg_perigee=argp,
        true_anomaly_at_epoch=mean_anom,
        epoch=epoch,
        name=name.strip(),
        catalog_number=catnum,
    )


# ---------------------------------------------------------------------------
# Vector kinematics (vectorised over time)
# ---------------------------------------------------------------------------


def _rz(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rx(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def arg_of_latitude(el: OrbitalElements, s):
    """omega + theta(t) under uniform circular motion."""
    return el.arg_perigee + el.true_anomaly_at_epoch + el.mean_motion * (np.asarray(s) - el.epoch_seconds)


def target_eci(el: OrbitalElements, s) -> np.ndarray:
    """Target position Rz(raan) Rx(i) Rz(omega) [a cos theta, a sin theta, 0]."""
    u = arg_of_latitude(el, s)
    a = el.semi_major_axis
    cO, sO = math.cos(el.raan), math.sin(el.raan)
    ci, si = math.cos(el.inclination), math.sin(el.inclination)
    cu, su = np.cos(u), np.sin(u)
    return np.stack(
        [a * (cO * cu - sO * ci * su), a * (sO * cu + cO * ci * su), a * si * su], axis=-1
    )


def station_eci(st: StationGeodetic, s, sidereal=None) -> np.ndarray:
    """Station position Rz(theta_G + lon) [Rc cos lat, 0, Rc sin lat]."""
    if sidereal is None:
        sidereal = gmst(s)
    lam = np.asarray(sidereal) + st.longitude
    rc = st.radius
    cp, sp = math.cos(st.latitude), math.sin(st.latitude)
    lam = np.asarray(lam, dtype=float)
    return np.stack(
        [rc * cp * np.cos(lam), rc * cp * np.sin(lam), np.full_like(lam, rc * sp)], axis=-1
    )


def eci_to_scf(el: OrbitalElements, s) -> np.ndarray:
    """M_ECI-SCF at a single instant."""
    u = float(arg_of_latitude(el, s))
    return (_rz(el.raan) @ _rx(el.inclination) @ _rz(u)).T


def _deci_to_scf_du(el: OrbitalElements, u: float) -> np.ndarray:
    # d/du of Rz(u)^T Rx(i)^T Rz(raan)^T
    c, s = math.cos(u), math.sin(u)
    drz_t = np.array([[-s, c, 0.0], [-c, -s, 0.0], [0.0, 0.0, 0.0]])
    return drz_t @ _rx(el.inclination).T @ _rz(el.raan).T


def los_eci(el: OrbitalElements, st: StationGeodetic, s) -> np.ndarray:
    return target_eci(el, s) - station_eci(st, s)


def los_scf(el: OrbitalElements, st: StationGeodetic, s: float) -> np.ndarray:
    return eci_to_scf(el, s) @ los_eci(el, st, s)


def los_scf_rate(el: OrbitalElements, st: StationGeodetic, s: float) -> np.ndarray:
    """Analytic d/dt of the LOS expressed in SCF."""
    u = float(arg_of_latitude(el, s))
    lam = gmst(s) + st.longitude
    rc = st.radius
    cp = math.cos(st.latitude)
    e = los_eci(el, st, s)
    dm = _deci_to_scf_du(el, u) * el.mean_motion
    a = el.semi_major_axis
    cO, sO = math.cos(el.raan), math.sin(el.raan)
    ci, si = math.cos(el.inclination), math.sin(el.inclination)
    cu, su = math.cos(u), math.sin(u)
    da = el.mean_motion * a * np.array([-cO * su - sO * ci * cu, -sO * su + cO * ci * cu, si * cu])
    dc = EARTH_ROTATION_RATE * rc * cp * np.array([-math.sin(lam), math.cos(lam), 0.0])
    return dm @ e + eci_to_scf(el, s) @ (da - dc)


def elevation(el: OrbitalElements, st: StationGeodetic, s):
    """Elevation of the target above the station's local horizontal plane [rad]."""
    c = station_eci(st, s)
    e = target_eci(el, s) - c
    up = c / np.linalg.norm(c, axis=-1, keepdims=True)
    sin_el = np.sum(e * up, axis=-1) / np.linalg.norm(e, axis=-1)
    return np.arcsin(np.clip(sin_el, -1.0, 1.0))


def range_law_of_cosines(el: OrbitalElements, st: StationGeodetic, s) -> np.ndarray:
    """Radar-target distance from the spherical law of cosines."""
    u = arg_of_latitude(el, s)
    lam = gmst(s) + st.longitude
    cO, sO = math.cos(el.raan), math.sin(el.raan)
    ci, si = math.cos(el.inclination), math.sin(el.inclination)
    cp, sp = math.cos(st.latitude), math.sin(st.latitude)
    cos_eta = (
        (cO * np.cos(u) - sO * ci * np.sin(u)) * np.cos(lam) * cp
        + (sO * np.cos(u) + cO * ci * np.sin(u)) * np.sin(lam) * cp
        + si * np.sin(u) * sp
    )
    a, rc = el.semi_major_axis, st.radius
    return np.sqrt(a * a + rc * rc - 2.0 * a * rc * cos_eta)


@dataclass(frozen=True)
class LosState:
    e_ca_eci: np.ndarray
    e_ca_scf: np.ndarray
    range: float
    elevation: float
    sidereal_angle: float


def los_state(el: OrbitalElements, st: StationGeodetic, t: datetime) -> LosState:
    s = j2000_seconds(t)
    e = los_eci(el, st, s)
    return LosState(
        e_ca_eci=e,
        e_ca_scf=eci_to_scf(el, s) @ e,
        range=float(np.linalg.norm(e)),
        elevation=float(elevation(el, st, s)),
        sidereal_angle=gmst(s),
    )


# ---------------------------------------------------------------------------
# Visibility passes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PassWindow:
    rise: datetime
    set: datetime
    max_elevation: float
    duration: float
    clipped: bool = False  # True when the pass is cut by the search window


def find_passes(
    el: OrbitalElements,
    st: StationGeodetic,
    window: TimeWindow,
    mask: float = 0.0,
    step: float = 1.0,
    max_epoch_offset_days: float = 30.0,
) -> List[PassWindow]:
    """All maximal intervals inside ``window`` where elevation exceeds ``mask``.

    Elevation is scanned on a uniform ``step`` grid and each crossing is refined by
    root bracketing to well below one second.
    """
    s0, s1 = j2000_seconds(window.start), j2000_seconds(window.end)
    for edge in (s0, s1):
        if abs(edge - el.epoch_seconds) > max_epoch_offset_days * 86400.0:
            raise ConfigError("search window is too far from the element epoch")
    if not step > 0:
        raise ValueError("step must be positive")
    n = int(math.floor((s1 - s0) / step)) + 1
    grid = s0 + step * np.arange(n)
    if grid[-1] < s1:
        grid = np.append(grid, s1)
    h = elevation(el, st, grid) - mask
    above = h > 0.0
    if not above.any():
        return []

    def f(x):
        return float(elevation(el, st, x)) - mask

    edges = np.diff(above.astype(np.int8))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0])
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        ends.append(len(grid) - 1)

    passes = []
    for i0, i1 in zip(starts, ends):
        clipped = False
        if i0 == 0:
            rise = grid[0]
            clipped = True
        else:
            rise = optimize.brentq(f, grid[i0 - 1], grid[i0], xtol=1e-4)
        if i1 == len(grid) - 1:
            set_ = grid[-1]
            clipped = True
        else:
            set_ = optimize.brentq(f, grid[i1], grid[i1 + 1], xtol=1e-4)
        k = i0 + int(np.argmax(h[i0 : i1 + 1]))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        if hi > lo:
            res = optimize.minimize_scalar(lambda x: -f(x), bounds=(lo, hi), method="bounded")
            peak = max(-res.fun, h[k]) + mask
        else:
            peak = h[k] + mask
        passes.append(
            PassWindow(
                rise=from_j2000_seconds(rise),
                set=from_j2000_seconds(set_),
                max_elevation=float(peak),
                duration=float(set_ - rise),
                clipped=clipped,
            )
        )
    return passes


def pass_containing(
    el: OrbitalElements,
    st: StationGeodetic,
    t: datetime,
    mask: float = 0.0,
    horizon: float = 2 * 86400.0,
) -> Optional[PassWindow]:
    """The visibility pass that contains ``t``, or None when the target is below ``mask``.

    Searches outward from ``t`` in steps of 1/500 of the orbital period; a pass that
    does not end within ``horizon`` seconds is returned clipped there.
    """
    s = j2000_seconds(t)

    def f(x):
        return float(elevation(el, st, x)) - mask

    if f(s) <= 0.0:
        return None
    step = min(max(1.0, el.period / 500.0), 600.0)
    chunk = 256
    edges = []
    clipped = False
    peak = f(s)
    for direction in (-1.0, 1.0):
        a, edge = s, None
        while edge is None and abs(a - s) < horizon:
            grid = a + direction * step * np.arange(1, chunk + 1)
            h = elevation(el, st, grid) - mask
            below = np.nonzero(h <= 0.0)[0]
            if below.size:
                j = int(below[0])
                if j:
                    peak = max(peak, float(h[:j].max()))
                prev = a if j == 0 else grid[j - 1]
                lo, hi = sorted((prev, grid[j]))
                edge = optimize.brentq(f, lo, hi, xtol=1e-4)
            else:
                peak = max(peak, float(h.max()))
                a = grid[-1]
        if edge is None:
            edge = s + direction * horizon
            clipped = True
        edges.append(edge)
    rise, set_ = edges
    return PassWindow(
        rise=from_j2000_seconds(rise),
        set=from_j2000_seconds(set_),
        max_elevation=peak + mask,
        duration=float(set_ - rise),
        clipped=clipped,
    )


# ---------------------------------------------------------------------------
# Imaging frame
# ---------------------------------------------------------------------------


def _cross(a, b) -> np.ndarray:
    # np.cross carries heavy per-call overhead for single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def img0_basis(el: OrbitalElements, st: StationGeodetic, s: float) -> np.ndarray:
    """Rows ``x_im, y_im, z_im`` (in SCF) of the imaging frame at time ``s``."""
    e = los_scf(el, st, s)
    de = los_scf_rate(el, st, s)
    rng = np.linalg.norm(e)
    axis = _cross(e, de)
    rate = np.linalg.norm(axis) / rng**2
    if rate < MIN_LOS_RATE:
        raise NoEffectiveRotation(
            f"no effective rotation: LOS angular rate {rate:.3e} rad/s relative to the target"
        )
    y_im = e / rng
    z_im = axis / np.linalg.norm(axis)
    x_im = _cross(y_im, z_im)
    return np.vstack([x_im, y_im, z_im])


def img0_frame(el: OrbitalElements, st: StationGeodetic, t0: datetime) -> np.ndarray:
    """Imaging frame at ``t0``; raises NoEffectiveRotation for a non-rotating LOS."""
    return img0_basis(el, st, j2000_seconds(t0))


def los_rate(el: OrbitalElements, st: StationGeodetic, t: datetime) -> float:
    """Angular rate of the LOS relative to the target body [rad/s]."""
    s = j2000_seconds(t)
    e = los_scf(el, st, s)
    return float(np.linalg.norm(np.cross(e, los_scf_rate(el, st, s))) / np.dot(e, e))


# ---------------------------------------------------------------------------
# Cumulative rotation angle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaPolynomialConstants:
    """Coefficients of the second-order LOS expansion and the resulting d1..d8.

    ``b`` is dE_ECI/dt at t1, ``c`` the two non-zero rows of dM_ECI-SCF/dt, ``h`` and
    ``g`` the T^2 and T coefficients of E_SCF(t1 + T) in SCF. The ``*_xy`` values are
    the same quantities projected onto the imaging x/y axes.
    """

    b: np.ndarray
    c: np.ndarray
    h: np.ndarray
    g: np.ndarray
    x1: float
    y1: float
    h_xy: Tuple[float, float]
    g_xy: Tuple[float, float]
    d: np.ndarray  # d1..d8
    frame: np.ndarray
    clamp: float = 0.0

    def cos_argument(self, t_cpi) -> np.ndarray:
        d1, d2, d3, d4, d5, d6, d7, d8 = self.d
        T = np.asarray(t_cpi, dtype=float)
        num = T**2 * d1 + T * d2 + d3
        den = T**4 * d4 + T**3 * d5 + T**2 * d6 + T * d7 + d8
        return num / np.sqrt(den)

    def theta(self, t_cpi):
        return np.arccos(np.clip(self.cos_argument(t_cpi), -1.0, 1.0))

    @property
    def acos_identity_residual(self) -> float:
        """|d3 / sqrt(d8) - 1|; zero up to rounding by construction."""
        return abs(self.d[2] / math.sqrt(self.d[7]) - 1.0)


def _frame_seconds(s1: float, t_cpi: float, frame_time) -> float:
    if frame_time is None or frame_time == "midpoint":
        return s1 + 0.5 * t_cpi
    if frame_time == "start":
        return s1
    return j2000_seconds(frame_time)


def theta_constants(
    el: OrbitalElements, st: StationGeodetic, t1: datetime, frame_s: float
) -> ThetaPolynomialConstants:
    """Build the expansion of E_SCF(t1 + T) around t1, projected on the frame at ``frame_s``."""
    s1 = j2000_seconds(t1)
    u1 = float(arg_of_latitude(el, s1))
    lam1 = gmst(s1) + st.longitude
    ns, ng = el.mean_motion, EARTH_ROTATION_RATE
    a, rc = el.semi_major_axis, st.radius
    cO, sO = math.cos(el.raan), math.sin(el.raan)
    ci, si = math.cos(el.inclination), math.sin(el.inclination)
    cp, sp = math.cos(st.latitude), math.sin(st.latitude)

    a11, a12, a13 = a * cO, a * sO * ci, rc * cp
    a21, a22, a23 = a * sO, a * cO * ci, a13
    a31, a32 = a * si, rc * sp
    cu, su = math.cos(u1), math.sin(u1)
    cl, sl = math.cos(lam1), math.sin(lam1)

    e1 = np.array(
        [
            a11 * cu - a12 * su - a13 * cl,
            a21 * cu + a22 * su - a23 * sl,
            a31 * su - a32,
        ]
    )
    b = np.array(
        [
            -a11 * ns * su - a12 * ns * cu + a13 * ng * sl,
            -a21 * ns * su + a22 * ns * cu - a23 * ng * cl,
            a31 * ns * cu,
        ]
    )
    m1 = (_rz(el.raan) @ _rx(el.inclination) @ _rz(u1)).T
    c = (_deci_to_scf_du(el, u1) * ns)[:2]

    i1 = np.array([c[0] @ b, c[1] @ b, 0.0])
    i2 = m1 @ b + np.concatenate([c @ e1, [0.0]])
    e_scf1 = m1 @ e1

    frame = img0_basis(el, st, frame_s)
    x_ax, y_ax = frame[0], frame[1]
    x1, y1 = float(x_ax @ e_scf1), float(y_ax @ e_scf1)
    hx, hy = float(x_ax @ i1), float(y_ax @ i1)
    gx, gy = float(x_ax @ i2), float(y_ax @ i2)

    r2 = x1 * x1 + y1 * y1
    d = np.array(
        [
            x1 * hx + y1 * hy,
            x1 * gx + y1 * gy,
            r2,
            (hx * hx + hy * hy) * r2,
            (2 * hx * gx + 2 * hy * gy) * r2,
            (gx * gx + gy * gy + 2 * hx * x1 + 2 * hy * y1) * r2,
            (2 * gx * x1 + 2 * gy * y1) * r2,
            r2 * r2,
        ]
    )
    return ThetaPolynomialConstants(
        b=b, c=c, h=i1[:2], g=i2, x1=x1, y1=y1, h_xy=(hx, hy), g_xy=(gx, gy), d=d, frame=frame
    )


def theta_delta_closed_form(
    el: OrbitalElements,
    st: StationGeodetic,
    t1: datetime,
    t_cpi: float,
    frame_time=None,
) -> Tuple[float, ThetaPolynomialConstants]:
    """Cumulative LOS rotation over [t1, t1 + t_cpi] from the first-order Taylor model.

    The imaging frame defaults to the CPI midpoint; pass ``frame_time="start"`` to
    anchor it at t1 or a ``datetime`` for any other instant.
    """
    if t_cpi < 0:
        raise ValueError("t_cpi must be non-negative")
    s1 = j2000_seconds(t1)
    consts = theta_constants(el, st, t1, _frame_seconds(s1, t_cpi, frame_time))
    if t_cpi == 0:
        return 0.0, consts
    arg = float(consts.cos_argument(t_cpi))
    excess = max(abs(arg) - 1.0, 0.0)
    if excess > 0.0:
        if excess > ACOS_CLAMP_TOL:
            warnings.warn(f"acos argument exceeds 1 by {excess:.3e}", ThetaClampWarning, stacklevel=2)
        arg = max(-1.0, min(1.0, arg))
        consts = ThetaPolynomialConstants(**{**consts.__dict__, "clamp": excess})
    return math.acos(arg), consts


def theta_delta_numeric(
    el: OrbitalElements,
    st: StationGeodetic,
    t1: datetime,
    t_cpi: float,
    frame_time=None,
) -> float:
    """Angle between the LOS at t1 and t1 + t_cpi, projected on the imaging x-y plane.

    Uses exact circular two-body positions and the full sidereal angle, no Taylor
    truncation.
    """
    if t_cpi < 0:
        raise ValueError("t_cpi must be non-negative")
    s1 = j2000_seconds(t1)
    frame = img0_basis(el, st, _frame_seconds(s1, t_cpi, frame_time))
    p = frame[:2] @ los_scf(el, st, s1)
    q = frame[:2] @ los_scf(el, st, s1 + t_cpi)
    return float(math.atan2(abs(p[0] * q[1] - p[1] * q[0]), p @ q))


@dataclass(frozen=True)
class ImagingGeometry:
    t0: datetime
    t_cpi: float
    theta_delta: float
    omega_a: float
    slant_range: float
    los_angles: np.ndarray = field(repr=False)  # (n, 2): azimuth alpha, elevation beta
    img0_frame: np.ndarray = field(repr=False)


def imaging_geometry(
    el: OrbitalElements, st: StationGeodetic, t1: datetime, t_cpi: float, n_angles: int = 33
) -> ImagingGeometry:
    """Geometry of one CPI starting at ``t1``; the imaging frame is built at its midpoint."""
    if not t_cpi > 0:
        raise ValueError("t_cpi must be positive")
    s1 = j2000_seconds(t1)
    s0 = s1 + 0.5 * t_cpi
    theta, consts = theta_delta_closed_form(el, st, t1, t_cpi)
    frame = consts.frame
    samples = s1 + np.linspace(0.0, t_cpi, n_angles)
    angles = np.empty((n_angles, 2))
    for k, s in enumerate(samples):
        v = frame @ los_scf(el, st, float(s))
        angles[k] = math.atan2(v[0], v[1]), math.asin(v[2] / np.linalg.norm(v))
    return ImagingGeometry(
        t0=from_j2000_seconds(s0),
        t_cpi=t_cpi,
        theta_delta=theta,
        omega_a=theta / t_cpi,
        slant_range=float(np.linalg.norm(los_eci(el, st, s0))),
        los_angles=angles,
        img0_frame=frame,
    )
