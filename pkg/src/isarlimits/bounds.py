"""Rayleigh limit and computational resolution limits for cross-range imaging.

With the cumulative LOS rotation ``theta``, wavelength ``lam``, peak SNR ``rho`` and
``K`` scatterers in a range cell::

    da_RL  = lam / (2 theta)
    da_SRL = da_RL * (2/e)/pi * rho^(-1/(4K-2))
    da_SRU = da_RL * 2.36 e   * rho^(-1/(4K-2))            (general)
    da_SRU = da_RL * 3/pi * asin(2 rho^(-1/6))              (K = 2, rho >= 64)

In the equivalent-coordinate (Doppler) domain the same ratios multiply
``D_RL = 1/T_CPI``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .core import DbValue

LOWER_CONST = 2.0 / (math.e * math.pi)  # 2 e^-1 / pi
UPPER_CONST = 2.36 * math.e
K2_ARCSIN_MIN_PSNR = 64.0  # 2 rho^(-1/6) <= 1


@dataclass(frozen=True)
class BoundsInput:
    wavelength: float
    theta_delta: float
    psnr: DbValue
    k_scatterers: int
    t_cpi: Optional[float] = None

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if not self.theta_delta > 0:
            raise ValueError("theta_delta must be positive")
        if not self.psnr.linear > 0:
            raise ValueError("psnr must be positive")
        if int(self.k_scatterers) != self.k_scatterers or self.k_scatterers < 2:
            raise ValueError("k_scatterers must be an integer >= 2")
        if self.t_cpi is not None and not self.t_cpi > 0:
            raise ValueError("t_cpi must be positive")


@dataclass(frozen=True)
class BoundsReport:
    d_rl: Optional[float]
    delta_a_rl: float
    delta_a_srl: float
    delta_a_sru: float
    r_l: float
    r_u: float
    ordering_holds: bool
    sru_variant: str  # "arcsin-K2" or "general"
    d_srl: Optional[float] = None
    d_sru: Optional[float] = None


@dataclass(frozen=True)
class SensitivityReport:
    d_srl_d_theta: float
    d_srl_d_psnr: float
    # continuous relaxation in K; positive because the limit grows with K
    d_srl_d_k: float


def _exponent(k) -> float:
    return 1.0 / (4.0 * k - 2.0)


def psnr_factor(psnr_linear: float, k) -> float:
    """rho^(-1/(4K-2)), computed in log space so huge rho stays finite."""
    if math.isinf(psnr_linear):
        return 0.0
    return math.exp(-math.log(psnr_linear) * _exponent(k))


def _factor_from_db(psnr: DbValue, k) -> float:
    return 10.0 ** (-psnr.db / 10.0 * _exponent(k))


def rayleigh(inp: BoundsInput) -> Tuple[Optional[float], float]:
    """(D_RL, da_RL); D_RL is None without a CPI length."""
    d_rl = 1.0 / inp.t_cpi if inp.t_cpi is not None else None
    return d_rl, inp.wavelength / (2.0 * inp.theta_delta)


def lower_ratio(psnr: DbValue, k: int) -> float:
    return LOWER_CONST * _factor_from_db(psnr, k)


def upper_ratio(psnr: DbValue, k: int) -> Tuple[float, str]:
    """da_SRU / da_RL and the branch used."""
    if k == 2 and psnr.linear >= K2_ARCSIN_MIN_PSNR:
        arg = min(2.0 * _factor_from_db(psnr, 2), 1.0)
        return 3.0 / math.pi * math.asin(arg), "arcsin-K2"
    return UPPER_CONST * _factor_from_db(psnr, k), "general"


def compute_bounds(inp: BoundsInput) -> BoundsReport:
    d_rl, da_rl = rayleigh(inp)
    r_l = lower_ratio(inp.psnr, inp.k_scatterers)
    r_u, variant = upper_ratio(inp.psnr, inp.k_scatterers)
    srl, sru = da_rl * r_l, da_rl * r_u
    return BoundsReport(
        d_rl=d_rl,
        delta_a_rl=da_rl,
        delta_a_srl=srl,
        delta_a_sru=sru,
        r_l=r_l,
        r_u=r_u,
        ordering_holds=srl < da_rl < sru,
        sru_variant=variant,
        d_srl=None if d_rl is None else d_rl * r_l,
        d_sru=None if d_rl is None else d_rl * r_u,
    )


def srl(wavelength: float, theta_delta: float, psnr: DbValue, k) -> float:
    """Super-resolution limit; ``k`` may be non-integer here (used by derivatives)."""
    return wavelength / (2.0 * theta_delta) * LOWER_CONST * _factor_from_db(psnr, k)


def srl_sensitivities(inp: BoundsInput) -> SensitivityReport:
    lam, th, k = inp.wavelength, inp.theta_delta, inp.k_scatterers
    rho = inp.psnr.linear
    f = _factor_from_db(inp.psnr, k)
    c1 = lam / 2.0 * LOWER_CONST * f
    c2 = lam / (2.0 * th) * LOWER_CONST
    c3 = _exponent(k)
    c4 = 1.0 / rho
    return SensitivityReport(
        d_srl_d_theta=-c1 / th**2,
        d_srl_d_psnr=-c2 * c3 * c4 ** (c3 + 1.0),
        d_srl_d_k=-c2 * math.log(c4) / (2 * k - 1) ** 2 * f,
    )


def required_psnr(delta_a_target: float, wavelength: float, theta_delta: float, k: int) -> DbValue:
    """PSNR at which da_SRL equals ``delta_a_target``."""
    if not delta_a_target > 0:
        raise ValueError("target resolution must be positive")
    base = wavelength / (math.e * math.pi * theta_delta * delta_a_target)
    return DbValue.from_db((4 * k - 2) * 10.0 * math.log10(base))


def required_theta(delta_a_target: float, wavelength: float, psnr: DbValue, k: int) -> float:
    """Cumulative rotation at which da_SRL equals ``delta_a_target``."""
    if not delta_a_target > 0:
        raise ValueError("target resolution must be positive")
    return wavelength / (2.0 * delta_a_target) * LOWER_CONST * _factor_from_db(psnr, k)


def theta_bounds(
    delta_a_target: float, wavelength: float, k: int, psnr_min: DbValue, psnr_max: DbValue
) -> Tuple[float, float]:
    """Admissible rotation range: the lower end uses the largest achievable PSNR."""
    if psnr_min.db > psnr_max.db:
        raise ValueError("psnr_min must not exceed psnr_max")
    if psnr_min.db <= 0:
        raise ValueError("PSNR limits must be above 0 dB")
    return (
        required_theta(delta_a_target, wavelength, psnr_max, k),
        required_theta(delta_a_target, wavelength, psnr_min, k),
    )
