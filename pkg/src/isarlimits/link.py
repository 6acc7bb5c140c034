"""Tracking-radar range equation: PSNR from transmitted energy and slant range."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BOLTZMANN, DbValue


@dataclass(frozen=True)
class LinkBudget:
    """Radar-system factors lumped into C_st, plus the target RCS.

    Defaults are placeholders: the published analysis never lists its system
    constants, so absolute powers computed with them are illustrative only.
    """

    tx_gain: float = 10.0**4.5
    effective_aperture: float = 10.0
    integration_efficiency: float = 0.8
    propagation_factor4: float = 1.0
    noise_figure: float = 10.0**0.3
    system_losses: float = 10.0**0.5
    ref_temp: float = 290.0
    boltzmann: float = BOLTZMANN
    rcs: float = 1.0

    def __post_init__(self):
        for name in (
            "tx_gain",
            "effective_aperture",
            "propagation_factor4",
            "noise_figure",
            "ref_temp",
            "boltzmann",
            "rcs",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.integration_efficiency <= 1.0:
            raise ValueError("integration_efficiency must lie in (0, 1]")
        if not self.system_losses >= 1.0:
            raise ValueError("system_losses must be >= 1")


@dataclass(frozen=True)
class ResourceState:
    p_av: float
    t_cpi: float
    range: float

    def __post_init__(self):
        if not (self.p_av > 0 and self.t_cpi > 0 and self.range > 0):
            raise ValueError("p_av, t_cpi and range must be positive")

    @property
    def energy(self) -> float:
        return self.p_av * self.t_cpi


def c_st(budget: LinkBudget) -> float:
    """G A_e E_i F^4 / ((4 pi)^2 k T0 F_n L_s)."""
    num = budget.tx_gain * budget.effective_aperture * budget.integration_efficiency * budget.propagation_factor4
    den = (4.0 * math.pi) ** 2 * budget.boltzmann * budget.ref_temp * budget.noise_figure * budget.system_losses
    return num / den


def psnr_from_energy(budget: LinkBudget, energy: float, rng: float) -> DbValue:
    if not (energy > 0 and rng > 0):
        raise ValueError("energy and range must be positive")
    return DbValue.from_linear(c_st(budget) * budget.rcs * energy / rng**4)


def psnr(budget: LinkBudget, resources: ResourceState) -> DbValue:
    """rho = C_st sigma E / R^4."""
    return psnr_from_energy(budget, resources.energy, resources.range)


def required_energy(budget: LinkBudget, rng: float, psnr_target: DbValue) -> float:
    if not rng > 0:
        raise ValueError("range must be positive")
    return psnr_target.linear * rng**4 / (c_st(budget) * budget.rcs)


def required_pav(budget: LinkBudget, t_cpi: float, rng: float, psnr_target: DbValue) -> float:
    """Average power that reaches ``psnr_target`` within ``t_cpi``."""
    if not t_cpi > 0:
        raise ValueError("t_cpi must be positive")
    return required_energy(budget, rng, psnr_target) / t_cpi


def required_peak_power(
    budget: LinkBudget, t_cpi: float, rng: float, psnr_target: DbValue, duty_cycle: float
) -> float:
    return required_pav(budget, t_cpi, rng, psnr_target) / duty_cycle
