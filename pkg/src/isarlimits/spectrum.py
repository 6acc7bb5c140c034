"""Line-spectrum laboratory for the compensated cross-range echo.

After motion compensation a range cell holds ``K`` point scatterers whose slow-time
echo is a sum of complex exponentials::

    y(tau_n) = sum_q A_q exp(-j 2 pi x_q tau_n) + w(tau_n),   |w| < sigma

with ``x_q`` the equivalent azimuth coordinates in Hz.  Samples sit on a uniform
grid of ``N`` pulses centred on zero, ``tau_n = (n - (N-1)/2) T_PRT`` with
``T_PRT = T_CPI / N``, so the Rayleigh spacing of the Doppler profile is exactly
``1 / T_CPI``.

Estimation uses the matrix pencil of a Hankel matrix, with the model order read
off its singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import bounds
from .core import DbValue

C_SV = 2.0  # model-order threshold c_sv * sigma * sqrt(N)
SV_FLOOR = 1e-10  # relative floor so noiseless rank is read correctly
SUCCESS_RADIUS = 0.5  # fraction of the minimum separation
NOISE_MODELS = ("bounded", "gaussian")

SeedLike = Union[int, np.random.SeedSequence, Sequence[int]]


@dataclass(frozen=True)
class ScattererSet:
    positions: np.ndarray  # Hz
    amplitudes: np.ndarray  # complex

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positions, dtype=float))
        amp = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if pos.shape != amp.shape or pos.ndim != 1:
            raise ValueError("positions and amplitudes must be 1-D and equally long")
        if np.any(np.abs(amp) <= 0):
            raise ValueError("amplitudes must be non-zero")
        order = np.argsort(pos, kind="stable")
        object.__setattr__(self, "positions", pos[order])
        object.__setattr__(self, "amplitudes", amp[order])

    @property
    def k(self) -> int:
        return int(self.positions.size)

    @property
    def a_min(self) -> float:
        return float(np.min(np.abs(self.amplitudes)))

    @property
    def min_separation(self) -> float:
        if self.k < 2:
            return math.inf
        return float(np.min(np.diff(self.positions)))


def cluster(k: int, separation: float, a_min: float = 1.0, center: float = 0.0, phases=None) -> ScattererSet:
    """Equispaced cluster with equal magnitudes; identical phases unless ``phases`` given."""
    pos = center + separation * (np.arange(k) - 0.5 * (k - 1))
    ph = np.zeros(k) if phases is None else np.asarray(phases, dtype=float)
    return ScattererSet(pos, a_min * np.exp(1j * ph))


@dataclass(frozen=True)
class EchoSeries:
    samples: np.ndarray = field(repr=False)
    tau: np.ndarray = field(repr=False)
    noise_bound: float
    t_cpi: float

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @property
    def t_prt(self) -> float:
        return self.t_cpi / self.n

    @property
    def cutoff(self) -> float:
        """Omega = pi T_CPI."""
        return math.pi * self.t_cpi

    @property
    def band(self) -> float:
        """Unaliased half-band 1 / (2 T_PRT)."""
        return 0.5 / self.t_prt


@dataclass(frozen=True)
class EstimateResult:
    k_hat: int
    positions_hat: np.ndarray
    amplitudes_hat: np.ndarray
    residual: float
    singular_values: np.ndarray = field(repr=False)
    success: Optional[bool] = None


@dataclass(frozen=True)
class PhaseTransitionCurve:
    k: int
    psnr_db: float
    n_samples: int
    separations: np.ndarray  # D / D_RL
    success_rate: np.ndarray
    n_trials: int
    srl: float  # D_SRL / D_RL
    sru: float  # D_SRU / D_RL

    def midpoint(self) -> float:
        """Separation where the success rate first crosses one half (linear interpolation)."""
        s, r = self.separations, self.success_rate
        above = np.nonzero(r >= 0.5)[0]
        if above.size == 0:
            return math.nan
        i = int(above[0])
        if i == 0:
            return float(s[0])
        r0, r1 = r[i - 1], r[i]
        return float(s[i - 1] + (0.5 - r0) * (s[i] - s[i - 1]) / (r1 - r0))


# ---------------------------------------------------------------------------
# Signal model
# ---------------------------------------------------------------------------


def sample_times(t_cpi: float, n: int) -> np.ndarray:
    t_prt = t_cpi / n
    return (np.arange(n) - 0.5 * (n - 1)) * t_prt


def clean_echo(sset: ScattererSet, tau: np.ndarray) -> np.ndarray:
    return np.exp(-2j * math.pi * np.outer(tau, sset.positions)) @ sset.amplitudes


def _rng(seed: SeedLike) -> np.random.Generator:
    if seed is None:
        raise ValueError("a seed is required")
    return np.random.default_rng(seed)


def draw_noise(rng: np.random.Generator, sigma: float, size, model: str = "bounded") -> np.ndarray:
    """Bounded noise has uniform phase and magnitude uniform on [0, sigma).

    The Gaussian model (circular, per-sample RMS sigma) is outside the bounded-noise
    theory and exists only for comparison.
    """
    if model == "bounded":
        mag = sigma * rng.random(size)
        phase = 2.0 * math.pi * rng.random(size)
        return mag * np.exp(1j * phase)
    if model == "gaussian":
        return sigma / math.sqrt(2.0) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    raise ValueError(f"unknown noise model {model!r}")


def synthesize(
    sset: ScattererSet,
    t_cpi: float,
    n_samples: int,
    sigma: float,
    seed: SeedLike,
    noise: str = "bounded",
) -> EchoSeries:
    if not t_cpi > 0:
        raise ValueError("t_cpi must be positive")
    if n_samples < 2 * sset.k + 1:
        raise ValueError("n_samples must be at least 2K + 1")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    tau = sample_times(t_cpi, n_samples)
    band = 0.5 * n_samples / t_cpi
    if np.any(np.abs(sset.positions) >= band):
        raise ValueError(f"aliasing: scatterer outside the unambiguous band +-{band:g} Hz")
    y = clean_echo(sset, tau)
    if sigma > 0:
        y = y + draw_noise(_rng(seed), sigma, n_samples, noise)
    return EchoSeries(samples=y, tau=tau, noise_bound=float(sigma), t_cpi=float(t_cpi))


def doppler_profile(echo: EchoSeries, grid) -> np.ndarray:
    """Y(f) = (1/N) sum_n y_n exp(+j 2 pi f tau_n), a sinc-like sum of scatterer lobes."""
    f = np.asarray(grid, dtype=float)
    return np.exp(2j * math.pi * np.outer(f, echo.tau)) @ echo.samples / echo.n


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------


def hankel(y: np.ndarray, rows: Optional[int] = None) -> np.ndarray:
    n = y.shape[-1]
    rows = n - n // 2 if rows is None else rows
    idx = np.arange(rows)[:, None] + np.arange(n - rows + 1)[None, :]
    return y[..., idx]


def model_order(s: np.ndarray, sigma: float, n: int, c_sv: float = C_SV) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    thresh = max(c_sv * sigma * math.sqrt(n), SV_FLOOR * s[0])
    return int(np.count_nonzero(s > thresh))


def _pencil(vh: np.ndarray, k: int, t_prt: float) -> np.ndarray:
    w = vh[:k].T
    phi = np.linalg.pinv(w[:-1]) @ w[1:]
    z = np.linalg.eigvals(phi)
    return np.sort(-np.angle(z) / (2.0 * math.pi * t_prt))


def _fit_amplitudes(y, tau, positions):
    v = np.exp(-2j * math.pi * np.outer(tau, positions))
    amp, *_ = np.linalg.lstsq(v, y, rcond=None)
    return amp, float(np.linalg.norm(y - v @ amp))


def _estimate_from_svd(y, tau, sigma, t_prt, s, vh, k_known, c_sv) -> EstimateResult:
    if k_known is None:
        k = model_order(s, sigma, y.size, c_sv)
    else:
        k = int(k_known)
    k = min(k, vh.shape[0] - 1)
    if k <= 0 or s[0] == 0.0:
        return EstimateResult(0, np.empty(0), np.empty(0, complex), float(np.linalg.norm(y)), s)
    pos = _pencil(vh, k, t_prt)
    amp, res = _fit_amplitudes(y, tau, pos)
    return EstimateResult(k, pos, amp, res, s)


def estimate(echo: EchoSeries, k_known: Optional[int] = None, c_sv: float = C_SV) -> EstimateResult:
    """Matrix-pencil estimate of the scatterer count, positions and amplitudes."""
    y = echo.samples
    if k_known is not None and echo.n < 2 * k_known + 1:
        raise ValueError("need at least 2K + 1 samples")
    if not np.any(y):
        return EstimateResult(0, np.empty(0), np.empty(0, complex), 0.0, np.zeros(0))
    _, s, vh = np.linalg.svd(hankel(y), full_matrices=False)
    return _estimate_from_svd(y, echo.tau, echo.noise_bound, echo.t_prt, s, vh, k_known, c_sv)


def matched_errors(truth: np.ndarray, est: np.ndarray) -> np.ndarray:
    """Absolute position errors under the optimal one-to-one assignment."""
    cost = np.abs(truth[:, None] - est[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c]


def is_success(sset: ScattererSet, result: EstimateResult, radius: float = SUCCESS_RADIUS) -> bool:
    if result.k_hat != sset.k:
        return False
    if sset.k == 1:
        return True
    err = matched_errors(sset.positions, result.positions_hat)
    return bool(np.all(err < radius * sset.min_separation))


def resolvability_trial(
    sset: ScattererSet,
    sigma: float,
    seed: SeedLike,
    n_samples: int,
    t_cpi: float = 1.0,
    c_sv: float = C_SV,
    noise: str = "bounded",
) -> bool:
    """True when the count is right and every source is recovered within half the separation."""
    echo = synthesize(sset, t_cpi, n_samples, sigma, seed, noise)
    return is_success(sset, estimate(echo, c_sv=c_sv))


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def trial_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((int(master_seed), int(index)))


def _success_batch(
    sset: ScattererSet, sigma, t_cpi, n, trials, master_seed, c_sv, noise, random_phase
) -> int:
    tau = sample_times(t_cpi, n)
    t_prt = t_cpi / n
    ys = np.empty((trials, n), dtype=complex)
    sets = []
    for i in range(trials):
        rng = np.random.default_rng(trial_seed(master_seed, i))
        s_i = sset
        if random_phase:
            ph = 2.0 * math.pi * rng.random(sset.k)
            s_i = ScattererSet(sset.positions, np.abs(sset.amplitudes) * np.exp(1j * ph))
        ys[i] = clean_echo(s_i, tau) + (draw_noise(rng, sigma, n, noise) if sigma > 0 else 0.0)
        sets.append(s_i)
    _, s, vh = np.linalg.svd(hankel(ys), full_matrices=False)
    wins = 0
    for i in range(trials):
        res = _estimate_from_svd(ys[i], tau, sigma, t_prt, s[i], vh[i], None, c_sv)
        wins += is_success(sets[i], res)
    return wins


def phase_transition_sweep(
    k: int,
    psnr: DbValue,
    t_cpi: float,
    n_samples: int,
    separations: Sequence[float],
    trials: int,
    master_seed: int,
    c_sv: float = C_SV,
    noise: str = "bounded",
    random_phase: bool = False,
    a_min: float = 1.0,
) -> PhaseTransitionCurve:
    """Success rate against separation (in units of D_RL = 1/T_CPI) on the equispaced cluster.

    Trial ``i`` uses the seed (master_seed, i) at every separation, so curves are
    reproducible and neighbouring separations share noise draws.
    """
    sep = np.asarray(separations, dtype=float)
    if sep.ndim != 1 or sep.size == 0 or np.any(np.diff(sep) <= 0) or np.any(sep <= 0):
        raise ValueError("separations must be positive and strictly increasing")
    if trials < 1:
        raise ValueError("trials must be positive")
    sigma = a_min / math.sqrt(psnr.linear)
    d_rl = 1.0 / t_cpi
    rates = np.empty(sep.size)
    for j, d in enumerate(sep):
        sset = cluster(k, d * d_rl, a_min)
        rates[j] = _success_batch(sset, sigma, t_cpi, n_samples, trials, master_seed, c_sv, noise, random_phase) / trials
    r_u, _ = bounds.upper_ratio(psnr, k)
    return PhaseTransitionCurve(
        k=k,
        psnr_db=psnr.db,
        n_samples=n_samples,
        separations=sep,
        success_rate=rates,
        n_trials=trials,
        srl=bounds.lower_ratio(psnr, k),
        sru=r_u,
    )


# ---------------------------------------------------------------------------
# Indistinguishable pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Two well-separated configurations whose noiseless data differ by less than sigma."""

    first: ScattererSet
    second: ScattererSet
    deviation: float
    sigma: float
    t_cpi: float
    n_samples: int
    displacement: float  # largest matched position change between the two


def _deviation(tau, y_ref, pos, amp) -> float:
    return float(np.max(np.abs(y_ref - np.exp(-2j * math.pi * np.outer(tau, pos)) @ amp)))


def indistinguishability_search(
    k: int,
    sigma: float,
    a_min: float,
    omega: float,
    d_target: float,
    n_samples: int = 64,
    max_sweeps: int = 400,
    seed: SeedLike = 0,
) -> Optional[Witness]:
    """Look for a second K-source set that the data cannot tell apart from a cluster.

    The reference is the equispaced cluster with spacing ``d_target`` (Hz) and
    amplitudes ``a_min``.  The candidate must keep its own spacing >= d_target and
    amplitudes >= a_min, and one of its sources must sit at least d_target/2 from its
    matched partner, so the two sets are not resolved from each other.  Coordinate
    descent on positions, magnitudes and phases minimises the sup-norm data gap; a
    gap below ``sigma`` is returned as a witness.  Returns None when the budget runs
    out, which proves nothing.
    """
    if sigma <= 0:
        return None
    if not (d_target > 0 and omega > 0 and a_min > 0):
        raise ValueError("d_target, omega and a_min must be positive")
    t_cpi = omega / math.pi
    tau = sample_times(t_cpi, n_samples)
    ref = cluster(k, d_target, a_min)
    y_ref = clean_echo(ref, tau)
    rng = np.random.default_rng(seed)

    def feasible(pos, mag):
        if np.any(mag < a_min) or np.any(np.diff(np.sort(pos)) < d_target):
            return False
        return matched_errors(ref.positions, pos).max() >= 0.5 * d_target

    def cost(pos, mag, ph):
        return _deviation(tau, y_ref, pos, mag * np.exp(1j * ph))

    # start from the cluster stretched just enough to displace its outer sources
    stretch = 1.0 + 1.0 / max(k - 1, 1)
    pos = ref.positions * stretch
    mag = np.full(k, a_min)
    ph = np.zeros(k)
    best = cost(pos, mag, ph)
    steps = np.array([0.25 * d_target, 0.25 * a_min, 0.1])
    for _ in range(max_sweeps):
        if best < sigma:
            break
        improved = False
        for block in rng.permutation(3):
            for q in rng.permutation(k):
                for sign in (1.0, -1.0):
                    trial = [pos.copy(), mag.copy(), ph.copy()]
                    trial[block][q] += sign * steps[block]
                    if not feasible(trial[0], trial[1]):
                        continue
                    c = cost(*trial)
                    if c < best:
                        pos, mag, ph = trial
                        best = c
                        improved = True
        if not improved:
            steps *= 0.5
            if steps[0] < 1e-9 * d_target:
                break
    if best >= sigma:
        return None
    order = np.argsort(pos)
    second = ScattererSet(pos[order], (mag * np.exp(1j * ph))[order])
    return Witness(
        first=ref,
        second=second,
        deviation=best,
        sigma=sigma,
        t_cpi=t_cpi,
        n_samples=n_samples,
        displacement=float(matched_errors(ref.positions, second.positions).max()),
    )
