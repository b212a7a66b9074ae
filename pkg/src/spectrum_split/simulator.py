"""Monte-Carlo estimation of outage and maximum density in a Poisson field.

Within the simulation disk of radius R, the interferers of a trial are built
as a Poisson process along the intensity axis: unit-rate arrivals G_1 < G_2 <
... each carry an independent position uniform on the disk, and the field at
per-band intensity lam consists of the points with G_k <= lam * pi * R^2.
The count is then Poisson(lam pi R^2) with uniform positions, and the fields
of one trial are nested as lam grows. Outage is therefore monotone in
intensity trial by trial, and each trial has a critical arrival G_c at which
its cumulative interference first crosses the outage level. Estimating the
outage at any intensity then reduces to counting critical arrivals.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numba as nb
import numpy as np

from . import analytic
from .errors import (
    DegenerateGeometryError,
    DomainError,
    MaxIterationsError,
    NotBracketedError,
)
from .params import BandPlan, CapacityKind, CapacityResult, NetworkParams
from .rng import (
    TAG_ARRIVAL,
    TAG_INTERFERER_FADING,
    TAG_POSITION,
    TAG_SIGNAL_FADING,
    as_seed,
    stream_key,
    uniform,
)

THREADS_ENV = "SPECTRUM_SPLIT_THREADS"

# skip numba's TBB probe (noisy on older TBB) unless the user picked a layer
if "NUMBA_THREADING_LAYER" not in os.environ:
    nb.config.THREADING_LAYER = "omp"

_OK = 0
_DEGENERATE = 1


class FadingModel(str, enum.Enum):
    PATH_LOSS_ONLY = "pathloss"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True)
class SimConfig:
    """Monte-Carlo controls.

    ``window_radius=None`` picks max(50 d beta^(1/alpha), 40 d) for each plan;
    ``bisect_tol_abs=None`` picks max(0.002, 2 * binomial stderr at epsilon).
    """

    trials: int = 200_000
    window_radius: Optional[float] = None
    master_seed: int = 0
    bisect_tol_abs: Optional[float] = None
    bisect_max_iter: int = 60
    bisect_rel_tol: float = 1e-3
    max_bracket_doublings: int = 30
    slope_step: float = 0.05

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise DomainError("trials must be a positive integer")
        if self.window_radius is not None and not self.window_radius > 0:
            raise DomainError("window_radius must be positive")
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise DomainError("master_seed must be a non-negative integer")
        if self.bisect_tol_abs is not None and not 0.0 < self.bisect_tol_abs < 0.5:
            raise DomainError("bisect_tol_abs must lie in (0, 0.5)")
        if self.bisect_max_iter < 1:
            raise DomainError("bisect_max_iter must be at least 1")
        if not 0.0 < self.bisect_rel_tol < 1.0:
            raise DomainError("bisect_rel_tol must lie in (0, 1)")
        if self.max_bracket_doublings < 0:
            raise DomainError("max_bracket_doublings must be non-negative")
        if not 0.0 < self.slope_step < 1.0:
            raise DomainError("slope_step must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


class SnapshotResult(NamedTuple):
    sinr: float
    interference: float
    n_interferers: int


class OutageEstimate(NamedTuple):
    p_out: float
    stderr: float


@nb.njit(cache=True)
def _signal_power(seed, trial, alpha, rho, d, rayleigh):
    signal = rho * d ** (-alpha)
    if rayleigh:
        key = stream_key(seed, trial, np.uint64(TAG_SIGNAL_FADING))
        signal *= -math.log(uniform(key, np.uint64(0)))
    return signal


@nb.njit(cache=True)
def _interferer_power(key_pos, key_fade, k, r2max, alpha, rho, rayleigh):
    """Received power of the k-th point and its squared distance."""
    x2 = r2max * uniform(key_pos, k)
    if alpha == 4.0:
        gain = rho / (x2 * x2)
    else:
        gain = rho * x2 ** (-0.5 * alpha)
    if rayleigh:
        gain *= -math.log(uniform(key_fade, k))
    return gain, x2


@nb.njit(cache=True)
def _snapshot(seed, trial, mean_count, radius, alpha, rho, d, eta, rayleigh):
    key_arr = stream_key(seed, trial, np.uint64(TAG_ARRIVAL))
    key_pos = stream_key(seed, trial, np.uint64(TAG_POSITION))
    key_fade = stream_key(seed, trial, np.uint64(TAG_INTERFERER_FADING))
    r2max = radius * radius

    interference = 0.0
    count = 0
    status = _OK
    arrival = 0.0
    k = np.uint64(0)
    while True:
        arrival -= math.log(uniform(key_arr, k))
        if arrival > mean_count:
            break
        gain, x2 = _interferer_power(key_pos, key_fade, k, r2max, alpha, rho, rayleigh)
        if x2 <= 0.0:
            status = _DEGENERATE
            break
        interference += gain
        count += 1
        k += np.uint64(1)

    signal = _signal_power(seed, trial, alpha, rho, d, rayleigh)
    denom = eta + interference
    sinr = signal / denom if denom > 0.0 else np.inf
    return sinr, interference, count, status, signal


@nb.njit(parallel=True, cache=True)
def _outage_flags(seed, trials, mean_count, radius, alpha, rho, d, eta, rayleigh, beta):
    # outage <=> eta + I > signal / beta, written so that it matches
    # _critical_arrivals operation for operation
    flags = np.zeros(trials, dtype=np.uint8)
    for t in nb.prange(trials):
        _, interference, _, status, signal = _snapshot(
            seed, np.uint64(t), mean_count, radius, alpha, rho, d, eta, rayleigh
        )
        if status != _OK:
            flags[t] = 2
        elif interference > signal / beta - eta:
            flags[t] = 1
    return flags


@nb.njit(parallel=True, cache=True)
def _critical_arrivals(seed, trials, max_count, radius, alpha, rho, d, eta, rayleigh, beta):
    # per trial: the arrival value at which outage starts, +inf if not
    # reached by max_count, nan on degenerate geometry
    out = np.full(trials, np.inf)
    r2max = radius * radius
    for t in nb.prange(trials):
        trial = np.uint64(t)
        signal = _signal_power(seed, trial, alpha, rho, d, rayleigh)
        level = signal / beta - eta
        if 0.0 > level:
            out[t] = 0.0
            continue
        key_arr = stream_key(seed, trial, np.uint64(TAG_ARRIVAL))
        key_pos = stream_key(seed, trial, np.uint64(TAG_POSITION))
        key_fade = stream_key(seed, trial, np.uint64(TAG_INTERFERER_FADING))
        cumulative = 0.0
        arrival = 0.0
        k = np.uint64(0)
        while True:
            arrival -= math.log(uniform(key_arr, k))
            if arrival > max_count:
                break
            gain, x2 = _interferer_power(key_pos, key_fade, k, r2max, alpha, rho, rayleigh)
            if x2 <= 0.0:
                out[t] = np.nan
                break
            cumulative += gain
            if cumulative > level:
                out[t] = arrival
                break
            k += np.uint64(1)
    return out


def configure_threads(threads: Optional[int] = None) -> int:
    """Set the simulator thread count; 0 or None means all available.

    When ``threads`` is None the ``SPECTRUM_SPLIT_THREADS`` environment
    variable is consulted. Results never depend on this setting.
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        threads = int(raw) if raw else 0
    if threads < 0:
        raise DomainError(f"{THREADS_ENV} must be non-negative")
    available = nb.config.NUMBA_NUM_THREADS
    n = available if threads == 0 else min(threads, available)
    nb.set_num_threads(n)
    return n


def default_window_radius(params: NetworkParams, beta: float) -> float:
    return max(50.0 * params.d * beta ** (1.0 / params.alpha), 40.0 * params.d)


def _window(params: NetworkParams, plan: BandPlan, cfg: SimConfig) -> float:
    if cfg.window_radius is not None:
        return float(cfg.window_radius)
    return default_window_radius(params, plan.beta)


def _mean_count(total_intensity: float, n: int, radius: float) -> float:
    """Expected number of reference-band interferers inside the window."""
    return float(total_intensity) / n * math.pi * radius * radius


def _band_noise(params: NetworkParams, n: int) -> float:
    # the flag, not a sentinel value, decides whether there is a noise term
    if params.interference_limited:
        return 0.0
    return params.w / n * params.n0


def _kernel_args(params: NetworkParams, fading: FadingModel, n: int) -> tuple:
    return (
        float(params.alpha),
        float(params.rho),
        float(params.d),
        _band_noise(params, n),
        FadingModel(fading) is FadingModel.RAYLEIGH,
    )


def sample_snapshot(
    params: NetworkParams,
    per_band_intensity: float,
    fading: FadingModel,
    cfg: SimConfig,
    trial_index: int,
    n: int = 1,
    window_radius: Optional[float] = None,
) -> SnapshotResult:
    """One realisation of the SINR at the reference receiver (at the origin).

    ``n`` sets the sub-band width W/n that scales the noise power.
    ``window_radius`` overrides ``cfg.window_radius``; with neither set the
    window is 40 d, since no threshold is known here.
    """
    if not per_band_intensity >= 0:
        raise DomainError("per-band intensity must be non-negative")
    if trial_index < 0:
        raise DomainError("trial_index must be non-negative")
    radius = float(window_radius or cfg.window_radius or 40.0 * params.d)
    sinr, interference, count, status, _ = _snapshot(
        as_seed(cfg.master_seed),
        np.uint64(trial_index),
        _mean_count(per_band_intensity, 1, radius),
        radius,
        *_kernel_args(params, fading, n),
    )
    if status != _OK:
        raise DegenerateGeometryError(f"trial {trial_index}: interferer at zero distance")
    return SnapshotResult(float(sinr), float(interference), int(count))


def estimate_outage(
    params: NetworkParams,
    plan: BandPlan,
    total_intensity: float,
    fading: FadingModel,
    cfg: SimConfig,
) -> OutageEstimate:
    """Fraction of trials whose SINR falls below ``plan.beta``.

    The total intensity is split evenly over the ``plan.n`` sub-bands, so the
    reference band sees a Poisson field of intensity total / n.
    """
    if not total_intensity >= 0:
        raise DomainError("total intensity must be non-negative")
    configure_threads()
    radius = _window(params, plan, cfg)
    flags = _outage_flags(
        as_seed(cfg.master_seed),
        int(cfg.trials),
        _mean_count(total_intensity, plan.n, radius),
        radius,
        *_kernel_args(params, fading, plan.n),
        float(plan.beta),
    )
    if np.any(flags == 2):
        raise DegenerateGeometryError("interferer at zero distance")
    p = np.count_nonzero(flags) / cfg.trials
    return OutageEstimate(p, math.sqrt(p * (1.0 - p) / cfg.trials))


class OutageProfile:
    """Outage estimates for every intensity up to ``max_intensity`` from one pass.

    ``p_out(lam)`` equals ``estimate_outage(..., lam, ...).p_out`` exactly for
    the same configuration; each query costs a binary search.
    """

    def __init__(
        self,
        params: NetworkParams,
        plan: BandPlan,
        fading: FadingModel,
        cfg: SimConfig,
        max_intensity: float,
    ):
        if not max_intensity >= 0:
            raise DomainError("max_intensity must be non-negative")
        configure_threads()
        self.plan = plan
        self.trials = int(cfg.trials)
        self.max_intensity = float(max_intensity)
        self.radius = _window(params, plan, cfg)
        critical = _critical_arrivals(
            as_seed(cfg.master_seed),
            self.trials,
            _mean_count(max_intensity, plan.n, self.radius),
            self.radius,
            *_kernel_args(params, fading, plan.n),
            float(plan.beta),
        )
        if np.isnan(critical).any():
            raise DegenerateGeometryError("interferer at zero distance")
        self._critical = np.sort(critical)

    def p_out(self, total_intensity: float) -> float:
        if not 0 <= total_intensity <= self.max_intensity:
            raise DomainError(
                f"intensity {total_intensity:.6g} outside profiled range [0, {self.max_intensity:.6g}]"
            )
        count = _mean_count(total_intensity, self.plan.n, self.radius)
        return int(np.searchsorted(self._critical, count, side="right")) / self.trials


def solve_capacity(
    params: NetworkParams,
    n: int,
    epsilon: float,
    fading: FadingModel,
    cfg: SimConfig,
    gamma: float = 1.0,
) -> CapacityResult:
    """Largest total intensity whose estimated outage does not exceed epsilon.

    Bisection on [0, hi]: hi starts at four times the analytic first-order
    density and doubles until the outage exceeds epsilon. The search stops
    once an evaluated outage is within tolerance of epsilon and the bracket
    is narrower than ``cfg.bisect_rel_tol`` relative to hi. The standard
    error is the binomial error at epsilon divided by the local slope of the
    outage curve (central difference with relative step ``cfg.slope_step``).

    Outage is evaluated through an ``OutageProfile``. The first profile only
    reaches 1.5x the analytic guess; since estimated outage is monotone in
    intensity, any query above a profiled intensity whose outage already
    exceeds epsilon is known to exceed it too, and the bracket sequence is
    the same as with direct evaluation.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    plan = analytic.gap_adjusted_threshold(params, n, gamma)
    lam_guess = analytic.capacity_from_plan(params, plan, epsilon).lam
    tol = cfg.bisect_tol_abs
    if tol is None:
        tol = max(0.002, 2.0 * math.sqrt(epsilon * (1.0 - epsilon) / cfg.trials))
    headroom = 1.0 + cfg.slope_step

    profile = OutageProfile(params, plan, fading, cfg, headroom * 1.5 * lam_guess)
    saturated = profile.p_out(profile.max_intensity) > epsilon

    def p_out(lam: float) -> Optional[float]:
        # None: beyond the profile, but known to exceed epsilon
        nonlocal profile, saturated
        if lam <= profile.max_intensity:
            return profile.p_out(lam)
        if saturated:
            return None
        profile = OutageProfile(params, plan, fading, cfg, headroom * lam)
        saturated = profile.p_out(profile.max_intensity) > epsilon
        return profile.p_out(lam)

    lo, hi = 0.0, 4.0 * lam_guess
    p_lo = p_out(lo)
    if p_lo > epsilon:
        raise NotBracketedError(
            f"outage {p_lo:.4g} exceeds epsilon={epsilon} with no interferers; "
            f"bracket [0, {hi:.6g}]",
            bracket=(0.0, hi),
        )
    doublings = 0
    p_hi = p_out(hi)
    while p_hi is not None and p_hi <= epsilon:
        if doublings >= cfg.max_bracket_doublings:
            raise NotBracketedError(
                f"outage {p_hi:.4g} <= epsilon={epsilon} at the intensity cap; "
                f"bracket [{lo:.6g}, {hi:.6g}]",
                bracket=(lo, hi),
            )
        lo, hi = hi, 2.0 * hi
        p_hi = p_out(hi)
        doublings += 1

    within_tol = False
    iterations = 0
    for iterations in range(1, cfg.bisect_max_iter + 1):
        mid = 0.5 * (lo + hi)
        p_mid = p_out(mid)
        if p_mid is None or p_mid > epsilon:
            hi = mid
        else:
            lo = mid
        if p_mid is not None and abs(p_mid - epsilon) <= tol:
            within_tol = True
        if within_tol and hi - lo <= cfg.bisect_rel_tol * hi:
            break
    else:
        if not within_tol:
            raise MaxIterationsError(
                f"no outage within {tol:.4g} of epsilon={epsilon} after "
                f"{cfg.bisect_max_iter} iterations; bracket [{lo:.6g}, {hi:.6g}]",
                bracket=(lo, hi),
            )

    lam = 0.5 * (lo + hi)
    step = cfg.slope_step * lam
    if lam + step > profile.max_intensity:
        profile = OutageProfile(params, plan, fading, cfg, headroom * (lam + step))
    slope = (profile.p_out(lam + step) - profile.p_out(lam - step)) / (2.0 * step)
    p_err = math.sqrt(epsilon * (1.0 - epsilon) / cfg.trials)
    stderr = p_err / slope if slope > 0 else math.inf
    return CapacityResult(
        lam,
        CapacityKind.MONTE_CARLO,
        stderr,
        info={
            "n": plan.n,
            "beta": plan.beta,
            "bracket": [lo, hi],
            "iterations": iterations,
            "bracket_doublings": doublings,
            "tolerance": tol,
            "window_radius": profile.radius,
            "analytic_lambda": lam_guess,
        },
    )
