"""Closed-form densities and the optimal spectral efficiency / band count.

All densities are first-order in the outage constraint epsilon: the O(eps^2)
term of the small-outage expansion is dropped throughout, and the fading
constant is taken as 1 (pure path loss).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, NoiseInfeasibleError, ThresholdOverflowError
from .lambertw import lambert_w0
from .params import BandPlan, CapacityKind, CapacityResult, NetworkParams, linear_to_db

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

# relative tolerance under which floor/ceil candidates count as tied
TIE_RTOL = 1e-12


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _check_epsilon(epsilon: float) -> float:
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return float(epsilon)


def _check_alpha(alpha: float) -> float:
    if not alpha > 2.0 or not math.isfinite(alpha):
        raise DomainError("alpha must exceed 2")
    return float(alpha)


def threshold_from_efficiency(b: float) -> float:
    """SINR threshold 2**b - 1 needed for spectral efficiency ``b``."""
    try:
        beta = math.expm1(b * LN2)
    except OverflowError:
        raise ThresholdOverflowError(f"2**{b} - 1 overflows; plan infeasible") from None
    if math.isinf(beta):
        raise ThresholdOverflowError(f"2**{b} - 1 overflows; plan infeasible")
    return beta


def sinr_threshold(params: NetworkParams, n: int) -> BandPlan:
    """Threshold obtained by inverting R = (W/n) log2(1 + beta)."""
    n = _check_n(n)
    b = n * params.util
    return BandPlan(n=n, beta=threshold_from_efficiency(b), b=b)


def gap_adjusted_threshold(params: NetworkParams, n: int, gamma: float) -> BandPlan:
    """Threshold for signalling at a power gap ``gamma`` from capacity,
    beta = (2**(n util) - 1) / gamma."""
    if not 0.0 < gamma <= 1.0:
        raise DomainError(f"gamma must lie in (0, 1], got {gamma!r}")
    plan = sinr_threshold(params, n)
    if gamma == 1.0:
        return plan
    beta = plan.beta / gamma
    if math.isinf(beta):
        raise ThresholdOverflowError("gap-adjusted threshold overflows")
    return BandPlan(n=plan.n, beta=beta, b=plan.b)


def _outage_scale(params: NetworkParams, epsilon: float) -> float:
    return epsilon / (math.pi * params.d * params.d)


def capacity_from_plan(params: NetworkParams, plan: BandPlan, epsilon: float) -> CapacityResult:
    """Total density n * eps/(pi d^2) * (1/beta - 1/(n SNR))**(2/alpha) for a plan."""
    epsilon = _check_epsilon(epsilon)
    scale = _outage_scale(params, epsilon)
    if params.interference_limited:
        lam = scale * plan.n * plan.beta ** (-2.0 / params.alpha)
        return CapacityResult(lam, CapacityKind.ANALYTIC_INTERFERENCE_LIMITED)
    inner = 1.0 / plan.beta - 1.0 / (plan.n * params.snr)
    if inner <= 0.0:
        raise NoiseInfeasibleError(
            f"n={plan.n}: threshold {plan.beta:.6g} is not reachable at per-band "
            f"SNR {plan.n * params.snr:.6g}, at any density"
        )
    lam = plan.n * scale * inner ** (2.0 / params.alpha)
    return CapacityResult(lam, CapacityKind.ANALYTIC_APPROX)


def capacity_approx(params: NetworkParams, n: int, epsilon: float) -> CapacityResult:
    """Maximum total density with n sub-bands, noise included."""
    return capacity_from_plan(params, sinr_threshold(params, n), epsilon)


def capacity_interference_limited(params: NetworkParams, n: int, epsilon: float) -> CapacityResult:
    """Maximum total density with n sub-bands when noise is ignored:
    eps/(pi d^2) * n * (2**(n util) - 1)**(-2/alpha)."""
    epsilon = _check_epsilon(epsilon)
    plan = sinr_threshold(params, n)
    lam = _outage_scale(params, epsilon) * plan.n * plan.beta ** (-2.0 / params.alpha)
    return CapacityResult(lam, CapacityKind.ANALYTIC_INTERFERENCE_LIMITED)


def ds_capacity(params: NetworkParams, n: int, epsilon: float) -> CapacityResult:
    """Density for direct-sequence spreading with gain n and separate despreading:
    eps/(pi d^2) * n**(2/alpha) * beta(n)**(-2/alpha)."""
    epsilon = _check_epsilon(epsilon)
    plan = sinr_threshold(params, n)
    e = 2.0 / params.alpha
    lam = _outage_scale(params, epsilon) * plan.n ** e * plan.beta ** (-e)
    return CapacityResult(lam, CapacityKind.DS_ANALYTIC)


def efficiency_objective(b: float, alpha: float) -> float:
    """b * (2**b - 1)**(-2/alpha), the per-unit-utilization density shape."""
    return b * threshold_from_efficiency(b) ** (-2.0 / alpha)


def optimal_spectral_efficiency(alpha: float) -> float:
    """Optimal per-band spectral efficiency b* (bps/Hz) for path-loss exponent alpha.

    b* = log2(e) * (alpha/2 + W0(-(alpha/2) exp(-alpha/2))), the positive root
    of b ln2 = (alpha/2)(1 - 2**-b).
    """
    alpha = _check_alpha(alpha)
    half = 0.5 * alpha
    z = max(-half * math.exp(-half), -math.exp(-1.0))
    return LOG2E * (half + lambert_w0(z))


def optimal_threshold(alpha: float) -> float:
    """SINR threshold 2**b* - 1 at the optimal spectral efficiency."""
    return threshold_from_efficiency(optimal_spectral_efficiency(alpha))


def density_constant(alpha: float) -> float:
    """b* (2**b* - 1)**(-2/alpha)."""
    return efficiency_objective(optimal_spectral_efficiency(alpha), alpha)


class BandCount(NamedTuple):
    n_star: int
    n_real: float


def optimal_band_count(params: NetworkParams) -> BandCount:
    """Optimal number of sub-bands, ignoring noise.

    The real optimum is b*/util; the integer optimum is whichever of its floor
    (at least 1) and ceiling gives the larger density, the smaller on a tie.
    """
    util = params.util
    n_real = optimal_spectral_efficiency(params.alpha) / util
    lo = max(1, math.floor(n_real))
    hi = max(1, math.ceil(n_real))
    if lo == hi:
        return BandCount(lo, n_real)
    g_lo = efficiency_objective(lo * util, params.alpha)
    try:
        g_hi = efficiency_objective(hi * util, params.alpha)
    except ThresholdOverflowError:
        return BandCount(lo, n_real)
    if g_hi > g_lo and (g_hi - g_lo) > TIE_RTOL * max(abs(g_hi), abs(g_lo)):
        return BandCount(hi, n_real)
    return BandCount(lo, n_real)


def info_density(params: NetworkParams, epsilon: float) -> CapacityResult:
    """Density at the real-valued optimal band count,
    eps/(pi d^2) / util * b* (2**b* - 1)**(-2/alpha)."""
    epsilon = _check_epsilon(epsilon)
    lam = _outage_scale(params, epsilon) / params.util * density_constant(params.alpha)
    return CapacityResult(lam, CapacityKind.ANALYTIC_INTERFERENCE_LIMITED)


def area_spectral_efficiency(params: NetworkParams, epsilon: float) -> float:
    """Density times utilization in bps/Hz/m^2; does not depend on the rate."""
    epsilon = _check_epsilon(epsilon)
    return _outage_scale(params, epsilon) * density_constant(params.alpha)


def optimum_summary(alpha: float, util: float) -> dict:
    """Everything the ``optimal`` command reports, as plain numbers."""
    params = NetworkParams.from_util(alpha=alpha, d=1.0, util=util)
    b_star = optimal_spectral_efficiency(alpha)
    beta_star = threshold_from_efficiency(b_star)
    count = optimal_band_count(params)
    # epsilon and d cancel in the ratio
    best = capacity_interference_limited(params, count.n_star, 0.5).lam
    single = capacity_interference_limited(params, 1, 0.5).lam
    return {
        "alpha": float(alpha),
        "util": float(util),
        "b_star": b_star,
        "beta_star": beta_star,
        "beta_star_db": linear_to_db(beta_star),
        "n_real": count.n_real,
        "n_star": count.n_star,
        "penalty": best / single,
    }
