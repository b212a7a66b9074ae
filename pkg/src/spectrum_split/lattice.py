"""Zero-outage densities for deterministic node placements.

Two quantities bracket what a planned (non-random) placement can achieve at
spectral efficiency b: the density at which the nearest interferer alone
just meets the threshold, and the density of an explicit square lattice of
transmitters at (i s, j s) whose receivers sit at (i s + d, j s).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analytic import threshold_from_efficiency
from .errors import DomainError, InsufficientTruncationError
from .params import CapacityKind, CapacityResult, NetworkParams

# tail bound may be at most this fraction of the partial lattice sum
MAX_TAIL_FRACTION = 0.01
DEFAULT_TRUNCATION = 64


class LatticeGeometryWarning(UserWarning):
    """Receivers are closer to a foreign transmitter than to their own."""


@dataclass(frozen=True)
class LatticeLayout:
    spacing: float
    shift: float
    truncation_cells: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not self.spacing > 0:
            raise DomainError("lattice spacing must be positive")
        if not self.shift > 0:
            raise DomainError("receiver shift must be positive")
        if int(self.truncation_cells) != self.truncation_cells or self.truncation_cells < 8:
            raise DomainError("truncation_cells must be an integer >= 8")

    @classmethod
    def for_params(cls, params: NetworkParams, spacing: float, truncation_cells: int = DEFAULT_TRUNCATION):
        return cls(spacing=spacing, shift=params.d, truncation_cells=truncation_cells)


class LatticeSum(NamedTuple):
    partial: float
    tail_bound: float

    @property
    def upper(self) -> float:
        return self.partial + self.tail_bound


def lattice_interference(alpha: float, layout: LatticeLayout) -> LatticeSum:
    """Sum of |p - r|^-alpha over lattice transmitters p other than the
    receiver's own, with r = (shift, 0).

    Points with max(|i|, |j|) <= truncation_cells are summed exactly; the rest
    are bounded by comparing each point with the average of
    (|x - r| - s/sqrt2)^-alpha over its own lattice cell, which turns the tail
    into a radial integral outside the truncation square.
    """
    s, d, m = layout.spacing, layout.shift, int(layout.truncation_cells)
    idx = np.arange(-m, m + 1, dtype=float)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    dist2 = (i * s - d) ** 2 + (j * s) ** 2
    dist2[m, m] = np.inf  # own transmitter
    with np.errstate(divide="ignore"):
        # a transmitter on top of the receiver gives infinite interference
        partial = float(np.sum(dist2 ** (-0.5 * alpha)))

    h = s / math.sqrt(2.0)
    t0 = (m + 0.5) * s - d - h
    if t0 <= 0:
        raise InsufficientTruncationError(
            f"window of {m} cells does not clear the receiver shift {d} at spacing {s}"
        )
    tail = (2.0 * math.pi / (s * s)) * (
        t0 ** (2.0 - alpha) / (alpha - 2.0) + h * t0 ** (1.0 - alpha) / (alpha - 1.0)
    )
    return LatticeSum(partial, tail)


def lattice_sir(params: NetworkParams, layout: LatticeLayout) -> float:
    """Signal-to-interference ratio of a lattice receiver, no fading or noise.

    The interference includes the tail bound, so the value is a guaranteed
    lower bound on the exact lattice SIR.

    Raises:
        InsufficientTruncationError: if the tail bound exceeds 1% of the
            partial sum.
    """
    if layout.shift >= layout.spacing:
        warnings.warn(
            f"receiver shift {layout.shift} >= spacing {layout.spacing}: a foreign "
            "transmitter may be nearer than the intended one",
            LatticeGeometryWarning,
            stacklevel=2,
        )
    total = lattice_interference(params.alpha, layout)
    if total.tail_bound > MAX_TAIL_FRACTION * total.partial:
        raise InsufficientTruncationError(
            f"tail bound {total.tail_bound:.3e} exceeds {MAX_TAIL_FRACTION:.0%} of "
            f"partial sum {total.partial:.3e} with {layout.truncation_cells} cells"
        )
    return layout.shift ** (-params.alpha) / total.upper


def det_upper_bound(params: NetworkParams, b: float) -> CapacityResult:
    """Density (1/(pi d^2)) (2^b - 1)^(-2/alpha) from requiring that no
    interferer be within d beta^(1/alpha) of a receiver."""
    if not b > 0:
        raise DomainError("spectral efficiency b must be positive")
    beta = threshold_from_efficiency(b)
    lam = beta ** (-2.0 / params.alpha) / (math.pi * params.d * params.d)
    return CapacityResult(lam, CapacityKind.DETERMINISTIC_UPPER)


def lattice_max_density(
    params: NetworkParams,
    b: float,
    truncation_cells: int = DEFAULT_TRUNCATION,
    rtol: float = 1e-12,
) -> CapacityResult:
    """Densest square lattice (density 1/s^2) whose SIR meets 2^b - 1.

    Bisection on the spacing s. The lower end d (1 + beta^(1/alpha)) is
    infeasible because the nearest interferer alone already meets the
    threshold with equality there; the upper end doubles until feasible.
    The returned spacing is on the feasible side.
    """
    if not b > 0:
        raise DomainError("spectral efficiency b must be positive")
    beta = threshold_from_efficiency(b)
    d = params.d

    def feasible(s: float) -> bool:
        return lattice_sir(params, LatticeLayout(s, d, truncation_cells)) >= beta

    lo = d * (1.0 + beta ** (1.0 / params.alpha))
    hi = 2.0 * lo
    while not feasible(hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    sir = lattice_sir(params, LatticeLayout(hi, d, truncation_cells))
    return CapacityResult(
        1.0 / (hi * hi),
        CapacityKind.LATTICE_LOWER,
        info={"spacing": hi, "sir": sir, "beta": beta, "truncation_cells": truncation_cells},
    )


def random_density(params: NetworkParams, b: float, epsilon: float) -> CapacityResult:
    """Random-placement density with one band at spectral efficiency b,
    (eps/(pi d^2)) (2^b - 1)^(-2/alpha)."""
    from .analytic import capacity_interference_limited

    single = NetworkParams(alpha=params.alpha, d=params.d, rho=params.rho, n0=0.0, w=1.0, r=b)
    return capacity_interference_limited(single, 1, epsilon)
