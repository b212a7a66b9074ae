"""Optimal frequency-band splitting for random spatial wireless networks."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    area_spectral_efficiency,
    capacity_approx,
    capacity_from_plan,
    capacity_interference_limited,
    density_constant,
    ds_capacity,
    gap_adjusted_threshold,
    info_density,
    optimal_band_count,
    optimal_spectral_efficiency,
    sinr_threshold,
)
from .lambertw import lambert_w0  # noqa: E402
from .params import BandPlan, CapacityKind, CapacityResult, NetworkParams  # noqa: E402
