"""Core data types: network constants, band plans and density results."""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .errors import DomainError


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class NetworkParams:
    """Physical constants of the network.

    Attributes:
        alpha: path-loss exponent, strictly greater than 2.
        d: transmitter-receiver distance in meters.
        rho: transmit power in watts.
        n0: noise power spectral density in W/Hz. Zero means the network is
            interference limited (infinite SNR).
        w: total system bandwidth in Hz.
        r: per-link rate requirement in bits/sec.
    """

    alpha: float
    d: float
    rho: float = 1.0
    n0: float = 0.0
    w: float = 1.0
    r: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "d", "rho", "n0", "w", "r"):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite number, got {value!r}")
        if self.alpha <= 2:
            raise DomainError("alpha must exceed 2")
        if self.d <= 0:
            raise DomainError("d must be positive")
        if self.rho <= 0:
            raise DomainError("rho must be positive")
        if self.w <= 0:
            raise DomainError("w (bandwidth) must be positive")
        if self.r <= 0:
            raise DomainError("r (rate) must be positive")
        if self.n0 < 0:
            raise DomainError("n0 must be non-negative")

    @classmethod
    def from_util(
        cls,
        alpha: float,
        d: float,
        util: float,
        snr_db: Optional[float] = None,
        rho: float = 1.0,
        w: float = 1.0,
    ) -> "NetworkParams":
        """Build parameters from a spectral utilization R/W and a full-band SNR.

        ``snr_db=None`` (or +inf) gives an interference-limited network.
        """
        if not (isinstance(util, numbers.Real) and util > 0 and math.isfinite(util)):
            raise DomainError("util must be positive")
        if snr_db is None or snr_db == math.inf:
            n0 = 0.0
        else:
            if not math.isfinite(snr_db):
                raise DomainError("snr_db must be a number or +inf")
            if d <= 0 or rho <= 0 or w <= 0:
                # let __post_init__ produce the precise message
                return cls(alpha=alpha, d=d, rho=rho, n0=0.0, w=w, r=util * w)
            n0 = rho * d ** (-alpha) / (db_to_linear(snr_db) * w)
        return cls(alpha=alpha, d=d, rho=rho, n0=n0, w=w, r=util * w)

    @property
    def util(self) -> float:
        """Spectral utilization R/W in bps/Hz/user."""
        return self.r / self.w

    @property
    def interference_limited(self) -> bool:
        return self.n0 == 0.0

    @property
    def snr(self) -> float:
        """Full-band interference-free SNR, rho d^-alpha / (N0 W).

        Raises DomainError for interference-limited networks; check
        ``interference_limited`` first.
        """
        if self.interference_limited:
            raise DomainError("SNR is infinite for an interference-limited network")
        return self.rho * self.d ** (-self.alpha) / (self.n0 * self.w)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "d": self.d,
            "rho": self.rho,
            "n0": self.n0,
            "w": self.w,
            "r": self.r,
        }


@dataclass(frozen=True)
class BandPlan:
    """A split of the band into ``n`` sub-bands with SINR threshold ``beta``
    and per-band spectral efficiency ``b`` (bps/Hz)."""

    n: int
    beta: float
    b: float

    @property
    def beta_db(self) -> float:
        return linear_to_db(self.beta)


class CapacityKind(str, enum.Enum):
    ANALYTIC_APPROX = "analytic-approx"
    ANALYTIC_INTERFERENCE_LIMITED = "analytic-interference-limited"
    MONTE_CARLO = "monte-carlo"
    DS_ANALYTIC = "ds-analytic"
    DETERMINISTIC_UPPER = "deterministic-upper"
    LATTICE_LOWER = "lattice-lower"


@dataclass(frozen=True)
class CapacityResult:
    """A transmitter density (per m^2) with its provenance and uncertainty."""

    lam: float
    kind: CapacityKind
    stderr: float = 0.0
    info: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError(f"density must be non-negative, got {self.lam}")
        if not self.stderr >= 0:
            raise DomainError(f"stderr must be non-negative, got {self.stderr}")

    def to_dict(self) -> dict:
        out = {"lambda": self.lam, "kind": self.kind.value, "stderr": self.stderr}
        if self.info:
            out["info"] = dict(self.info)
        return out
