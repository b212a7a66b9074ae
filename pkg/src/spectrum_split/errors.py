"""Exception types raised across the package."""


class SpectrumSplitError(Exception):
    """Base class for all package errors."""


class DomainError(SpectrumSplitError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ThresholdOverflowError(SpectrumSplitError, OverflowError):
    """2**(n * util) - 1 is not representable; the band plan is infeasible."""


class NoiseInfeasibleError(SpectrumSplitError):
    """The rate cannot be met at any density because noise alone violates the threshold."""


class DegenerateGeometryError(SpectrumSplitError):
    """An interferer landed on the receiver."""


class SimulationError(SpectrumSplitError):
    """Base class for Monte-Carlo convergence failures."""


class NotBracketedError(SimulationError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class MaxIterationsError(SimulationError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class InsufficientTruncationError(SpectrumSplitError):
    """The lattice tail bound is too large relative to the partial sum."""
