"""Principal branch of the Lambert W function on [-1/e, 0]."""

import math

from .errors import DomainError

_INV_E = math.exp(-1.0)
_MAX_ITER = 64


def _initial_guess(z: float) -> float:
    if z < -0.25:
        # branch-point series in p = sqrt(2 (e z + 1))
        p = math.sqrt(max(2.0 * (math.e * z + 1.0), 0.0))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    # Taylor series about the origin
    return z - z * z + 1.5 * z ** 3


def lambert_w0(z: float) -> float:
    """Solve w * exp(w) = z for w in [-1, 0], given z in [-1/e, 0].

    Halley's iteration started from a series guess; the result satisfies
    ``abs(w * exp(w) - z) <= 1e-12``.

    Raises:
        DomainError: if z is not in [-1/e, 0].
    """
    z = float(z)
    if not (-_INV_E <= z <= 0.0):
        raise DomainError(f"lambert_w0 is defined here only on [-1/e, 0], got {z!r}")
    if z == 0.0:
        return 0.0
    if z == -_INV_E:
        return -1.0

    w = _initial_guess(z)
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 <= 0.0:
            # stepped past the branch point; pull back inside (-1, 0]
            w = -1.0 + 1e-8
            continue
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w_new = min(max(w - step, -1.0), 0.0)
        if abs(w_new - w) <= 4.0 * math.ulp(max(abs(w), 1e-300)):
            w = w_new
            break
        w = w_new
    return w
