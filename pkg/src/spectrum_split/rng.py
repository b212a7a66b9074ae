"""Counter-based uniform variates.

Every variate is a pure function of (master seed, trial index, purpose tag,
draw index), so a trial can be replayed in isolation and parallel schedules
cannot change results. The mixer is the splitmix64 finalizer.
"""

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TAG_MULT = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV_2_53 = 1.0 / 9007199254740992.0

# purpose tags
TAG_ARRIVAL = 1
TAG_POSITION = 2
TAG_INTERFERER_FADING = 3
TAG_SIGNAL_FADING = 4

MASK64 = (1 << 64) - 1


@nb.njit(nb.uint64(nb.uint64), cache=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(nb.uint64(nb.uint64, nb.uint64, nb.uint64), cache=True)
def stream_key(seed, trial, tag):
    """Key of the substream for one (trial, purpose) pair."""
    return mix64(mix64(seed ^ (tag * _TAG_MULT)) + trial * _GOLDEN)


@nb.njit(nb.float64(nb.uint64, nb.uint64), cache=True)
def uniform(key, k):
    """k-th uniform of a substream, strictly inside (0, 1)."""
    x = mix64(key + (k + _ONE) * _GOLDEN)
    return (np.float64(x >> _S11) + 0.5) * _INV_2_53


def as_seed(seed: int) -> np.uint64:
    """Reduce an arbitrary Python int to a 64-bit seed."""
    return np.uint64(int(seed) & MASK64)
