import math

import pytest

from spectrum_split.params import NetworkParams


@pytest.fixture
def quarter():
    """alpha 4, d 10, util 0.25, no noise."""
    return NetworkParams.from_util(alpha=4.0, d=10.0, util=0.25)


def rel(a, b):
    return abs(a - b) / abs(b)


SCALE_4_10 = 0.1 / (100.0 * math.pi)
