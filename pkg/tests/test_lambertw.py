import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import lambertw as scipy_lambertw

from spectrum_split.errors import DomainError
from spectrum_split.lambertw import lambert_w0

BRANCH = -math.exp(-1.0)


def _fixed_point_w(z, iters=2000):
    # w = z exp(-w) converges on (-1/e, 0) away from the branch point
    w = 0.0
    for _ in range(iters):
        w = z * math.exp(-w)
    return w


def test_endpoints():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(BRANCH) == -1.0


def test_fixed_point_oracle():
    z = -2.0 * math.exp(-2.0)
    oracle = _fixed_point_w(z)
    assert oracle == pytest.approx(-0.40638, abs=1e-5)
    assert lambert_w0(z) == pytest.approx(oracle, abs=1e-14)


def test_against_scipy():
    zs = np.linspace(BRANCH, 0.0, 5001)
    ours = np.array([lambert_w0(z) for z in zs])
    ref = scipy_lambertw(zs, 0).real
    # scipy loses accuracy right at the branch point, so compare away from it
    away = zs > BRANCH + 1e-6
    assert np.max(np.abs(ours[away] - ref[away])) < 1e-10


@given(st.floats(min_value=BRANCH, max_value=0.0))
def test_residual(z):
    w = lambert_w0(z)
    assert -1.0 <= w <= 0.0
    assert abs(w * math.exp(w) - z) <= 1e-12


@given(st.floats(min_value=BRANCH, max_value=0.0), st.floats(min_value=BRANCH, max_value=0.0))
def test_monotone(a, b):
    lo, hi = sorted((a, b))
    assert lambert_w0(lo) <= lambert_w0(hi)


@pytest.mark.parametrize("z", [0.1, -0.37, float("nan"), float("-inf")])
def test_domain(z):
    with pytest.raises(DomainError):
        lambert_w0(z)
