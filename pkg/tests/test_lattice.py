import math

import pytest
from hypothesis import given, settings, strategies as st

from spectrum_split import analytic, lattice
from spectrum_split.errors import DomainError, InsufficientTruncationError
from spectrum_split.lattice import LatticeGeometryWarning, LatticeLayout
from spectrum_split.params import CapacityKind, NetworkParams

P4 = NetworkParams(alpha=4.0, d=10.0)
B4 = analytic.optimal_spectral_efficiency(4.0)


def brute_sum(alpha, s, d, m):
    # plain double loop as an independent check of the vectorized sum
    total = 0.0
    for i in range(-m, m + 1):
        for j in range(-m, m + 1):
            if i == 0 and j == 0:
                continue
            total += ((i * s - d) ** 2 + (j * s) ** 2) ** (-alpha / 2)
    return total


class TestUpperBound:
    def test_unit_threshold(self):
        assert lattice.det_upper_bound(P4, 1.0).lam == pytest.approx(1 / (100 * math.pi), rel=1e-15)

    def test_optimal_b(self):
        lam = lattice.det_upper_bound(P4, B4).lam
        assert lam == pytest.approx((1 / (100 * math.pi)) * (2 ** 2.3 - 1) ** -0.5, rel=2e-3)
        assert lam == pytest.approx(1.606e-3, rel=1e-3)

    def test_random_ratio_is_epsilon(self):
        for eps in (0.01, 0.1, 0.3):
            ratio = lattice.random_density(P4, B4, eps).lam / lattice.det_upper_bound(P4, B4).lam
            assert ratio == pytest.approx(eps, rel=1e-14)

    def test_bad_b(self):
        with pytest.raises(DomainError):
            lattice.det_upper_bound(P4, 0.0)


class TestLatticeSum:
    def test_matches_brute_force(self):
        layout = LatticeLayout(30.0, 10.0, 8)
        total = lattice.lattice_interference(4.0, layout)
        assert total.partial == pytest.approx(brute_sum(4.0, 30.0, 10.0, 8), rel=1e-13)

    @pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
    def test_tail_brackets_true_sum(self, alpha):
        s, d = 25.0, 10.0
        sums = [lattice.lattice_interference(alpha, LatticeLayout(s, d, m)) for m in (8, 16, 32, 64, 128)]
        partials = [x.partial for x in sums]
        uppers = [x.upper for x in sums]
        assert all(b >= a for a, b in zip(partials, partials[1:]))
        assert all(b <= a for a, b in zip(uppers, uppers[1:]))
        assert all(u >= partials[-1] for u in uppers)

    def test_sir_decreases_with_window(self):
        sirs = []
        for m in (8, 16, 32):
            total = lattice.lattice_interference(4.0, LatticeLayout(25.0, 10.0, m))
            sirs.append(10.0 ** -4 / total.partial)
        assert sirs[0] >= sirs[1] >= sirs[2]

    def test_truncation_error(self):
        with pytest.raises(InsufficientTruncationError):
            lattice.lattice_sir(NetworkParams(alpha=2.5, d=10.0), LatticeLayout(25.0, 10.0, 8))

    def test_layout_validation(self):
        for args in ((0.0, 10.0, 8), (10.0, 0.0, 8), (10.0, 1.0, 4)):
            with pytest.raises(DomainError):
                LatticeLayout(*args)

    def test_close_spacing_warns(self):
        with pytest.warns(LatticeGeometryWarning):
            sir = lattice.lattice_sir(P4, LatticeLayout(10.0, 10.0))
        assert sir == 0.0

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.1, max_value=100.0))
    def test_scale_invariance(self, kappa):
        base = lattice.lattice_sir(P4, LatticeLayout(30.0, 10.0, 16))
        scaled = lattice.lattice_sir(NetworkParams(alpha=4.0, d=10.0 * kappa), LatticeLayout(30.0 * kappa, 10.0 * kappa, 16))
        assert scaled == pytest.approx(base, rel=1e-10)

    def test_sparse_lattice(self):
        sirs = [lattice.lattice_sir(P4, LatticeLayout(s, 10.0)) for s in (30.0, 300.0, 3000.0)]
        assert sirs[0] < sirs[1] < sirs[2]
        assert sirs[2] > 1e7


class TestMaxDensity:
    def test_factor_band(self):
        upper = lattice.det_upper_bound(P4, B4).lam
        res = lattice.lattice_max_density(P4, B4)
        assert res.kind is CapacityKind.LATTICE_LOWER
        assert 1.0 <= upper / res.lam <= 3.0
        assert res.lam == pytest.approx(1.0 / res.info["spacing"] ** 2)

    def test_zero_outage_at_spacing(self):
        res = lattice.lattice_max_density(P4, B4)
        beta = analytic.threshold_from_efficiency(B4)
        assert lattice.lattice_sir(P4, LatticeLayout(res.info["spacing"], 10.0)) >= beta
        # a slightly denser lattice misses the threshold
        assert lattice.lattice_sir(P4, LatticeLayout(res.info["spacing"] * (1 - 1e-6), 10.0)) < beta

    def test_strictly_decreasing_in_b(self):
        lams = [lattice.lattice_max_density(P4, b).lam for b in (0.5, 1.0, 2.0, 3.0, 4.0)]
        assert all(b < a for a, b in zip(lams, lams[1:]))

    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0, B4])
    def test_below_nearest_interferer_bound_at_moderate_b(self, b):
        assert lattice.lattice_max_density(P4, b).lam <= lattice.det_upper_bound(P4, b).lam

    def test_nearest_interferer_bound_not_universal(self):
        # at high spectral efficiency the lattice packs tighter than the exclusion-disk figure
        assert lattice.lattice_max_density(P4, 4.0).lam > lattice.det_upper_bound(P4, 4.0).lam
