import math

import numpy as np
import pytest

from ghz_tangles.constraints.inequalities import achievability_lhs
from ghz_tangles.constraints.marginals import (
    boundary_factors,
    eigenvalue_from_tangles,
    eigenvalue_space_lhs,
    marginal_triangle_margins,
    one_tangle_eigenvalue,
    squared_boundary_expression,
    tangles_from_eigenvalues,
    triangle_margin_min,
)
from ghz_tangles.core.sampling import haar_random_ket
from ghz_tangles.errors import IncompatibleMarginalsError, InconsistentTanglesError
from ghz_tangles.tangles.measures import one_tangle, tangle_tuple


def spectra(psi) -> tuple[float, float, float]:
    return tuple(float(one_tangle_eigenvalue(one_tangle(psi, party))) for party in range(3))


def tuple_spectra(x: float, y: float, z: float, t: float) -> tuple[float, float, float]:
    return eigenvalue_from_tangles(z, y, t), eigenvalue_from_tangles(z, x, t), eigenvalue_from_tangles(y, x, t)

class TestEigenvalues:
    @pytest.mark.parametrize("tau, expected", [(0.0, 0.0), (1.0, 0.5), (2 * math.sqrt(2) / 3, 1 / 3)])
    def test_one_tangle_eigenvalue(self, tau, expected):
        assert one_tangle_eigenvalue(tau) == pytest.approx(expected)

    def test_from_tangles(self):
        assert eigenvalue_from_tangles(0, 0, 1) == pytest.approx(0.5)
        assert eigenvalue_from_tangles(2 / 3, 2 / 3, 0) == pytest.approx(1 / 3)

    def test_inconsistent(self):
        with pytest.raises(InconsistentTanglesError):
            eigenvalue_from_tangles(1, 1, 0)

    def test_haar_consistency(self):
        for index in range(20):
            psi = haar_random_ket(3, 40, index)
            x, y, z, t = tangle_tuple(psi).as_tuple()
            assert eigenvalue_from_tangles(z, y, t) == pytest.approx(spectra(psi)[0], abs=1e-9)


class TestTanglesFromEigenvalues:
    def test_w(self):
        assert tangles_from_eigenvalues(1 / 3, 1 / 3, 1 / 3, 0) == pytest.approx((2 / 3,) * 3)

    def test_ghz(self):
        assert tangles_from_eigenvalues(0.5, 0.5, 0.5, 1) == pytest.approx((0, 0, 0), abs=1e-12)

    def test_haar(self):
        for index in range(20):
            psi = haar_random_ket(3, 41, index)
            x, y, z, t = tangle_tuple(psi).as_tuple()
            assert tangles_from_eigenvalues(*spectra(psi), t) == pytest.approx((z, y, x), abs=1e-7)

    def test_incompatible(self):
        with pytest.raises(IncompatibleMarginalsError):
            tangles_from_eigenvalues(0.5, 0.0, 0.0, 0.0)


class TestTriangle:
    def test_ghz(self):
        result = marginal_triangle_margins(0.5, 0.5, 0.5)
        assert result.margins == pytest.approx((0.5, 0.5, 0.5))
        assert result.product == pytest.approx(-1 / 8)
        assert result.satisfied

    def test_violated(self):
        assert not marginal_triangle_margins(0.5, 0.1, 0.1).satisfied

    def test_haar_states(self):
        for index in range(50):
            assert triangle_margin_min(*spectra(haar_random_ket(3, 42, index))) >= -1e-9

    def test_vectorized(self, rng):
        lam = rng.uniform(0, 0.5, size=(3, 10))
        assert triangle_margin_min(*lam).shape == (10,)


class TestBoundary:
    def test_factors_vanish_at_ghz(self):
        p1, p2 = boundary_factors(0.5, 0.5, 0.5, 1.0)
        assert (p1, p2) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_factorization(self, rng):
        lam_a, lam_b, lam_c = rng.uniform(0, 0.5, size=(3, 100))
        t = rng.uniform(0, 1, size=100)
        p1, p2 = boundary_factors(lam_a, lam_b, lam_c, t)
        np.testing.assert_allclose(squared_boundary_expression(lam_a, lam_b, lam_c, t), p1 * p2 / 16, atol=1e-12)

    def test_eigenvalue_space_lhs(self):
        for index in range(10):
            psi = haar_random_ket(3, 43, index)
            tangles = tangle_tuple(psi)
            expected = achievability_lhs(*tangles.as_tuple())
            assert eigenvalue_space_lhs(*spectra(psi), tangles.t) == pytest.approx(expected, abs=1e-8)

    def test_eigenvalue_space_lhs_w(self):
        assert eigenvalue_space_lhs(1 / 3, 1 / 3, 1 / 3, 0) == pytest.approx(0.0, abs=1e-12)


class TestImplicationStrength:
    def test_achievable_tuples_have_compatible_spectra(self):
        for index in range(200):
            x, y, z, t = tangle_tuple(haar_random_ket(3, 31, index)).as_tuple()
            assert achievability_lhs(x, y, z, t) >= -1e-9
            assert min(marginal_triangle_margins(*tuple_spectra(x, y, z, t)).margins) >= -1e-9

    def test_compatible_spectra_need_not_be_achievable(self):
        # equal 2-tangles beyond 2/3 without a 3-tangle
        x = y = z = 0.7
        assert marginal_triangle_margins(*tuple_spectra(x, y, z, 0)).satisfied
        assert achievability_lhs(x, y, z, 0) == pytest.approx(-0.0343)
