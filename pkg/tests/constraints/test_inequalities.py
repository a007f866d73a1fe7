import numpy as np
import pytest

from ghz_tangles.constraints.inequalities import (
    SteinerMode,
    achievability_lhs,
    achievability_lhs_t2,
    assistance_boundary,
    completed_square_margin,
    evaluate_all,
    flipped_achievability_lhs,
    steiner_margin,
    steiner_null_cone,
)
from ghz_tangles.core.sampling import haar_random_ket
from ghz_tangles.tangles.measures import tangle_tuple


class TestAchievability:
    @pytest.mark.parametrize(
        "point, expected",
        [
            ((0, 0, 0, 1), 0.0),
            ((1, 1, 0, 0), -1.0),
            ((2 / 3, 2 / 3, 2 / 3, 0), 0.0),
            ((0, 0, 0, 0), 0.0),
        ],
    )
    def test_values(self, point, expected):
        assert achievability_lhs(*point) == pytest.approx(expected, abs=1e-12)

    def test_haar_states_are_achievable(self):
        for index in range(100):
            tangles = tangle_tuple(haar_random_ket(3, 1, index))
            assert achievability_lhs(*tangles.as_tuple()) >= -1e-9

    def test_flipped_is_stronger(self, rng):
        x, y, z, t = rng.uniform(0, 1, size=(4, 200))
        assert np.all(flipped_achievability_lhs(x, y, z, t) <= achievability_lhs(x, y, z, t))

    def test_signed_t2(self):
        assert achievability_lhs_t2(0.1, 0.2, 0.3, 0.25) == pytest.approx(achievability_lhs(0.1, 0.2, 0.3, 0.5))

    def test_vectorized(self):
        grid = np.linspace(0, 1, 7)
        assert achievability_lhs(grid, grid, grid, grid).shape == (7,)


class TestCompletedSquare:
    def test_four_times_achievability(self, rng):
        x, y, z, t = rng.uniform(0, 1, size=(4, 200))
        np.testing.assert_allclose(completed_square_margin(x, y, z, t), 4 * achievability_lhs(x, y, z, t), atol=1e-12)


class TestSteiner:
    def test_convex_boundary_point(self):
        assert steiner_margin(2 / 3, 2 / 3, 2 / 3, SteinerMode.CONVEX) == pytest.approx(0.0, abs=1e-12)

    def test_concave_corner(self):
        assert steiner_margin(1, 1, 1, "concave") == pytest.approx(2.0, abs=1e-12)

    def test_outside_domain(self):
        assert steiner_margin(1, 0, 0.5, SteinerMode.CONVEX) == -np.inf

    def test_haar_convex_triples(self):
        for index in range(100):
            x, y, z, _ = tangle_tuple(haar_random_ket(3, 2, index)).as_tuple()
            assert steiner_margin(x, y, z, SteinerMode.CONVEX) >= -1e-8

    def test_null_cone(self, rng):
        x, y, z = rng.uniform(0, 1, size=(3, 50))
        np.testing.assert_allclose(steiner_null_cone(x, y, z), achievability_lhs(x, y, z, 0.0))

    def test_array_in_array_out(self):
        grid = np.linspace(0, 1, 5)
        assert steiner_margin(grid, grid, grid, SteinerMode.CONCAVE).shape == (5,)


class TestAssistanceBoundary:
    def test_imaginary_t(self, rng):
        x, y, z, t = rng.uniform(0, 1, size=(4, 50))
        np.testing.assert_allclose(assistance_boundary(x, y, z, t), achievability_lhs_t2(x, y, z, -(t**2)))

    def test_ghz(self):
        assert assistance_boundary(0, 0, 0, 1) == pytest.approx(-2.0)


class TestEvaluateAll:
    def test_names(self):
        names = [verdict.name for verdict in evaluate_all(0, 0, 0, 1)]
        expected = ["achievability", "completed-square", "assistance-boundary", "steiner-convex", "steiner-concave"]
        assert names == expected

    def test_infeasible_margin(self):
        verdicts = {verdict.name: verdict for verdict in evaluate_all(1, 1, 0, 0)}
        assert verdicts["achievability"].margin == pytest.approx(-1.0)
        assert verdicts["steiner-convex"].inputs == (1, 1, 0)
