import math

import numpy as np
import pytest
from pydantic import ValidationError

from ghz_tangles.canonical.acin import (
    AcinForm,
    acin_normal_form,
    canonical_ket,
    necessity_certificates,
    omega_sweep_minimum,
    random_acin_form,
    tangles_from_acin,
)
from ghz_tangles.core.sampling import haar_random_ket, sample_rng
from ghz_tangles.core.states import ghz_ket
from ghz_tangles.errors import ArityError
from ghz_tangles.tangles.measures import tangle_tuple

SQRT_HALF = 1 / math.sqrt(2)


class TestAcinForm:
    def test_to_ket(self):
        form = AcinForm(lambdas=(SQRT_HALF, 0.0, 0.0, 0.0, SQRT_HALF))
        np.testing.assert_allclose(form.to_ket().amplitudes, ghz_ket(3).amplitudes, atol=1e-15)

    def test_phase_position(self):
        form = AcinForm(lambdas=(0.0, 1.0, 0.0, 0.0, 0.0), omega=math.pi / 2)
        assert form.amplitudes()[4] == pytest.approx(1j)

    @pytest.mark.parametrize(
        "lambdas, omega",
        [((1.0, -0.0001, 0.0, 0.0, 0.0), 0.0), ((1.0, 1.0, 0.0, 0.0, 0.0), 0.0), ((1.0, 0.0, 0.0, 0.0, 0.0), 7.0)],
    )
    def test_invalid(self, lambdas, omega):
        with pytest.raises(ValidationError):
            AcinForm(lambdas=lambdas, omega=omega)

    def test_tangles(self):
        form = AcinForm(lambdas=(SQRT_HALF, 0.0, 0.0, 0.0, SQRT_HALF))
        assert tangles_from_acin(form).as_tuple() == pytest.approx((0, 0, 0, 1))


class TestNormalForm:
    def test_ghz(self, ghz3):
        result = acin_normal_form(ghz3)
        assert result.form.lambdas == pytest.approx((SQRT_HALF, 0, 0, 0, SQRT_HALF), abs=1e-12)

    def test_product(self, product3):
        form = acin_normal_form(product3).form
        assert tangles_from_acin(form).as_tuple() == pytest.approx((0, 0, 0, 0), abs=1e-12)

    def test_haar_states(self):
        for index in range(30):
            psi = haar_random_ket(3, 55, index)
            result = acin_normal_form(psi)
            assert result.residual <= 1e-9
            expected = tangle_tuple(psi).as_tuple()
            np.testing.assert_allclose(tangles_from_acin(result.form).as_tuple(), expected, atol=1e-9)

    def test_canonical_ket(self):
        image = canonical_ket(haar_random_ket(3, 56))
        np.testing.assert_allclose(image.amplitudes[1:4], 0.0, atol=1e-9)

    def test_w(self, w3):
        result = acin_normal_form(w3)
        assert tangles_from_acin(result.form).as_tuple() == pytest.approx((2 / 3, 2 / 3, 2 / 3, 0), abs=1e-9)

    def test_arity(self):
        with pytest.raises(ArityError):
            acin_normal_form(ghz_ket(4))


class TestCertificates:
    @pytest.mark.parametrize("omega, branch", [(0.0, "zero"), (math.pi, "pi")])
    def test_perfect_square(self, omega, branch):
        for index in range(30):
            report = necessity_certificates(random_acin_form(sample_rng(60, index), omega=omega))
            assert report.branch == branch
            assert report.square_residual <= 1e-9
            assert report.lhs >= -1e-12

    def test_generic_branch(self, rng):
        report = necessity_certificates(random_acin_form(rng, omega=1.0))
        assert report.branch == "generic"
        assert report.square_term is None
        assert report.square_residual is None

    def test_second_derivative(self):
        for index in range(20):
            report = necessity_certificates(random_acin_form(sample_rng(61, index)))
            assert report.second_difference == pytest.approx(report.expected_second_derivative, rel=1e-6, abs=1e-8)

    def test_flipped_when_dominated(self):
        form = AcinForm(lambdas=(0.5, 0.5, 0.5, 0.1, math.sqrt(1 - 0.76)))
        report = necessity_certificates(form)
        assert report.flipped_lhs is not None
        assert report.certificate_lhs == report.flipped_lhs


class TestOmegaSweep:
    def test_branches_are_minimal(self):
        for index in range(20):
            sweep, branches = omega_sweep_minimum(random_acin_form(sample_rng(62, index)), points=16)
            assert branches <= sweep + 1e-12
            assert branches >= -1e-12
