import numpy as np
import pytest

from ghz_tangles.core.operators import LocalOperator, local_operators
from ghz_tangles.core.sampling import haar_random_ket, random_local_unitary
from ghz_tangles.core.states import DensityMatrix, Ket, apply_local, ghz_ket, ket_from_amplitudes, partial_trace, w_ket
from ghz_tangles.errors import ArityError, DomainError, InvalidStateError, SizeError


class TestKet:
    def test_amplitudes_are_read_only(self, ghz3):
        with pytest.raises(ValueError):
            ghz3.amplitudes[0] = 1.0

    def test_wrong_length(self):
        with pytest.raises(InvalidStateError):
            Ket(2, np.ones(3))

    def test_not_finite(self):
        with pytest.raises(InvalidStateError):
            Ket(1, np.array([np.nan, 1.0]))

    def test_too_many_qubits(self):
        with pytest.raises(SizeError):
            Ket(13, np.zeros(2**13))

    def test_normalized_flag_is_checked(self):
        with pytest.raises(InvalidStateError):
            Ket(1, np.array([1.0, 1.0]), normalized=True)

    def test_zero_vector_cannot_be_normalized(self):
        with pytest.raises(InvalidStateError):
            Ket(2, np.zeros(4)).normalize()

    def test_require_normalized(self):
        with pytest.raises(InvalidStateError):
            Ket(1, np.array([1.0, 1.0])).require_normalized()

    def test_from_amplitudes(self):
        psi = ket_from_amplitudes([1, 1j])
        assert psi.n == 1
        assert psi.normalized
        np.testing.assert_allclose(psi.amplitudes, np.array([1, 1j]) / np.sqrt(2))

    def test_from_amplitudes_not_power_of_two(self):
        with pytest.raises(InvalidStateError):
            ket_from_amplitudes([1, 0, 0])

    def test_tensor_axes_are_parties(self):
        # |100> has party 0 in state 1
        psi = ket_from_amplitudes([0, 0, 0, 0, 1, 0, 0, 0])
        assert psi.tensor[1, 0, 0] == 1.0


class TestBuilders:
    def test_ghz(self):
        psi = ghz_ket(3)
        assert psi.amplitudes[0] == pytest.approx(1 / np.sqrt(2))
        assert psi.amplitudes[7] == pytest.approx(1 / np.sqrt(2))
        assert psi.norm2 == pytest.approx(1.0)

    def test_generalized_ghz(self):
        psi = ghz_ket(4, 3.0, 4.0)
        assert abs(psi.amplitudes[0]) == pytest.approx(0.6)
        assert abs(psi.amplitudes[-1]) == pytest.approx(0.8)

    def test_w(self):
        psi = w_ket(3)
        np.testing.assert_allclose(np.abs(psi.amplitudes[[1, 2, 4]]), 1 / np.sqrt(3))
        assert psi.norm2 == pytest.approx(1.0)


class TestApplyLocal:
    def test_identity(self, w3):
        image, p = apply_local([LocalOperator.identity(q) for q in range(3)], w3)
        np.testing.assert_allclose(image.amplitudes, w3.amplitudes)
        assert p == pytest.approx(1.0)

    def test_flip_first_party(self, product3):
        x = np.array([[0, 1], [1, 0]])
        image, _ = apply_local(local_operators([x, np.eye(2), np.eye(2)]), product3)
        # party 0 is the most significant bit
        assert image.amplitudes[4] == pytest.approx(1.0)

    def test_norm_change(self, ghz3):
        image, p = apply_local(local_operators([np.diag([1, 2])] * 3), ghz3)
        assert p == pytest.approx((1 + 64) / 2)
        assert not image.normalized

    def test_missing_party(self, ghz3):
        with pytest.raises(ArityError):
            apply_local([LocalOperator.identity(0), LocalOperator.identity(1)], ghz3)


class TestDensityMatrix:
    def test_from_ket(self, bell):
        rho = DensityMatrix.from_ket(bell)
        assert rho.k == 2
        assert rho.trace == pytest.approx(1.0)
        assert rho.rank() == 1

    def test_not_hermitian(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix((0,), np.array([[0.5, 1.0], [0.0, 0.5]]))

    def test_wrong_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix((0,), np.eye(2))

    def test_validated_rejects_negative(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix.validated([0], np.array([[1.5, 0.0], [0.0, -0.5]]))

    def test_duplicate_qubits(self):
        with pytest.raises(ArityError):
            DensityMatrix((0, 0), np.eye(4) / 4)

    def test_spectrum_descending(self):
        rho = DensityMatrix((0,), np.diag([0.25, 0.75]))
        np.testing.assert_allclose(rho.spectrum(), [0.75, 0.25])


class TestPartialTrace:
    def test_ghz_pair(self, ghz3):
        rho = partial_trace(ghz3, [0, 1])
        np.testing.assert_allclose(rho.entries, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
        assert rho.qubits == (0, 1)

    def test_w_single_party(self, w3):
        rho = partial_trace(w3, [0])
        np.testing.assert_allclose(rho.entries, np.diag([2 / 3, 1 / 3]), atol=1e-15)

    def test_keeps_original_order(self):
        # |01> keeps the labels of both parties regardless of the order they are passed in
        psi = ket_from_amplitudes([0, 1, 0, 0])
        rho = partial_trace(psi, [1, 0])
        assert rho.qubits == (0, 1)
        assert rho.entries[1, 1] == pytest.approx(1.0)

    def test_density_matrix_agrees_with_ket(self):
        psi = haar_random_ket(4, 11)
        direct = partial_trace(psi, [1, 3])
        staged = partial_trace(partial_trace(psi, [1, 2, 3]), [1, 3])
        np.testing.assert_allclose(staged.entries, direct.entries, atol=1e-13)
        assert staged.qubits == (1, 3)

    def test_local_unitary_on_traced_party(self, rng):
        psi = haar_random_ket(3, 5)
        rotated, _ = apply_local(
            [LocalOperator.identity(0), LocalOperator.identity(1), random_local_unitary(rng, 2)], psi
        )
        expected = partial_trace(psi, [0, 1]).entries
        np.testing.assert_allclose(partial_trace(rotated, [0, 1]).entries, expected, atol=1e-13)

    def test_empty_keep(self, ghz3):
        with pytest.raises(DomainError):
            partial_trace(ghz3, [])

    def test_unknown_party(self, ghz3):
        with pytest.raises(DomainError):
            partial_trace(ghz3, [0, 5])
