"""
Tests for the dense simulation engine (qsgps.qsim).

These tests cover circuit application on statevectors and density
matrices, expectation values, Kraus channels, partial trace, fidelity and
projective sampling of product observables.

Qubit 0 is the most significant bit of the basis index throughout, so
Statevector.basis("10") is amplitude index 2.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import debug_sim

from qsgps import bell, code5, qsim
from qsgps.errors import (
    DimensionMismatchError,
    IncompleteChannelError,
    InvalidStateError,
    NotDichotomicError,
    NotHermitianError,
    NotNormalizedError,
    NotUnitaryError,
    OverlappingSupportError,
)
from qsgps.models.circuit import Circuit, Gate
from qsgps.models.hardware import NoiseModel
from qsgps.models.operators import PAULI_MATRICES, KrausChannel, Observable, PauliString, kron_all
from qsgps.models.state import DensityMatrix, Statevector


def bell_pair() -> Statevector:
    r = 1.0 / math.sqrt(2.0)
    return Statevector.from_bitstrings({"00": r, "11": r})


def single_qubit(letter: str, qubit: int, num_qubits: int) -> Observable:
    return Observable.from_pauli(PauliString.single(num_qubits, qubit, letter))


def dense_on(matrix: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    factors = [np.eye(2)] * num_qubits
    factors[qubit] = matrix
    return kron_all(factors)


class TestStates:
    def test_basis_index_is_big_endian(self):
        state = Statevector.basis("10010")
        assert state.num_qubits == 5
        assert state.amplitudes[18] == 1.0

    def test_unnormalized_amplitudes_are_rejected(self):
        with pytest.raises(NotNormalizedError):
            Statevector([1.0, 1.0])

    def test_non_power_of_two_length_is_rejected(self):
        with pytest.raises(InvalidStateError):
            Statevector([1.0, 0.0, 0.0])

    def test_amplitudes_are_read_only(self):
        state = Statevector.basis("0")
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0

    def test_density_matrix_rejects_negative_eigenvalues(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_density_matrix_rejects_wrong_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([0.5, 0.25]))

    def test_maximally_mixed_purity(self):
        assert DensityMatrix.maximally_mixed(3).purity() == pytest.approx(1.0 / 8.0)

    def test_product_state_ordering(self):
        state = Statevector.product((0.0, 1.0), (1.0, 0.0))
        assert_allclose(state.amplitudes, Statevector.basis("10").amplitudes)


class TestApplyCircuit:
    def test_empty_circuit_is_identity(self):
        state = code5.logical_state(0.6, 0.8)
        out = qsim.apply_circuit(state, Circuit(5))
        assert_allclose(out.amplitudes, state.amplitudes)

    def test_hadamard_cnot_makes_bell_pair(self):
        circuit = Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])
        out = qsim.apply_circuit(Statevector.basis("00"), circuit)
        assert_allclose(out.amplitudes, bell_pair().amplitudes, atol=1e-12)

    def test_cnot_control_is_first_target(self):
        out = qsim.apply_circuit(Statevector.basis("100"), Circuit(3, [Gate.cnot(0, 2)]))
        assert_allclose(out.amplitudes, Statevector.basis("101").amplitudes)
        out = qsim.apply_circuit(Statevector.basis("001"), Circuit(3, [Gate.cnot(0, 2)]))
        assert_allclose(out.amplitudes, Statevector.basis("001").amplitudes)

    def test_register_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            qsim.apply_circuit(Statevector.basis("00"), Circuit(3))

    def test_non_unitary_custom_gate(self):
        with pytest.raises(NotUnitaryError):
            Gate.unitary(0, [[1.0, 1.0], [0.0, 1.0]])

    def test_density_and_vector_paths_agree(self):
        rng = np.random.default_rng(7)
        gates = [Gate.h(0), Gate.cnot(0, 1), Gate.unitary(2, _random_unitary(rng)), Gate.cnot(2, 0), Gate.y(1)]
        circuit = Circuit(3, gates)
        start = Statevector.basis("010")
        pure = qsim.apply_circuit(start, circuit)
        mixed = qsim.apply_circuit_density(start.to_density(), circuit)
        assert_allclose(mixed.entries, pure.to_density().entries, atol=1e-12)

    def test_noiseless_model_changes_nothing(self):
        circuit = Circuit(2, [Gate.h(0), Gate.cnot(0, 1)])
        rho = Statevector.basis("00").to_density()
        clean = qsim.apply_circuit_density(rho, circuit)
        noisy = qsim.apply_circuit_density(rho, circuit, NoiseModel(0.0, 0.0))
        assert_allclose(noisy.entries, clean.entries)


def _random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestExpectation:
    def test_z_on_zero(self):
        assert qsim.expectation(Statevector.basis("0"), single_qubit("Z", 0, 1)) == 1.0

    def test_first_generator_on_logical_zero(self):
        value = qsim.expectation(code5.logical_state(1.0, 0.0), PauliString("XZZXI"))
        assert value == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("word", ["XIIII", "ZZIII", "IYXZI", "XXXXX", "ZIZIZ"])
    def test_traceless_pauli_on_maximally_mixed(self, word):
        assert qsim.expectation(DensityMatrix.maximally_mixed(5), PauliString(word)) == pytest.approx(0.0, abs=1e-15)

    def test_dense_non_hermitian_operator(self):
        with pytest.raises(NotHermitianError):
            qsim.expectation(Statevector.basis("0"), np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_dense_operator_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            qsim.expectation(Statevector.basis("00"), np.eye(2))

    def test_signed_pauli(self):
        value = qsim.expectation(Statevector.basis("0"), PauliString("Z", sign=-1))
        assert value == -1.0


class TestChannels:
    def test_identity_channel(self):
        rho = code5.logical_state(1.0, 0.0).to_density()
        out = qsim.apply_channel(rho, KrausChannel.identity((0, 3)))
        assert_allclose(out.entries, rho.entries, atol=1e-15)

    def test_incomplete_channel_is_rejected(self):
        with pytest.raises(IncompleteChannelError):
            KrausChannel([np.diag([1.0, 0.0])], (0,))

    def test_full_depolarizing_mixes_the_targeted_qubit(self):
        rho = Statevector.basis("01").to_density()
        out = qsim.apply_channel(rho, KrausChannel.depolarizing(1.0, (1,)))
        assert_allclose(qsim.partial_trace(out, [1]).entries, np.eye(2) / 2, atol=1e-12)
        assert_allclose(qsim.partial_trace(out, [0]).entries, np.diag([1.0, 0.0]), atol=1e-12)

    def test_depolarize_matches_kraus_twirl(self):
        rho = code5.logical_state(0.6, 0.8j).to_density()
        direct = qsim.depolarize(rho, 0.3, [1, 4])
        twirl = qsim.apply_channel(rho, KrausChannel.depolarizing(0.3, (1, 4)))
        assert_allclose(direct.entries, twirl.entries, atol=1e-12)

    @debug_sim
    def test_depolarizing_on_first_qubit_of_logical_zero(self):
        psi = code5.logical_state(1.0, 0.0)
        rho = psi.to_density()
        p = 0.1
        out = qsim.apply_channel(rho, KrausChannel.depolarizing(p, (0,)))
        debug_sim.current.input = rho
        debug_sim.current.output = out

        oracle = (1 - p) * rho.entries
        for letter in "IXYZ":
            op = dense_on(PAULI_MATRICES[letter], 0, 5)
            oracle = oracle + (p / 4) * op @ rho.entries @ op.conj().T
        assert_allclose(out.entries, oracle, atol=1e-12)
        assert np.trace(out.entries).real == pytest.approx(1.0, abs=1e-12)
        # Single-qubit Paulis have zero expectation on the code space
        assert qsim.fidelity(out, psi) == pytest.approx(1 - 3 * p / 4, abs=1e-12)

    def test_uniform_pauli_error_weights(self):
        channel = KrausChannel.uniform_pauli_error(0.002, (0, 1))
        assert len(channel.operators) == 16
        weights = sorted(float(np.trace(k.conj().T @ k).real) / 4 for k in channel.operators)
        assert weights[-1] == pytest.approx(0.998)
        assert_allclose(weights[:-1], [0.002 / 15] * 15)

    def test_dephasing_kills_coherences(self):
        plus = Statevector.product((1 / math.sqrt(2), 1 / math.sqrt(2)))
        out = qsim.apply_channel(plus.to_density(), KrausChannel.dephasing((0,)))
        assert_allclose(out.entries, np.eye(2) / 2, atol=1e-15)

    def test_partial_trace_of_product(self):
        state = Statevector.product((0.6, 0.8), (1.0, 0.0), (0.0, 1.0))
        reduced = qsim.partial_trace(state.to_density(), [2, 0])
        expected = np.outer(np.kron([0.0, 1.0], [0.6, 0.8]), np.kron([0.0, 1.0], [0.6, 0.8]))
        assert_allclose(reduced.entries, expected, atol=1e-15)


class TestFidelity:
    def test_same_state(self):
        zero = code5.logical_state(1.0, 0.0)
        assert qsim.fidelity(zero, zero) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_logical_states(self):
        assert qsim.fidelity(code5.logical_state(1.0, 0.0), code5.logical_state(0.0, 1.0)) == pytest.approx(0.0, abs=1e-15)

    def test_global_phase_is_ignored(self):
        zero = code5.logical_state(1.0, 0.0)
        phased = Statevector(1j * zero.amplitudes)
        assert qsim.fidelity(zero, phased) == pytest.approx(1.0, abs=1e-12)

    def test_pure_against_white_noise(self):
        psi = code5.logical_state(1.0, 0.0)
        p = 0.1
        noisy = DensityMatrix((1 - p) * psi.to_density().entries + p * np.eye(32) / 32)
        assert qsim.fidelity(psi, noisy) == pytest.approx((1 - p) + p / 32, abs=1e-12)

    def test_mixed_states_use_uhlmann(self):
        a = DensityMatrix(np.diag([0.5, 0.5]))
        b = DensityMatrix(np.diag([0.9, 0.1]))
        expected = (math.sqrt(0.45) + math.sqrt(0.05)) ** 2
        assert qsim.fidelity(a, b) == pytest.approx(expected, abs=1e-12)

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            qsim.fidelity(Statevector.basis("0"), Statevector.basis("00"))


class TestSampling:
    def test_eigenstate_gives_constant_outcome(self):
        rng = np.random.default_rng(1)
        out = qsim.sample_product_outcomes(Statevector.basis("0"), [single_qubit("Z", 0, 1)], 500, rng)
        assert out.shape == (500, 1)
        assert np.all(out == 1)

    def test_bell_pair_zz_correlation(self):
        rng = np.random.default_rng(2)
        z0 = Observable(matrix=PAULI_MATRICES["Z"], targets=(0,))
        z1 = Observable(matrix=PAULI_MATRICES["Z"], targets=(1,))
        out = qsim.sample_product_outcomes(bell_pair(), [z0, z1], 1000, rng)
        assert np.all(out.prod(axis=1) == 1)
        # Each marginal is unbiased, so both signs occur
        assert set(out[:, 0].tolist()) == {-1, 1}

    def test_density_matrix_input(self):
        rng = np.random.default_rng(3)
        out = qsim.sample_product_outcomes(
            Statevector.basis("1").to_density(), [Observable(matrix=PAULI_MATRICES["Z"], targets=(0,))], 50, rng
        )
        assert np.all(out == -1)

    def test_same_seed_same_outcomes(self):
        z0 = Observable(matrix=PAULI_MATRICES["X"], targets=(0,))
        a = qsim.sample_product_outcomes(bell_pair(), [z0], 200, np.random.default_rng(11))
        b = qsim.sample_product_outcomes(bell_pair(), [z0], 200, np.random.default_rng(11))
        assert np.array_equal(a, b)

    def test_overlapping_supports(self):
        z0 = Observable(matrix=PAULI_MATRICES["Z"], targets=(0,))
        with pytest.raises(OverlappingSupportError):
            qsim.sample_product_outcomes(bell_pair(), [z0, z0], 10, np.random.default_rng(0))

    def test_non_dichotomic_observable(self):
        half_z = Observable(matrix=0.5 * PAULI_MATRICES["Z"], targets=(0,))
        with pytest.raises(NotDichotomicError):
            qsim.sample_product_outcomes(bell_pair(), [half_z], 10, np.random.default_rng(0))

    @pytest.mark.slow
    def test_i5_correlators_match_exact_values(self):
        rng = np.random.default_rng(42)
        shots = 100_000
        state = code5.logical_state(1.0, 0.0)
        strategy = bell.optimal_strategy("i5")
        for term in bell.builtin_functional("i5").terms:
            observables = [
                Observable(matrix=strategy.observable(j, term.choices[j]).matrix, targets=(j,))
                for j in term.active_parties
            ]
            exact = qsim.expectation(state, bell.term_operator(term, strategy))
            products = qsim.sample_product_outcomes(state, observables, shots, rng).prod(axis=1, dtype=np.int64)
            stderr = math.sqrt(max(0.0, 1.0 - exact ** 2) / shots)
            assert abs(products.mean() - exact) <= 5 * stderr + 1e-12
