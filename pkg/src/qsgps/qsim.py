"""
Dense simulation engine for small qubit registers.

States are stored as full amplitude vectors or density matrices. Gates and
Kraus operators are applied by reshaping the state into a rank-n tensor of
qubit axes and contracting the operator against the target axes, so no
operator is ever expanded to the full register unless an expectation value
needs it.
"""

import itertools
import logging
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from qsgps.constants import DICHOTOMIC_ATOL, HERMITIAN_ATOL, IMAG_ATOL
from qsgps.errors import (
    DimensionMismatchError,
    NotDichotomicError,
    NotHermitianError,
    OverlappingSupportError,
)
from qsgps.models.circuit import Circuit, Gate
from qsgps.models.hardware import NoiseModel
from qsgps.models.operators import PAULI_MATRICES, KrausChannel, Observable, PauliString
from qsgps.models.state import DensityMatrix, Statevector

logger = logging.getLogger('qsgps.qsim')

State = Union[Statevector, DensityMatrix]


def _contract(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to k axes of a qubit tensor."""
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_to_vector(amplitudes: np.ndarray, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return matrix (on targets) times the amplitude vector."""
    n = amplitudes.size.bit_length() - 1
    tensor = amplitudes.reshape((2,) * n)
    return _contract(tensor, matrix, targets).reshape(-1)


def apply_left(rho: np.ndarray, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return K rho for K acting on targets."""
    n = rho.shape[0].bit_length() - 1
    tensor = rho.reshape((2,) * (2 * n))
    return _contract(tensor, matrix, targets).reshape(rho.shape)


def conjugate(rho: np.ndarray, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return K rho K^dagger for K acting on targets."""
    n = rho.shape[0].bit_length() - 1
    tensor = rho.reshape((2,) * (2 * n))
    tensor = _contract(tensor, matrix, targets)
    tensor = _contract(tensor, matrix.conj(), [n + t for t in targets])
    return tensor.reshape(rho.shape)


def embed(matrix: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Expand an operator on some qubits to the full register."""
    dim = 1 << num_qubits
    if tuple(targets) == tuple(range(num_qubits)):
        return np.asarray(matrix, dtype=complex)
    tensor = np.eye(dim, dtype=complex).reshape((2,) * num_qubits + (dim,))
    return _contract(tensor, matrix, targets).reshape(dim, dim)


def _check_targets(targets: Sequence[int], num_qubits: int) -> None:
    for q in targets:
        if not 0 <= q < num_qubits:
            raise DimensionMismatchError(f"Qubit {q} outside a {num_qubits}-qubit register")


def apply_circuit(state: Statevector, circuit: Circuit) -> Statevector:
    """
    Run a circuit on a pure state.

    Args:
        state: Input statevector
        circuit: Circuit on the same number of qubits

    Returns:
        The output statevector U_circuit |state>

    Raises:
        DimensionMismatchError: If register sizes differ
    """
    if state.num_qubits != circuit.num_qubits:
        raise DimensionMismatchError(
            f"Circuit acts on {circuit.num_qubits} qubits, state has {state.num_qubits}"
        )
    amps = np.array(state.amplitudes)
    for gate in circuit.gates:
        amps = apply_to_vector(amps, gate.matrix, gate.targets)
    return Statevector(amps)


def apply_circuit_density(dm: DensityMatrix, circuit: Circuit, noise: Optional[NoiseModel] = None) -> DensityMatrix:
    """
    Run a circuit on a density matrix, optionally followed gate by gate by
    the noise model's error channel on the gate's support.
    """
    if dm.num_qubits != circuit.num_qubits:
        raise DimensionMismatchError(
            f"Circuit acts on {circuit.num_qubits} qubits, state has {dm.num_qubits}"
        )
    rho = np.array(dm.entries)
    for gate in circuit.gates:
        rho = conjugate(rho, gate.matrix, gate.targets)
        channel = noise.channel_for(gate) if noise is not None else None
        if channel is not None:
            rho = _kraus_sum(rho, channel)
    return DensityMatrix(_hermitize(rho))


def apply_gate(state: State, gate: Gate) -> State:
    """Apply one gate to either state representation."""
    _check_targets(gate.targets, state.num_qubits)
    if isinstance(state, Statevector):
        return Statevector(apply_to_vector(np.array(state.amplitudes), gate.matrix, gate.targets))
    return DensityMatrix(_hermitize(conjugate(np.array(state.entries), gate.matrix, gate.targets)))


def apply_pauli(state: State, pauli: PauliString) -> State:
    """Apply a Pauli string (sign included) to either state representation."""
    if pauli.num_qubits != state.num_qubits:
        raise DimensionMismatchError(f"Pauli on {pauli.num_qubits} qubits, state has {state.num_qubits}")
    if isinstance(state, Statevector):
        amps = np.array(state.amplitudes)
        for q in pauli.support:
            amps = apply_to_vector(amps, PAULI_MATRICES[pauli.letters[q]], (q,))
        return Statevector(pauli.sign * amps)
    rho = np.array(state.entries)
    for q in pauli.support:
        rho = conjugate(rho, PAULI_MATRICES[pauli.letters[q]], (q,))
    return DensityMatrix(rho)


def _as_matrix(obs: Union[Observable, PauliString, np.ndarray], num_qubits: int) -> np.ndarray:
    if isinstance(obs, PauliString):
        obs = Observable.from_pauli(obs)
    if isinstance(obs, Observable):
        _check_targets(obs.targets, num_qubits)
        return embed(obs.matrix(), obs.targets, num_qubits)
    matrix = np.asarray(obs, dtype=complex)
    if matrix.shape != (1 << num_qubits, 1 << num_qubits):
        raise DimensionMismatchError(f"Operator shape {matrix.shape} does not fit {num_qubits} qubits")
    if not np.allclose(matrix, matrix.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
        raise NotHermitianError("Observable is not Hermitian")
    return matrix


def expectation(state: State, obs: Union[Observable, PauliString, np.ndarray]) -> float:
    """
    Expectation value of a Hermitian observable.

    Args:
        state: Statevector or DensityMatrix
        obs: Observable, PauliString or dense Hermitian matrix on the register

    Returns:
        The real expectation value

    Raises:
        NotHermitianError: If a dense operator is not Hermitian
        DimensionMismatchError: If the operator does not fit the register
    """
    matrix = _as_matrix(obs, state.num_qubits)
    if isinstance(state, Statevector):
        value = np.vdot(state.amplitudes, matrix @ state.amplitudes)
    else:
        value = np.trace(matrix @ state.entries)
    if abs(value.imag) > IMAG_ATOL:
        raise NotHermitianError(f"Expectation has imaginary part {value.imag}")
    return float(value.real)


def _kraus_sum(rho: np.ndarray, channel: KrausChannel) -> np.ndarray:
    out = np.zeros_like(rho)
    for op in channel.operators:
        out += conjugate(rho, op, channel.targets)
    return out


def _hermitize(rho: np.ndarray) -> np.ndarray:
    return (rho + rho.conj().T) / 2.0


def apply_channel(dm: DensityMatrix, ch: KrausChannel) -> DensityMatrix:
    """
    Apply a Kraus channel.

    Completeness is enforced when the KrausChannel is built, so an
    incomplete set never reaches this function.
    """
    _check_targets(ch.targets, dm.num_qubits)
    return DensityMatrix(_hermitize(_kraus_sum(np.array(dm.entries), ch)))


def partial_trace(dm: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the kept qubits, in the order given."""
    n = dm.num_qubits
    keep = list(keep)
    _check_targets(keep, n)
    traced = [q for q in range(n) if q not in keep]
    tensor = dm.entries.reshape((2,) * (2 * n))
    order = keep + traced + [n + q for q in keep] + [n + q for q in traced]
    dk, dt = 1 << len(keep), 1 << len(traced)
    tensor = tensor.transpose(order).reshape(dk, dt, dk, dt)
    return DensityMatrix(np.einsum("ajbj->ab", tensor))


def depolarize(dm: DensityMatrix, p: float, targets: Sequence[int]) -> DensityMatrix:
    """
    rho -> (1-p) rho + p (Tr_targets rho) x I/2^k.

    Exact without enumerating 4^k Kraus operators.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    n = dm.num_qubits
    targets = list(targets)
    _check_targets(targets, n)
    keep = [q for q in range(n) if q not in targets]
    k, m = len(targets), len(keep)
    mixed = (np.eye(1 << k, dtype=complex) / (1 << k)).reshape((2,) * (2 * k))
    if m:
        reduced = partial_trace(dm, keep).entries.reshape((2,) * (2 * m))
        joint = np.multiply.outer(reduced, mixed)
    else:
        joint = mixed
    row = [keep.index(q) if q in keep else 2 * m + targets.index(q) for q in range(n)]
    col = [m + keep.index(q) if q in keep else 2 * m + k + targets.index(q) for q in range(n)]
    replaced = joint.transpose(row + col).reshape(dm.dim, dm.dim)
    return DensityMatrix(_hermitize((1.0 - p) * dm.entries + p * replaced))


def fidelity(a: State, b: State) -> float:
    """
    Uhlmann fidelity, squared convention: |<a|b>|^2 for pure states.

    Returns:
        A value in [0, 1]; 1 iff the states agree up to global phase
    """
    if a.num_qubits != b.num_qubits:
        raise DimensionMismatchError(f"Fidelity between {a.num_qubits}- and {b.num_qubits}-qubit states")
    if isinstance(a, Statevector) and isinstance(b, Statevector):
        value = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    elif isinstance(a, Statevector):
        value = np.vdot(a.amplitudes, b.entries @ a.amplitudes).real
    elif isinstance(b, Statevector):
        value = np.vdot(b.amplitudes, a.entries @ b.amplitudes).real
    else:
        evals, evecs = np.linalg.eigh(a.entries)
        root = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
        inner = np.linalg.eigvalsh(root @ b.entries @ root)
        value = float(np.sum(np.sqrt(np.clip(inner, 0.0, None)))) ** 2
    return float(min(1.0, max(0.0, value)))


def sample_product_outcomes(
    state: State,
    observables: Sequence[Observable],
    shots: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Sample joint outcomes of dichotomic observables on disjoint qubits.

    Each observable O splits into spectral projectors (I +- O)/2. The joint
    distribution over sign patterns is computed exactly and then sampled.

    Args:
        state: Statevector or DensityMatrix
        observables: One dichotomic observable per party
        shots: Number of joint outcomes to draw
        rng: Explicit generator; results are reproducible given its seed

    Returns:
        Integer array of shape (shots, parties) with entries in {-1, +1}

    Raises:
        NotDichotomicError: If an observable does not square to identity
        OverlappingSupportError: If two observables share a qubit
    """
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    seen: set = set()
    projectors: List[tuple] = []
    for obs in observables:
        _check_targets(obs.targets, state.num_qubits)
        if seen & set(obs.targets):
            raise OverlappingSupportError(f"Observable targets {obs.targets} overlap another party")
        seen |= set(obs.targets)
        if not obs.is_dichotomic(DICHOTOMIC_ATOL):
            raise NotDichotomicError(f"Observable on {obs.targets} does not square to identity")
        eye = np.eye(1 << obs.num_qubits, dtype=complex)
        m = obs.matrix()
        projectors.append(({1: (eye + m) / 2.0, -1: (eye - m) / 2.0}, obs.targets))

    patterns = list(itertools.product((1, -1), repeat=len(projectors)))
    probs = np.empty(len(patterns))
    for i, pattern in enumerate(patterns):
        if isinstance(state, Statevector):
            vec = np.array(state.amplitudes)
            for sign, (proj, targets) in zip(pattern, projectors):
                vec = apply_to_vector(vec, proj[sign], targets)
            probs[i] = float(np.vdot(vec, vec).real)
        else:
            rho = np.array(state.entries)
            for sign, (proj, targets) in zip(pattern, projectors):
                rho = apply_left(rho, proj[sign], targets)
            probs[i] = float(np.trace(rho).real)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    logger.debug(f"Joint outcome distribution over {len(patterns)} patterns, max p={probs.max():.6f}")
    draws = rng.choice(len(patterns), size=shots, p=probs)
    return np.asarray(patterns, dtype=np.int8)[draws]
