"""
The five-qubit [[5,1,3]] code.

The logical amplitude tables below are the reference definition of the
code space; the encoder circuit is checked against them. Generators are
S1 = X1 Z2 Z3 X4, S2 = X2 Z3 Z4 X5, S3 = X3 Z4 Z5 X1, S4 = X4 Z5 Z1 X2.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from python_debug import debug_trace

from qsgps import qsim
from qsgps.constants import CODE_QUBITS, NORM_ATOL
from qsgps.errors import DimensionMismatchError, NotNormalizedError
from qsgps.models.circuit import Circuit, Gate
from qsgps.models.code import (
    CorrectionRecord,
    EncodingCircuit,
    LogicalBasis,
    PauliError,
    StabilizerSet,
    Syndrome,
)
from qsgps.models.hardware import NoiseModel
from qsgps.models.operators import PAULI_MATRICES, PauliString, pauli_words
from qsgps.models.state import DensityMatrix, Statevector

logger = logging.getLogger('qsgps.code5')

State = Union[Statevector, DensityMatrix]

GENERATOR_LETTERS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")

_ZERO_L_TABLE = {
    "00000": +1, "10010": +1, "01001": +1, "10100": +1,
    "01010": +1, "11011": -1, "00110": -1, "11000": -1,
    "11101": -1, "00011": -1, "11110": -1, "01111": -1,
    "10001": -1, "01100": -1, "10111": -1, "00101": +1,
}

_ONE_L_TABLE = {
    "11111": +1, "01101": +1, "10110": +1, "01011": +1,
    "10101": +1, "00100": -1, "11001": -1, "00111": -1,
    "00010": -1, "11100": -1, "00001": -1, "10000": -1,
    "01110": -1, "10011": -1, "01000": -1, "11010": +1,
}

FRAME_ATOL = 1e-10


@lru_cache(maxsize=None)
def stabilizers() -> StabilizerSet:
    """The four code generators S1..S4."""
    return StabilizerSet([PauliString(letters) for letters in GENERATOR_LETTERS])


@lru_cache(maxsize=None)
def logical_basis() -> LogicalBasis:
    """|0_L> and |1_L> built from the amplitude tables."""
    zero = Statevector.from_bitstrings({bits: s / 4.0 for bits, s in _ZERO_L_TABLE.items()})
    one = Statevector.from_bitstrings({bits: s / 4.0 for bits, s in _ONE_L_TABLE.items()})
    return LogicalBasis(zero, one)


def logical_operators() -> Tuple[PauliString, PauliString]:
    """(X_L, Z_L) = (XXXXX, ZZZZZ)."""
    return PauliString("XXXXX"), PauliString("ZZZZZ")


def logical_state(alpha: complex, beta: complex) -> Statevector:
    """
    alpha |0_L> + beta |1_L> from the amplitude tables.

    Raises:
        NotNormalizedError: If |alpha|^2 + |beta|^2 differs from 1 by more than 1e-10
    """
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > 1e-10:
        raise NotNormalizedError(f"|alpha|^2 + |beta|^2 = {norm}, expected 1")
    basis = logical_basis()
    amps = alpha * basis.zero_l.amplitudes + beta * basis.one_l.amplitudes
    # renormalize within the 1e-10 input slack so the result meets the 1e-12 norm check
    return Statevector(amps / np.sqrt(norm))


def drawn_circuit() -> EncodingCircuit:
    """
    Literal transcription of the drawn encoder.

    Ten drawn columns on qubits a..e (indices 0..4); qubit 0 starts in |1>,
    qubits 1..3 in |0>, the data qubit is 4. No output frame is attached.
    """
    columns = [
        [Gate.cnot(4, 0)],
        [Gate.h(0), Gate.h(1)],
        [Gate.cnot(1, 4)],
        [Gate.cnot(1, 2)],
        [Gate.cnot(0, 2)],
        [Gate.cnot(4, 3)],
        [Gate.cnot(0, 4)],
        [Gate.h(2), Gate.h(3)],
        [Gate.cnot(2, 4)],
        [Gate.cnot(3, 4)],
    ]
    drawn = Circuit.from_moments(CODE_QUBITS, columns)
    return EncodingCircuit(CODE_QUBITS, drawn.gates, drawn.moments, input_bits=(1, 0, 0, 0), data_qubit=4)


def input_state(enc: EncodingCircuit, alpha: complex, beta: complex) -> Statevector:
    """Product input register: ancillas as prepared, data qubit alpha|0> + beta|1>."""
    factors = []
    bits = iter(enc.input_bits)
    for q in range(enc.num_qubits):
        if q == enc.data_qubit:
            factors.append((alpha, beta))
        else:
            factors.append((0.0, 1.0) if next(bits) else (1.0, 0.0))
    return Statevector.product(*factors)


def _frame_probes() -> List[Tuple[complex, complex]]:
    r = 1.0 / np.sqrt(2.0)
    return [(1.0, 0.0), (0.0, 1.0), (r, r), (r, 1j * r)]


def find_pauli_frame(enc: EncodingCircuit) -> Optional[PauliString]:
    """
    Lowest-weight Pauli F with F U |in(alpha, beta)> = alpha|0_L> + beta|1_L>
    up to one global phase.

    Probing |0>, |1>, |+> and |+i> fixes the frame for every input: the first
    two pin each logical component, the superpositions pin their relative phase.
    """
    outputs = [qsim.apply_circuit(input_state(enc, a, b), enc) for a, b in _frame_probes()]
    targets = [logical_state(a, b) for a, b in _frame_probes()]
    words = sorted(pauli_words(enc.num_qubits), key=lambda w: (sum(ch != "I" for ch in w), w))
    for word in words:
        frame = PauliString(word)
        if all(
            qsim.fidelity(qsim.apply_pauli(out, frame), target) >= 1.0 - FRAME_ATOL
            for out, target in zip(outputs, targets)
        ):
            logger.debug(f"Encoder output frame found: {frame.label()}")
            return frame
    return None


@lru_cache(maxsize=None)
def encoding_circuit() -> EncodingCircuit:
    """
    The drawn encoder with the output frame that makes it reproduce the
    logical tables.

    The literal drawing leaves the register in a nontrivial syndrome
    subspace; the frame found by exhaustive search undoes it classically.
    Gate census is unchanged: four Hadamards and eight CNOTs.
    """
    literal = drawn_circuit()
    frame = find_pauli_frame(literal)
    if frame is None:
        raise RuntimeError("No Pauli frame maps the drawn encoder onto the logical tables")
    if frame.weight:
        logger.info(f"Drawn encoder differs from the logical tables by frame {frame.label()}")
    return literal.with_frame(frame)


def encode(alpha: complex, beta: complex, enc: Optional[EncodingCircuit] = None) -> Statevector:
    """Run the encoder on alpha|0> + beta|1> and apply its output frame."""
    enc = enc if enc is not None else encoding_circuit()
    out = qsim.apply_circuit(input_state(enc, alpha, beta), enc)
    if enc.pauli_frame is not None:
        out = qsim.apply_pauli(out, enc.pauli_frame)
    return out


@debug_trace()
def encode_density(
    alpha: complex,
    beta: complex,
    noise: Optional[NoiseModel] = None,
    enc: Optional[EncodingCircuit] = None,
) -> DensityMatrix:
    """Density-matrix encoding with per-gate error channels, then the frame."""
    enc = enc if enc is not None else encoding_circuit()
    rho = input_state(enc, alpha, beta).to_density()
    out = qsim.apply_circuit_density(rho, enc, noise)
    if enc.pauli_frame is not None:
        out = qsim.apply_pauli(out, enc.pauli_frame)
    return out


def _require_code_register(state: State) -> None:
    if state.num_qubits != CODE_QUBITS:
        raise DimensionMismatchError(f"Expected {CODE_QUBITS}-qubit state, got {state.num_qubits}")


def stabilizer_expectations(state: State) -> Tuple[float, float, float, float]:
    """(<S1>, <S2>, <S3>, <S4>)."""
    _require_code_register(state)
    return tuple(qsim.expectation(state, g) for g in stabilizers())


def syndrome_of_pauli(pauli: PauliString) -> Syndrome:
    """Anticommutation pattern of any 5-qubit Pauli with the generators."""
    return Syndrome([int(pauli.anticommutes_with(g)) for g in stabilizers()])


def syndrome_of_error(err: PauliError) -> Syndrome:
    return syndrome_of_pauli(err.to_pauli())


def single_qubit_errors() -> List[PauliError]:
    """The 15 weight-one Paulis, qubit-major."""
    return [PauliError(q, letter) for q in range(1, CODE_QUBITS + 1) for letter in "XYZ"]


@lru_cache(maxsize=None)
def _decoder_table() -> Dict[Tuple[int, ...], PauliError]:
    table: Dict[Tuple[int, ...], PauliError] = {}
    for err in single_qubit_errors():
        bits = syndrome_of_error(err).bits
        if bits in table:
            raise RuntimeError(f"Errors {table[bits].label()} and {err.label()} share syndrome {bits}")
        table[bits] = err
    return table


def decode_syndrome(syn: Syndrome) -> Optional[PauliError]:
    """Weight-one error with this syndrome, or None for the trivial syndrome."""
    if syn.is_trivial:
        return None
    return _decoder_table()[syn.bits]


@lru_cache(maxsize=None)
def _syndrome_projector(bits: Tuple[int, ...]) -> np.ndarray:
    dim = 1 << CODE_QUBITS
    proj = np.eye(dim, dtype=complex)
    for bit, gen in zip(bits, stabilizers()):
        proj = proj @ ((np.eye(dim) + (-1) ** bit * gen.matrix()) / 2.0)
    return proj


def measure_and_correct(
    dm: DensityMatrix,
    rng: np.random.Generator,
    reference: Optional[State] = None,
) -> CorrectionRecord:
    """
    Measure S1..S4 in sequence, then apply the decoded correction.

    Args:
        dm: Five-qubit state
        rng: Generator drawing the measurement outcomes
        reference: Optional intended state; sets ``miscorrected`` on the record

    Returns:
        CorrectionRecord unpacking as (state, syndrome, correction)
    """
    _require_code_register(dm)
    dim = 1 << CODE_QUBITS
    rho = np.array(dm.entries)
    bits = []
    for gen in stabilizers():
        matrix = gen.matrix()
        minus = (np.eye(dim) - matrix) / 2.0
        p_minus = min(1.0, max(0.0, float(np.trace(minus @ rho).real)))
        bit = int(rng.random() < p_minus)
        proj = minus if bit else (np.eye(dim) + matrix) / 2.0
        rho = proj @ rho @ proj
        rho = rho / np.trace(rho).real
        bits.append(bit)
    syndrome = Syndrome(bits)
    correction = decode_syndrome(syndrome)
    if correction is not None:
        rho = qsim.conjugate(rho, PAULI_MATRICES[correction.letter], (correction.index,))
    state = DensityMatrix((rho + rho.conj().T) / 2.0)
    logger.debug(f"Syndrome {syndrome.label()} -> correction {correction.label() if correction else 'none'}")
    miscorrected = None
    if reference is not None:
        miscorrected = qsim.fidelity(state, reference) < 1.0 - FRAME_ATOL
    return CorrectionRecord(state, syndrome, correction, miscorrected)


def syndrome_distribution(dm: DensityMatrix) -> Dict[Syndrome, float]:
    """Probability of each syndrome with non-negligible weight."""
    _require_code_register(dm)
    out: Dict[Syndrome, float] = {}
    for bits in itertools.product((0, 1), repeat=4):
        p = float(np.trace(_syndrome_projector(bits) @ dm.entries).real)
        if p > 1e-12:
            out[Syndrome(bits)] = p
    return out


def recover(dm: DensityMatrix) -> DensityMatrix:
    """Syndrome measurement and correction averaged over outcomes (exact channel)."""
    _require_code_register(dm)
    total = np.zeros_like(dm.entries)
    for bits in itertools.product((0, 1), repeat=4):
        proj = _syndrome_projector(bits)
        branch = proj @ dm.entries @ proj
        correction = decode_syndrome(Syndrome(bits))
        if correction is not None:
            branch = qsim.conjugate(branch, PAULI_MATRICES[correction.letter], (correction.index,))
        total += branch
    return DensityMatrix((total + total.conj().T) / 2.0)


def project_code_space(dm: DensityMatrix) -> DensityMatrix:
    """Normalized projection onto the +1 eigenspace of all generators."""
    _require_code_register(dm)
    proj = _syndrome_projector((0, 0, 0, 0))
    rho = proj @ dm.entries @ proj
    weight = float(np.trace(rho).real)
    if weight < NORM_ATOL:
        raise ValueError("State has no weight in the code space")
    rho = rho / weight
    return DensityMatrix((rho + rho.conj().T) / 2.0)
