from typing import Any, Dict, Optional, Sequence, Tuple

from qsgps.constants import CODE_QUBITS
from qsgps.models.base import Model
from qsgps.models.circuit import Circuit, Gate
from qsgps.models.operators import PauliString


class PauliError(Model):
    """Single-qubit Pauli error; qubit is 1-based as in the code's labelling."""

    def __init__(self, qubit: int, letter: str):
        super().__init__("pauli_error")
        letter = str(letter).upper()
        if letter not in ("X", "Y", "Z"):
            raise ValueError(f"Error letter must be X, Y or Z, got {letter!r}")
        if not 1 <= int(qubit) <= CODE_QUBITS:
            raise ValueError(f"Error qubit must be in 1..{CODE_QUBITS}, got {qubit}")
        self.qubit = int(qubit)
        self.letter = letter

    @property
    def index(self) -> int:
        return self.qubit - 1

    def to_pauli(self, num_qubits: int = CODE_QUBITS) -> PauliString:
        return PauliString.single(num_qubits, self.index, self.letter)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliError):
            return NotImplemented
        return (self.qubit, self.letter) == (other.qubit, other.letter)

    def __hash__(self) -> int:
        return hash((self.qubit, self.letter))

    def label(self) -> str:
        return f"{self.letter}{self.qubit}"

    def to_dict(self) -> Dict[str, Any]:
        return {"qubit": self.qubit, "letter": self.letter}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PauliError":
        return cls(data["qubit"], data["letter"])

    def __str__(self) -> str:
        return f"PauliError({self.label()})"


class Syndrome(Model):
    """Four bits; bit k is 1 iff the error anticommutes with generator k+1."""

    def __init__(self, bits: Sequence[int]):
        super().__init__("syndrome")
        bits = tuple(int(b) for b in bits)
        if len(bits) != 4 or any(b not in (0, 1) for b in bits):
            raise ValueError(f"Syndrome needs four bits in {{0,1}}, got {bits}")
        self.bits: Tuple[int, ...] = bits

    @property
    def is_trivial(self) -> bool:
        return not any(self.bits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Syndrome):
            return self.bits == other.bits
        if isinstance(other, tuple):
            return self.bits == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.bits)

    def label(self) -> str:
        return "".join(str(b) for b in self.bits)

    def to_dict(self) -> Dict[str, Any]:
        return {"bits": list(self.bits)}

    def __str__(self) -> str:
        return f"Syndrome({self.label()})"


class EncodingCircuit(Circuit):
    """
    Encoder circuit together with its input register and output Pauli frame.

    ``input_bits`` are the ancilla preparations in qubit order with the data
    qubit skipped. ``pauli_frame`` is a classical relabelling applied to the
    output; it is not a gate and does not enter any cost accounting.
    """

    def __init__(
        self,
        num_qubits: int,
        gates: Sequence[Gate],
        moments: Optional[Sequence[int]],
        input_bits: Sequence[int],
        data_qubit: int,
        pauli_frame: Optional[PauliString] = None,
    ):
        super().__init__(num_qubits, gates, moments)
        self.model_type = "encoding_circuit"
        if len(input_bits) != num_qubits - 1:
            raise ValueError(f"Expected {num_qubits - 1} ancilla bits, got {len(input_bits)}")
        if not 0 <= data_qubit < num_qubits:
            raise ValueError(f"Data qubit {data_qubit} outside register")
        self.input_bits = tuple(int(b) for b in input_bits)
        self.data_qubit = int(data_qubit)
        self.pauli_frame = pauli_frame

    def as_circuit(self) -> Circuit:
        return Circuit(self.num_qubits, self.gates, self.moments)

    def with_frame(self, frame: Optional[PauliString]) -> "EncodingCircuit":
        return EncodingCircuit(self.num_qubits, self.gates, self.moments, self.input_bits, self.data_qubit, frame)

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data.update({
            "input_bits": list(self.input_bits),
            "data_qubit": self.data_qubit,
            "pauli_frame": self.pauli_frame.label() if self.pauli_frame is not None else None,
        })
        return data


class StabilizerSet(Model):
    """Four commuting, involutive Pauli generators on five qubits."""

    def __init__(self, generators: Sequence[PauliString]):
        super().__init__("stabilizer_set")
        generators = tuple(generators)
        if len(generators) != 4 or any(g.num_qubits != CODE_QUBITS for g in generators):
            raise ValueError(f"Expected four {CODE_QUBITS}-qubit generators, got {[str(g) for g in generators]}")
        for i, a in enumerate(generators):
            for b in generators[i + 1:]:
                if a.anticommutes_with(b):
                    raise ValueError(f"Generators {a.label()} and {b.label()} anticommute")
        self.generators: Tuple[PauliString, ...] = generators

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, index: int) -> PauliString:
        return self.generators[index]

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> Dict[str, Any]:
        return {"generators": [g.label() for g in self.generators]}


class LogicalBasis(Model):
    """Orthonormal pair spanning the code space."""

    def __init__(self, zero_l: Any, one_l: Any):
        super().__init__("logical_basis")
        overlap = abs(complex((zero_l.amplitudes.conj() * one_l.amplitudes).sum()))
        if overlap > 1e-12:
            raise ValueError(f"Logical states overlap by {overlap}")
        self.zero_l = zero_l
        self.one_l = one_l

    def to_dict(self) -> Dict[str, Any]:
        return {"zero_L": self.zero_l.to_dict(), "one_L": self.one_l.to_dict()}


class CorrectionRecord(Model):
    """
    Result of syndrome measurement and recovery.

    Unpacks as (state, syndrome, correction). ``miscorrected`` is only set
    when a reference state was supplied.
    """

    def __init__(self, state: Any, syndrome: Syndrome, correction: Optional[PauliError], miscorrected: Optional[bool] = None):
        super().__init__("correction_record")
        self.state = state
        self.syndrome = syndrome
        self.correction = correction
        self.miscorrected = miscorrected

    def __iter__(self):
        return iter((self.state, self.syndrome, self.correction))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "syndrome": self.syndrome.to_dict()["bits"],
            "correction": self.correction.to_dict() if self.correction is not None else None,
            "miscorrected": self.miscorrected,
        }

    def __str__(self) -> str:
        fix = self.correction.label() if self.correction is not None else "none"
        return f"CorrectionRecord(syndrome={self.syndrome.label()}, correction={fix})"
