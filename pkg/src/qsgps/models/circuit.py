from collections import Counter
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from qsgps.constants import UNITARY_ATOL
from qsgps.errors import NotUnitaryError
from qsgps.models.base import Model, complex_to_dict, frozen
from qsgps.models.operators import PAULI_MATRICES


class GateKind(str, Enum):
    HADAMARD = "H"
    PAULI_X = "X"
    PAULI_Y = "Y"
    PAULI_Z = "Z"
    CNOT = "CNOT"
    UNITARY = "U"


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)

# Basis order |control target>, control most significant
_CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)

_FIXED_MATRICES = {
    GateKind.HADAMARD: _HADAMARD,
    GateKind.PAULI_X: PAULI_MATRICES["X"],
    GateKind.PAULI_Y: PAULI_MATRICES["Y"],
    GateKind.PAULI_Z: PAULI_MATRICES["Z"],
    GateKind.CNOT: _CNOT,
}


class Gate(Model):
    """
    A built-in gate or a custom single-qubit unitary.

    CNOT targets are (control, target); every other kind has one target.
    """

    def __init__(self, kind: GateKind, targets: Sequence[int], matrix: Optional[Any] = None):
        super().__init__("gate")
        self.kind = GateKind(kind)
        self.targets: Tuple[int, ...] = tuple(int(t) for t in targets)
        arity = 2 if self.kind is GateKind.CNOT else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind.value} expects {arity} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"CNOT control and target must differ, got {self.targets}")
        if self.kind is GateKind.UNITARY:
            if matrix is None:
                raise ValueError("Custom unitary gate requires a matrix")
            u = np.asarray(matrix, dtype=complex)
            if u.shape != (2, 2):
                raise NotUnitaryError(f"Custom gate must be 2x2, got shape {u.shape}")
            if not np.allclose(u.conj().T @ u, np.eye(2), atol=UNITARY_ATOL, rtol=0.0):
                raise NotUnitaryError("Custom gate matrix is not unitary")
            self._matrix = frozen(u)
        else:
            if matrix is not None:
                raise ValueError(f"{self.kind.value} gate does not take a matrix")
            self._matrix = _FIXED_MATRICES[self.kind]

    @classmethod
    def h(cls, qubit: int) -> "Gate":
        return cls(GateKind.HADAMARD, (qubit,))

    @classmethod
    def x(cls, qubit: int) -> "Gate":
        return cls(GateKind.PAULI_X, (qubit,))

    @classmethod
    def y(cls, qubit: int) -> "Gate":
        return cls(GateKind.PAULI_Y, (qubit,))

    @classmethod
    def z(cls, qubit: int) -> "Gate":
        return cls(GateKind.PAULI_Z, (qubit,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def unitary(cls, qubit: int, matrix: Any) -> "Gate":
        return cls(GateKind.UNITARY, (qubit,), matrix)

    @property
    def arity(self) -> int:
        return len(self.targets)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "targets": list(self.targets)}
        if self.kind is GateKind.UNITARY:
            data["matrix"] = complex_to_dict(self._matrix)
        return data

    def __str__(self) -> str:
        return f"{self.kind.value}{list(self.targets)}"


class Circuit(Model):
    """
    Ordered gate list on a fixed register.

    ``moments`` optionally records, per gate, the drawn column it belongs
    to. Columns are non-decreasing along the gate list; depth accounting may
    use them as scheduling barriers.
    """

    def __init__(self, num_qubits: int, gates: Sequence[Gate] = (), moments: Optional[Sequence[int]] = None):
        super().__init__("circuit")
        if num_qubits < 1:
            raise ValueError(f"Circuit needs at least one qubit, got {num_qubits}")
        self.num_qubits = int(num_qubits)
        self.gates: Tuple[Gate, ...] = tuple(gates)
        for gate in self.gates:
            for q in gate.targets:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"Gate {gate} targets qubit {q} outside [0, {self.num_qubits})")
        self.moments: Optional[Tuple[int, ...]] = None
        if moments is not None:
            moments = tuple(int(m) for m in moments)
            if len(moments) != len(self.gates):
                raise ValueError(f"Got {len(moments)} moment labels for {len(self.gates)} gates")
            if any(b < a for a, b in zip(moments, moments[1:])):
                raise ValueError("Moment labels must be non-decreasing")
            self.moments = moments

    @classmethod
    def from_moments(cls, num_qubits: int, columns: Sequence[Sequence[Gate]]) -> "Circuit":
        """Build a circuit from drawn columns, keeping column membership."""
        gates: List[Gate] = []
        labels: List[int] = []
        for index, column in enumerate(columns):
            gates.extend(column)
            labels.extend([index] * len(column))
        return cls(num_qubits, gates, labels)

    def census(self) -> Dict[str, int]:
        """Gate count per kind, e.g. {'H': 4, 'CNOT': 8}."""
        return dict(Counter(g.kind.value for g in self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "type": self.model_type,
            "num_qubits": self.num_qubits,
            "gates": [g.to_dict() for g in self.gates],
        }
        if self.moments is not None:
            data["moments"] = list(self.moments)
        return data

    def __str__(self) -> str:
        return f"Circuit(qubits={self.num_qubits}, gates={len(self.gates)})"
