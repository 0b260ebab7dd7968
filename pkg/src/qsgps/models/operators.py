import itertools
from functools import reduce
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qsgps.constants import CHANNEL_ATOL, HERMITIAN_ATOL
from qsgps.errors import IncompleteChannelError, NotHermitianError
from qsgps.models.base import Model, complex_to_dict, frozen

PAULI_MATRICES: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

PAULI_LETTERS = "IXYZ"


def kron_all(matrices: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product, first factor acting on the most significant qubit."""
    return reduce(np.kron, matrices, np.eye(1, dtype=complex))


class PauliString(Model):
    """
    Signed tensor product of single-qubit Paulis.

    Letter k acts on qubit k, so 'XZZXI' is X on qubit 0, Z on qubits 1 and 2,
    X on qubit 3.
    """

    def __init__(self, letters: str, sign: int = 1):
        super().__init__("pauli_string")
        letters = letters.upper()
        if not letters or any(ch not in PAULI_LETTERS for ch in letters):
            raise ValueError(f"Expected letters over IXYZ, got {letters!r}")
        if sign not in (1, -1):
            raise ValueError(f"Pauli sign must be +1 or -1, got {sign}")
        self.letters = letters
        self.sign = sign

    @classmethod
    def single(cls, num_qubits: int, qubit: int, letter: str) -> "PauliString":
        """Pauli acting with one letter on a 0-based qubit index."""
        letters = ["I"] * num_qubits
        letters[qubit] = letter
        return cls("".join(letters))

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(1 for ch in self.letters if ch != "I")

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, ch in enumerate(self.letters) if ch != "I")

    def matrix(self) -> np.ndarray:
        return self.sign * kron_all(PAULI_MATRICES[ch] for ch in self.letters)

    def anticommutes_with(self, other: "PauliString") -> bool:
        if other.num_qubits != self.num_qubits:
            raise ValueError(f"Pauli lengths differ: {self.num_qubits} and {other.num_qubits}")
        clashes = sum(
            1 for a, b in zip(self.letters, other.letters)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 1

    def commutes_with(self, other: "PauliString") -> bool:
        return not self.anticommutes_with(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.letters == other.letters and self.sign == other.sign

    def __hash__(self) -> int:
        return hash((self.letters, self.sign))

    def label(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.letters

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.model_type, "letters": self.letters, "sign": self.sign}

    def __str__(self) -> str:
        return f"PauliString({self.label()})"


class Observable(Model):
    """
    Hermitian operator, given either as weighted Pauli strings or densely.

    ``targets`` lists the qubits the operator acts on, in the order of its
    tensor factors. When omitted the operator covers qubits 0..k-1.
    """

    def __init__(
        self,
        terms: Optional[Sequence[Tuple[float, PauliString]]] = None,
        matrix: Optional[Any] = None,
        targets: Optional[Sequence[int]] = None,
        atol: float = HERMITIAN_ATOL,
    ):
        super().__init__("observable")
        if (terms is None) == (matrix is None):
            raise ValueError("Observable needs exactly one of terms or matrix")
        self.terms: Optional[Tuple[Tuple[float, PauliString], ...]] = None
        if terms is not None:
            terms = tuple((float(c), p) for c, p in terms)
            widths = {p.num_qubits for _, p in terms}
            if len(widths) != 1:
                raise ValueError(f"Pauli terms of mixed widths: {sorted(widths)}")
            self.terms = terms
            dense = sum(c * p.matrix() for c, p in terms)
        else:
            dense = np.asarray(matrix, dtype=complex)
            if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
                raise ValueError(f"Expected square observable matrix, got shape {dense.shape}")
        if not np.allclose(dense, dense.conj().T, atol=atol, rtol=0.0):
            raise NotHermitianError("Observable is not Hermitian")
        self._matrix = frozen(dense)
        width = int(self._matrix.shape[0]).bit_length() - 1
        self.targets: Tuple[int, ...] = tuple(targets) if targets is not None else tuple(range(width))
        if len(self.targets) != width:
            raise ValueError(f"Observable acts on {width} qubits but {len(self.targets)} targets given")
        if len(set(self.targets)) != width:
            raise ValueError(f"Observable targets repeat: {self.targets}")

    @classmethod
    def from_pauli(cls, pauli: PauliString, coefficient: float = 1.0) -> "Observable":
        return cls(terms=[(coefficient, pauli)])

    @property
    def num_qubits(self) -> int:
        return len(self.targets)

    def matrix(self) -> np.ndarray:
        return self._matrix

    def is_dichotomic(self, atol: float) -> bool:
        m = self._matrix
        return bool(np.allclose(m @ m, np.eye(m.shape[0]), atol=atol, rtol=0.0))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"type": self.model_type, "targets": list(self.targets)}
        if self.terms is not None:
            data["terms"] = [{"coefficient": c, "pauli": p.label()} for c, p in self.terms]
        else:
            data["matrix"] = complex_to_dict(self._matrix)
        return data

    def __str__(self) -> str:
        if self.terms is not None:
            body = " + ".join(f"{c:g}*{p.label()}" for c, p in self.terms)
            return f"Observable({body})"
        return f"Observable(dense, targets={self.targets})"


class KrausChannel(Model):
    """Completely positive trace-preserving map on a subset of qubits."""

    def __init__(self, operators: Sequence[Any], targets: Sequence[int], atol: float = CHANNEL_ATOL):
        """
        Initialize a channel from Kraus operators.

        Args:
            operators: Matrices of size 2^k x 2^k, k = len(targets)
            targets: Qubit indices the operators act on, in tensor-factor order
            atol: Completeness tolerance

        Raises:
            IncompleteChannelError: If sum of K^dagger K differs from identity
        """
        super().__init__("kraus_channel")
        self.targets = tuple(int(t) for t in targets)
        dim = 1 << len(self.targets)
        ops = [np.asarray(op, dtype=complex) for op in operators]
        if not ops:
            raise IncompleteChannelError("Kraus channel needs at least one operator")
        for op in ops:
            if op.shape != (dim, dim):
                raise IncompleteChannelError(f"Kraus operator shape {op.shape} does not match {len(self.targets)} targets")
        total = sum(op.conj().T @ op for op in ops)
        if not np.allclose(total, np.eye(dim), atol=atol, rtol=0.0):
            raise IncompleteChannelError("Kraus operators do not sum to the identity")
        self.operators = tuple(frozen(op) for op in ops)

    @classmethod
    def identity(cls, targets: Sequence[int]) -> "KrausChannel":
        return cls([np.eye(1 << len(targets), dtype=complex)], targets)

    @classmethod
    def pauli(cls, weights: Dict[str, float], targets: Sequence[int]) -> "KrausChannel":
        """
        Pauli channel rho -> sum_P w_P P rho P.

        Args:
            weights: Probability per Pauli word over the targets, e.g. {'IX': 0.1}
            targets: Qubits the words act on
        """
        ops = [np.sqrt(w) * kron_all(PAULI_MATRICES[ch] for ch in word)
               for word, w in weights.items() if w > 0.0]
        return cls(ops, targets)

    @classmethod
    def uniform_pauli_error(cls, p: float, targets: Sequence[int]) -> "KrausChannel":
        """With probability p apply a uniformly random non-identity Pauli on the targets."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {p}")
        words = ["".join(w) for w in itertools.product(PAULI_LETTERS, repeat=len(targets))]
        others = len(words) - 1
        weights = {w: (p / others if w.strip("I") else 1.0 - p) for w in words}
        return cls.pauli(weights, targets)

    @classmethod
    def depolarizing(cls, p: float, targets: Sequence[int]) -> "KrausChannel":
        """rho -> (1-p) rho + p (Tr_targets rho) x I/2^k, as a uniform Pauli twirl."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {p}")
        words = ["".join(w) for w in itertools.product(PAULI_LETTERS, repeat=len(targets))]
        share = p / len(words)
        weights = {w: share + (1.0 - p if not w.strip("I") else 0.0) for w in words}
        return cls.pauli(weights, targets)

    @classmethod
    def dephasing(cls, targets: Sequence[int]) -> "KrausChannel":
        """Complete Z-basis dephasing, the effect of intercept-resend in that basis."""
        projectors = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
        ops = [kron_all(combo) for combo in itertools.product(projectors, repeat=len(targets))]
        return cls(ops, targets)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.model_type,
            "targets": list(self.targets),
            "operators": [complex_to_dict(op) for op in self.operators],
        }

    def __str__(self) -> str:
        return f"KrausChannel(ops={len(self.operators)}, targets={self.targets})"


def pauli_words(num_qubits: int) -> List[str]:
    """All 4^n Pauli words on n qubits in lexicographic IXYZ order."""
    return ["".join(w) for w in itertools.product(PAULI_LETTERS, repeat=num_qubits)]
