from typing import Any, Dict, Mapping

import numpy as np

from qsgps.constants import HERMITIAN_ATOL, MAX_QUBITS, NORM_ATOL, PSD_ATOL
from qsgps.errors import InvalidStateError, NotNormalizedError
from qsgps.models.base import Model, complex_from_dict, complex_to_dict, frozen


def _qubits_for_length(length: int) -> int:
    n = int(length).bit_length() - 1
    if length < 2 or (1 << n) != length:
        raise InvalidStateError(f"Expected a length of 2^n, got {length}")
    if n > MAX_QUBITS:
        raise InvalidStateError(f"Registers are limited to {MAX_QUBITS} qubits, got {n}")
    return n


class Statevector(Model):
    """
    Pure state of an n-qubit register.

    Qubit 0 is the most significant bit of the basis index, so the ket
    |10010> is amplitude index 18.
    """

    def __init__(self, amplitudes: Any, atol: float = NORM_ATOL):
        """
        Initialize a statevector.

        Args:
            amplitudes: Complex amplitudes of length 2^n, 1 <= n <= 10
            atol: Allowed deviation of the squared norm from 1

        Raises:
            NotNormalizedError: If the squared norm differs from 1
        """
        super().__init__("statevector")
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        self.num_qubits = _qubits_for_length(amps.size)
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > atol:
            raise NotNormalizedError(f"Statevector squared norm is {norm}, expected 1")
        self.amplitudes = frozen(amps)

    @classmethod
    def basis(cls, bits: str) -> "Statevector":
        """Computational basis ket from a bitstring such as '10000'."""
        amps = np.zeros(1 << len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    @classmethod
    def from_bitstrings(cls, table: Mapping[str, complex]) -> "Statevector":
        """
        Build a state from a transcription table.

        Args:
            table: Mapping from bitstring to amplitude; all keys share one length

        Returns:
            The statevector with the listed amplitudes and zeros elsewhere
        """
        lengths = {len(bits) for bits in table}
        if len(lengths) != 1:
            raise InvalidStateError(f"Bitstrings of mixed lengths: {sorted(lengths)}")
        amps = np.zeros(1 << lengths.pop(), dtype=complex)
        for bits, value in table.items():
            amps[int(bits, 2)] += value
        return cls(amps)

    @classmethod
    def product(cls, *single_qubit: Any) -> "Statevector":
        """Tensor product of single-qubit amplitude pairs, qubit 0 first."""
        amps = np.array([1.0], dtype=complex)
        for pair in single_qubit:
            amps = np.kron(amps, np.asarray(pair, dtype=complex))
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.model_type,
            "num_qubits": self.num_qubits,
            "amplitudes": complex_to_dict(self.amplitudes),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Statevector":
        return cls(complex_from_dict(data["amplitudes"]))

    def __str__(self) -> str:
        support = int(np.count_nonzero(np.abs(self.amplitudes) > 1e-12))
        return f"Statevector(qubits={self.num_qubits}, support={support})"


class DensityMatrix(Model):
    """Mixed state of an n-qubit register, same qubit ordering as Statevector."""

    def __init__(self, entries: Any, validate: bool = True):
        """
        Initialize a density matrix.

        Args:
            entries: Complex 2^n x 2^n matrix
            validate: Check Hermiticity, unit trace and positivity

        Raises:
            InvalidStateError: If the matrix is not a valid state
        """
        super().__init__("density_matrix")
        rho = np.asarray(entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidStateError(f"Expected a square matrix, got shape {rho.shape}")
        self.num_qubits = _qubits_for_length(rho.shape[0])
        if validate:
            self._validate(rho)
        self.entries = frozen(rho)

    @staticmethod
    def _validate(rho: np.ndarray) -> None:
        if not np.allclose(rho, rho.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(rho)
        if abs(trace - 1.0) > PSD_ATOL:
            raise InvalidStateError(f"Density matrix trace is {trace}, expected 1")
        smallest = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
        if smallest < -PSD_ATOL:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {smallest}")

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 1 << num_qubits
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.model_type,
            "num_qubits": self.num_qubits,
            "entries": complex_to_dict(self.entries),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DensityMatrix":
        return cls(complex_from_dict(data["entries"]))

    def __str__(self) -> str:
        return f"DensityMatrix(qubits={self.num_qubits}, purity={self.purity():.6f})"
