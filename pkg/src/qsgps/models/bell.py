from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qsgps.constants import DICHOTOMIC_ATOL, HERMITIAN_ATOL
from qsgps.errors import NotDichotomicError, NotHermitianError
from qsgps.models.base import Model, complex_to_dict, frozen
from qsgps.models.operators import PAULI_MATRICES, kron_all


class DichotomicObservable(Model):
    """2x2 Hermitian observable squaring to the identity (outcomes +1/-1)."""

    def __init__(self, matrix: Any, atol: float = DICHOTOMIC_ATOL):
        super().__init__("dichotomic_observable")
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise NotDichotomicError(f"Expected a 2x2 observable, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
            raise NotHermitianError("Observable is not Hermitian")
        if not np.allclose(m @ m, np.eye(2), atol=atol, rtol=0.0):
            raise NotDichotomicError("Observable does not square to the identity")
        self.matrix = frozen(m)

    @classmethod
    def pauli(cls, letter: str) -> "DichotomicObservable":
        return cls(PAULI_MATRICES[letter])

    @classmethod
    def bloch(cls, axis: Sequence[float]) -> "DichotomicObservable":
        """n . sigma for a unit vector n."""
        nx, ny, nz = (float(v) for v in axis)
        return cls(nx * PAULI_MATRICES["X"] + ny * PAULI_MATRICES["Y"] + nz * PAULI_MATRICES["Z"])

    def bloch_vector(self) -> np.ndarray:
        """Real (x, y, z) with matrix = x X + y Y + z Z (+ trace part)."""
        return np.array([np.trace(self.matrix @ PAULI_MATRICES[ch]).real / 2.0 for ch in "XYZ"])

    def to_dict(self) -> Dict[str, Any]:
        return {"matrix": complex_to_dict(self.matrix)}

    def __str__(self) -> str:
        x, y, z = self.bloch_vector()
        return f"DichotomicObservable(bloch=({x:.4f}, {y:.4f}, {z:.4f}))"


class MeasurementStrategy(Model):
    """Two dichotomic settings (A0, A1) per party; party j measures qubit j."""

    def __init__(self, settings: Sequence[Tuple[DichotomicObservable, DichotomicObservable]]):
        super().__init__("measurement_strategy")
        settings = tuple((a0, a1) for a0, a1 in settings)
        if not settings:
            raise ValueError("Strategy needs at least one party")
        for a0, a1 in settings:
            if not isinstance(a0, DichotomicObservable) or not isinstance(a1, DichotomicObservable):
                raise NotDichotomicError("Strategy settings must be DichotomicObservable instances")
        self.settings: Tuple[Tuple[DichotomicObservable, DichotomicObservable], ...] = settings

    @property
    def parties(self) -> int:
        return len(self.settings)

    def observable(self, party: int, setting: int) -> DichotomicObservable:
        return self.settings[party][setting]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parties": self.parties,
            "settings": [
                {"A0": a0.bloch_vector().tolist(), "A1": a1.bloch_vector().tolist()}
                for a0, a1 in self.settings
            ],
        }

    def __str__(self) -> str:
        return f"MeasurementStrategy(parties={self.parties})"


class CorrelatorTerm(Model):
    """
    coefficient * <prod_j A^j_{choice_j}>; a choice of None is the identity.
    """

    def __init__(self, coefficient: float, choices: Sequence[Optional[int]]):
        super().__init__("correlator_term")
        choices = tuple(None if c is None else int(c) for c in choices)
        if all(c is None for c in choices):
            raise ValueError("Correlator term needs at least one non-identity slot")
        if any(c not in (None, 0, 1) for c in choices):
            raise ValueError(f"Setting choices must be 0, 1 or None, got {choices}")
        self.coefficient = float(coefficient)
        self.choices: Tuple[Optional[int], ...] = choices

    @property
    def active_parties(self) -> List[int]:
        return [j for j, c in enumerate(self.choices) if c is not None]

    def label(self) -> str:
        return " ".join(f"A{c}^{j + 1}" for j, c in enumerate(self.choices) if c is not None)

    def to_dict(self) -> Dict[str, Any]:
        return {"coefficient": self.coefficient, "choices": list(self.choices)}

    def __str__(self) -> str:
        return f"CorrelatorTerm({self.coefficient:+g} {self.label()})"


class BellFunctional(Model):
    """Linear combination of correlators with its classical and quantum bounds."""

    def __init__(
        self,
        name: str,
        parties: int,
        terms: Sequence[CorrelatorTerm],
        classical_bound: float,
        quantum_bound: float,
    ):
        super().__init__("bell_functional")
        terms = tuple(terms)
        for term in terms:
            if len(term.choices) != parties:
                raise ValueError(f"Term {term} has {len(term.choices)} slots, functional has {parties} parties")
        if classical_bound > quantum_bound:
            raise ValueError(f"Classical bound {classical_bound} exceeds quantum bound {quantum_bound}")
        self.name = name
        self.parties = int(parties)
        self.terms: Tuple[CorrelatorTerm, ...] = terms
        self.classical_bound = float(classical_bound)
        self.quantum_bound = float(quantum_bound)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "parties": self.parties,
            "terms": [t.to_dict() for t in self.terms],
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
        }

    def __str__(self) -> str:
        return f"BellFunctional({self.name}, terms={len(self.terms)})"


class PseudoStabilizerSet(Model):
    """
    Strategy-dependent operators S~1..S~4.

    Each operator is stored as one 2x2 factor per party; densify() returns
    their tensor products on the full register.
    """

    def __init__(self, strategy: MeasurementStrategy, factors: Sequence[Sequence[np.ndarray]]):
        super().__init__("pseudo_stabilizer_set")
        factors = tuple(tuple(np.asarray(f, dtype=complex) for f in row) for row in factors)
        for row in factors:
            if len(row) != strategy.parties:
                raise ValueError(f"Pseudo-stabilizer has {len(row)} factors for {strategy.parties} parties")
        self.strategy = strategy
        self.factors = factors

    def densify(self) -> List[np.ndarray]:
        return [kron_all(row) for row in self.factors]

    def __len__(self) -> int:
        return len(self.factors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": len(self.factors),
            "factors": [[complex_to_dict(f) for f in row] for row in self.factors],
        }


class BellEstimate(NamedTuple):
    """Finite-shot estimate of a functional; unpacks as (estimate, stderr)."""

    estimate: float
    stderr: float

    def to_dict(self) -> Dict[str, Any]:
        return {"estimate": self.estimate, "stderr": self.stderr}
