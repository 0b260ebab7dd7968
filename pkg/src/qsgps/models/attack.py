from typing import Any, Dict, Optional, Sequence, Tuple

from qsgps.constants import CODE_QUBITS
from qsgps.errors import AttackModelError
from qsgps.models.base import Model
from qsgps.models.code import PauliError, Syndrome
from qsgps.models.state import DensityMatrix


def _qubits(qubits: Sequence[int]) -> Tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise AttackModelError("Attack must target at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise AttackModelError(f"Targeted qubits repeat: {qubits}")
    for q in qubits:
        if not 1 <= q <= CODE_QUBITS:
            raise AttackModelError(f"Targeted qubit {q} outside 1..{CODE_QUBITS}")
    return qubits


class AttackModel(Model):
    """
    Base class for tampering and noise applied between generation and
    measurement. Qubits are numbered 1..5.
    """

    variant = "abstract"

    def __init__(self):
        super().__init__("attack")

    def label(self) -> str:
        return self.variant

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.variant}

    def __str__(self) -> str:
        return f"{self.__class__.__name__}({self.label()})"


class NoAttack(AttackModel):
    variant = "none"


class PauliAttack(AttackModel):
    """One Pauli per targeted qubit, applied deterministically."""

    variant = "pauli"

    def __init__(self, errors: Sequence[PauliError]):
        super().__init__()
        errors = tuple(errors)
        if not errors:
            raise AttackModelError("Pauli attack needs at least one error")
        _qubits([e.qubit for e in errors])
        self.errors: Tuple[PauliError, ...] = tuple(sorted(errors, key=lambda e: e.qubit))

    def label(self) -> str:
        return "".join(e.label() for e in self.errors)

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.variant, "errors": [e.to_dict() for e in self.errors]}


class Depolarizing(AttackModel):
    """rho -> (1-p) rho + p (Tr_Q rho) x I/2^|Q| on the targeted set Q."""

    variant = "depolarizing"

    def __init__(self, p: float, qubits: Sequence[int] = tuple(range(1, CODE_QUBITS + 1))):
        super().__init__()
        if not 0.0 <= float(p) <= 1.0:
            raise AttackModelError(f"p must be in [0,1], got {p}")
        self.p = float(p)
        self.qubits = _qubits(qubits)

    def label(self) -> str:
        return f"depolarizing(p={self.p:g},q={''.join(map(str, self.qubits))})"

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.variant, "p": self.p, "qubits": list(self.qubits)}


class Dephasing(AttackModel):
    """Z-basis intercept-resend on the targeted qubits."""

    variant = "dephasing"

    def __init__(self, qubits: Sequence[int]):
        super().__init__()
        self.qubits = _qubits(qubits)

    def label(self) -> str:
        return f"dephasing(q={''.join(map(str, self.qubits))})"

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.variant, "qubits": list(self.qubits)}


class StateReplacement(AttackModel):
    """Discard the transmitted state and forward a prepared one."""

    variant = "replacement"

    def __init__(self, state: DensityMatrix, name: str = "custom"):
        super().__init__()
        if not isinstance(state, DensityMatrix) or state.num_qubits != CODE_QUBITS:
            raise AttackModelError(f"Replacement must be a {CODE_QUBITS}-qubit DensityMatrix")
        self.state = state
        self.name = name

    def label(self) -> str:
        return f"replacement({self.name})"

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.variant, "name": self.name, "density_matrix": self.state.to_dict()["entries"]}


class AttackOutcome(Model):
    """
    Exact effect of one attack on the certification statistic.

    ``syndrome`` is set only when correction was run and its outcome is
    deterministic; ``restored`` reports whether correction brought the
    logical states back with fidelity 1.
    """

    def __init__(
        self,
        attack: AttackModel,
        i5_value: float,
        certified: bool,
        threshold: float,
        syndrome: Optional[Syndrome] = None,
        corrected: bool = False,
        correction: Optional[PauliError] = None,
        corrected_i5: Optional[float] = None,
        restored: Optional[bool] = None,
    ):
        super().__init__("attack_outcome")
        self.attack = attack
        self.i5_value = float(i5_value)
        self.certified = bool(certified)
        self.threshold = float(threshold)
        self.syndrome = syndrome
        self.corrected = bool(corrected)
        self.correction = correction
        self.corrected_i5 = corrected_i5
        self.restored = restored

    def to_dict(self) -> Dict[str, Any]:
        return {
            "attack": self.attack.label(),
            "i5_value": self.i5_value,
            "threshold": self.threshold,
            "certified": self.certified,
            "syndrome": self.syndrome.label() if self.syndrome is not None else None,
            "corrected": self.corrected,
            "correction": self.correction.label() if self.correction is not None else None,
            "corrected_i5": self.corrected_i5,
            "restored": self.restored,
        }

    def __str__(self) -> str:
        return f"AttackOutcome({self.attack.label()}, i5={self.i5_value:.6f}, certified={self.certified})"


class DetectionEstimate(Model):
    """Monte Carlo detection frequency with a Wilson score interval."""

    def __init__(self, probability: float, low: float, high: float, detections: int, trials: int):
        super().__init__("detection_estimate")
        self.probability = float(probability)
        self.interval = (float(low), float(high))
        self.detections = int(detections)
        self.trials = int(trials)

    def __iter__(self):
        return iter((self.probability, self.interval))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "probability": self.probability,
            "wilson_low": self.interval[0],
            "wilson_high": self.interval[1],
            "detections": self.detections,
            "trials": self.trials,
        }
