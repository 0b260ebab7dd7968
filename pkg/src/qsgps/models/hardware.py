from typing import Any, Dict, Optional

from qsgps.errors import ConfigError
from qsgps.models.base import Model
from qsgps.models.circuit import Gate
from qsgps.models.operators import KrausChannel


class HardwareProfile(Model):
    """
    Gate times and fidelities of one qubit platform.

    Times are in seconds; fidelities lie in (0, 1].
    """

    def __init__(self, name: str, t_1q: float, t_2q: float, f_1q: float, f_2q: float):
        super().__init__("hardware_profile")
        for label, value in (("t_1q", t_1q), ("t_2q", t_2q)):
            if not value > 0:
                raise ConfigError(f"{label} must be positive, got {value}")
        for label, value in (("f_1q", f_1q), ("f_2q", f_2q)):
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{label} must be in (0, 1], got {value}")
        self.name = name
        self.t_1q = float(t_1q)
        self.t_2q = float(t_2q)
        self.f_1q = float(f_1q)
        self.f_2q = float(f_2q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "t_1q_s": self.t_1q,
            "t_2q_s": self.t_2q,
            "f_1q": self.f_1q,
            "f_2q": self.f_2q,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HardwareProfile":
        expected = {"name", "t_1q_s", "t_2q_s", "f_1q", "f_2q"}
        unknown = set(data) - expected
        missing = expected - set(data)
        if unknown or missing:
            raise ConfigError(f"HardwareProfile keys: missing {sorted(missing)}, unknown {sorted(unknown)}")
        return cls(str(data["name"]), data["t_1q_s"], data["t_2q_s"], data["f_1q"], data["f_2q"])

    def __str__(self) -> str:
        return f"HardwareProfile({self.name})"


class CircuitCost(Model):
    """Gate counts and per-class layer depths."""

    def __init__(self, n_1q: int, n_2q: int, d_1q: int, d_2q: int):
        super().__init__("circuit_cost")
        if min(n_1q, n_2q, d_1q, d_2q) < 0 or d_1q > n_1q or d_2q > n_2q:
            raise ValueError(f"Inconsistent cost n=({n_1q},{n_2q}) d=({d_1q},{d_2q})")
        self.n_1q = n_1q
        self.n_2q = n_2q
        self.d_1q = d_1q
        self.d_2q = d_2q

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircuitCost):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> Dict[str, Any]:
        return {"n_1q": self.n_1q, "n_2q": self.n_2q, "d_1q": self.d_1q, "d_2q": self.d_2q}

    def __str__(self) -> str:
        return f"CircuitCost(n=({self.n_1q},{self.n_2q}), d=({self.d_1q},{self.d_2q}))"


class NoiseModel(Model):
    """
    Per-gate-class error channels derived from gate infidelities.

    After each k-qubit gate a uniformly random non-identity Pauli acts on the
    gate's qubits with probability p_kq.
    """

    def __init__(self, p_1q: float, p_2q: float, source: Optional[str] = None):
        super().__init__("noise_model")
        self.p_1q = float(p_1q)
        self.p_2q = float(p_2q)
        self.source = source

    def probability_for(self, arity: int) -> float:
        if arity == 1:
            return self.p_1q
        if arity == 2:
            return self.p_2q
        raise ValueError(f"No error rate for {arity}-qubit gates")

    def channel_for(self, gate: Gate) -> Optional[KrausChannel]:
        """Channel following the gate, or None when the gate is noiseless."""
        p = self.probability_for(gate.arity)
        if p == 0.0:
            return None
        return KrausChannel.uniform_pauli_error(p, gate.targets)

    def to_dict(self) -> Dict[str, Any]:
        return {"source": self.source, "p_1q": self.p_1q, "p_2q": self.p_2q}
