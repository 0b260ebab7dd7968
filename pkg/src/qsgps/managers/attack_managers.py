from typing import Any

from python_debug import debug_trace

from qsgps import qsim
from qsgps.managers.base import Manager
from qsgps.models.attack import (
    AttackModel,
    Dephasing,
    Depolarizing,
    NoAttack,
    PauliAttack,
    StateReplacement,
)
from qsgps.models.operators import PAULI_MATRICES, KrausChannel
from qsgps.models.state import DensityMatrix


class AttackManager(Manager):
    """Applies one AttackModel variant to a five-qubit density matrix."""

    handles = AttackModel

    @classmethod
    def can_handle(cls, item: Any) -> bool:
        return isinstance(item, cls.handles)

    @classmethod
    def run(cls, item: AttackModel, dm: DensityMatrix) -> DensityMatrix:
        if not cls.can_handle(item):
            raise ValueError(f"Expected {cls.handles.__name__}, got {type(item).__name__}")
        return cls.apply(item, dm)

    @classmethod
    def apply(cls, attack: AttackModel, dm: DensityMatrix) -> DensityMatrix:
        raise NotImplementedError


class NoAttackManager(AttackManager):
    handles = NoAttack

    @classmethod
    def apply(cls, attack: NoAttack, dm: DensityMatrix) -> DensityMatrix:
        return dm


class PauliAttackManager(AttackManager):
    """Conjugates the state by the attacker's Pauli on each targeted qubit."""

    handles = PauliAttack

    @classmethod
    @debug_trace()
    def apply(cls, attack: PauliAttack, dm: DensityMatrix) -> DensityMatrix:
        rho = dm.entries
        for err in attack.errors:
            rho = qsim.conjugate(rho, PAULI_MATRICES[err.letter], (err.index,))
        return DensityMatrix(rho)


class DepolarizingManager(AttackManager):
    handles = Depolarizing

    @classmethod
    @debug_trace()
    def apply(cls, attack: Depolarizing, dm: DensityMatrix) -> DensityMatrix:
        return qsim.depolarize(dm, attack.p, [q - 1 for q in attack.qubits])


class DephasingManager(AttackManager):
    """Intercept-resend in the Z basis, i.e. complete dephasing."""

    handles = Dephasing

    @classmethod
    @debug_trace()
    def apply(cls, attack: Dephasing, dm: DensityMatrix) -> DensityMatrix:
        return qsim.apply_channel(dm, KrausChannel.dephasing([q - 1 for q in attack.qubits]))


class StateReplacementManager(AttackManager):
    handles = StateReplacement

    @classmethod
    def apply(cls, attack: StateReplacement, dm: DensityMatrix) -> DensityMatrix:
        return attack.state
