"""
Attack and noise models between code generation and measurement, and the
statistics of detecting them through the I5 value.
"""

import itertools
import logging
from functools import lru_cache
from typing import List, Sequence

import numpy as np
from python_debug import debug_trace
from scipy.stats import binomtest

from qsgps import bell, code5, qsim
from qsgps.constants import CODE_QUBITS, DEFAULT_THRESHOLD, I5_QUANTUM_BOUND
from qsgps.errors import AttackModelError, DimensionMismatchError
from qsgps.models.attack import (
    AttackModel,
    AttackOutcome,
    Depolarizing,
    DetectionEstimate,
    PauliAttack,
    StateReplacement,
)
from qsgps.models.code import PauliError
from qsgps.models.state import DensityMatrix
from qsgps.registry import AttackRegistry

logger = logging.getLogger('qsgps.adversary')

RESTORE_ATOL = 1e-10

_registry = AttackRegistry()


@debug_trace()
def apply_attack(dm: DensityMatrix, attack: AttackModel) -> DensityMatrix:
    """
    Apply an attack to a five-qubit state.

    Raises:
        DimensionMismatchError: If the state is not five qubits
        AttackModelError: If no manager handles the attack
    """
    if dm.num_qubits != CODE_QUBITS:
        raise DimensionMismatchError(f"Expected {CODE_QUBITS}-qubit state, got {dm.num_qubits}")
    if _registry.find_manager(attack) is None:
        raise AttackModelError(f"Unsupported attack type: {type(attack).__name__}")
    return _registry.dispatch(attack, dm)


def exact_i5(state) -> float:
    """I5 under the optimal strategy."""
    return bell.evaluate(bell.builtin_functional("i5"), bell.optimal_strategy("i5"), state)


def all_single_pauli_attacks() -> List[PauliAttack]:
    return [PauliAttack([err]) for err in code5.single_qubit_errors()]


def all_double_pauli_attacks() -> List[PauliAttack]:
    """The 90 weight-two Paulis."""
    attacks = []
    for q1, q2 in itertools.combinations(range(1, CODE_QUBITS + 1), 2):
        for l1, l2 in itertools.product("XYZ", repeat=2):
            attacks.append(PauliAttack([PauliError(q1, l1), PauliError(q2, l2)]))
    return attacks


def global_depolarizing(p: float) -> Depolarizing:
    return Depolarizing(p, tuple(range(1, CODE_QUBITS + 1)))


@lru_cache(maxsize=None)
def classical_replacement_attack() -> StateReplacement:
    """Forward the best product state against the optimal I5 measurements."""
    value, state = bell.classical_strategy_state(bell.builtin_functional("i5"))
    logger.debug(f"Classical replacement state reaches I5 = {value:.6f}")
    return StateReplacement(state.to_density(), name="classical")


@lru_cache(maxsize=None)
def _references() -> tuple:
    r = 1.0 / np.sqrt(2.0)
    return (code5.logical_state(1.0, 0.0).to_density(), code5.logical_state(r, r).to_density())


def _outcome(attack: AttackModel, threshold: float, correct: bool) -> AttackOutcome:
    zero, plus = _references()
    attacked = apply_attack(zero, attack)
    value = exact_i5(attacked)
    if value > I5_QUANTUM_BOUND + 1e-9:
        raise RuntimeError(f"I5 {value} exceeds the quantum bound under {attack.label()}")
    outcome = AttackOutcome(attack, value, value >= threshold, threshold)
    if not correct:
        return outcome

    distribution = code5.syndrome_distribution(attacked)
    recovered = code5.recover(attacked)
    outcome.corrected = any(not s.is_trivial for s in distribution)
    outcome.corrected_i5 = exact_i5(recovered)
    if len(distribution) == 1:
        (syndrome,) = distribution
        outcome.syndrome = syndrome
        outcome.correction = code5.decode_syndrome(syndrome)
    outcome.restored = all(
        qsim.fidelity(code5.recover(apply_attack(ref, attack)), ref) >= 1.0 - RESTORE_ATOL
        for ref in (zero, plus)
    )
    return outcome


@debug_trace()
def attack_sweep(
    attacks: Sequence[AttackModel],
    threshold: float = DEFAULT_THRESHOLD,
    correct: bool = True,
) -> List[AttackOutcome]:
    """
    Exact I5 on the attacked |0_L> for each attack.

    With ``correct`` set, the syndrome-measure-and-correct channel is also
    applied; the row records the deterministic syndrome (when there is
    one), the corrected I5, and whether |0_L> and |+_L> both come back with
    fidelity 1. A weight-two attack that is miscorrected into a logical
    error shows up as restored=False even when corrected_i5 is maximal.
    """
    rows = [_outcome(attack, threshold, correct) for attack in attacks]
    logger.info(f"Swept {len(rows)} attacks; {sum(r.certified for r in rows)} certified at threshold {threshold}")
    return rows


@debug_trace()
def detection_probability(
    attack: AttackModel,
    shots_per_term: int,
    threshold: float,
    trials: int,
    rng: np.random.Generator,
) -> DetectionEstimate:
    """
    Monte Carlo frequency with which the sampled I5 falls below threshold.

    Every trial uses its own child generator, so the result does not depend
    on trial order.

    Returns:
        DetectionEstimate unpacking as (probability, (wilson_low, wilson_high))
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    zero, _ = _references()
    attacked = apply_attack(zero, attack)
    functional = bell.builtin_functional("i5")
    strategy = bell.optimal_strategy("i5")
    detections = 0
    for child in rng.spawn(trials):
        estimate, _ = bell.sample_estimate(functional, strategy, attacked, shots_per_term, child)
        if estimate < threshold:
            detections += 1
    interval = binomtest(detections, trials).proportion_ci(confidence_level=0.95, method="wilson")
    logger.debug(f"{attack.label()}: {detections}/{trials} detected")
    return DetectionEstimate(detections / trials, interval.low, interval.high, detections, trials)
