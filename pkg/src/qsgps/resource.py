"""
Hardware cost model: gate counts and layer depths, total gate time, the
product-of-fidelities bound, and platform profiles.
"""

import logging
from typing import Dict, List, Set, Tuple

from qsgps.errors import ConfigError
from qsgps.models.circuit import Circuit
from qsgps.models.hardware import CircuitCost, HardwareProfile, NoiseModel

logger = logging.getLogger('qsgps.resource')


def circuit_cost(circuit: Circuit, respect_moments: bool = True) -> CircuitCost:
    """
    Count gates by arity and schedule them into single-class layers.

    A layer holds mutually disjoint gates of one class (1q or 2q). Each gate
    goes into the earliest layer after the last layer touching its qubits
    that has the same class and room for it. When the circuit carries drawn
    columns and ``respect_moments`` is set, no gate is placed before the
    first layer opened for its column.

    Args:
        circuit: Circuit of one- and two-qubit gates
        respect_moments: Use drawn columns as scheduling barriers

    Returns:
        CircuitCost with counts and per-class depths
    """
    layers: List[Tuple[int, Set[int]]] = []
    last: Dict[int, int] = {}
    floor = 0
    current_moment = None
    counts = {1: 0, 2: 0}
    for index, gate in enumerate(circuit.gates):
        if gate.arity not in counts:
            raise ValueError(f"Only 1- and 2-qubit gates are costed, got {gate}")
        counts[gate.arity] += 1
        if respect_moments and circuit.moments is not None:
            moment = circuit.moments[index]
            if moment != current_moment:
                floor = len(layers)
                current_moment = moment
        earliest = max([last.get(q, -1) + 1 for q in gate.targets] + [floor])
        placed = None
        for position in range(earliest, len(layers)):
            arity, used = layers[position]
            if arity == gate.arity and used.isdisjoint(gate.targets):
                placed = position
                break
        if placed is None:
            layers.append((gate.arity, set()))
            placed = len(layers) - 1
        layers[placed][1].update(gate.targets)
        for q in gate.targets:
            last[q] = placed
    depth = {1: 0, 2: 0}
    for arity, _ in layers:
        depth[arity] += 1
    cost = CircuitCost(counts[1], counts[2], depth[1], depth[2])
    logger.debug(f"{circuit}: {cost} (respect_moments={respect_moments})")
    return cost


def total_time(profile: HardwareProfile, cost: CircuitCost) -> float:
    """t_total = d_1q t_1q + d_2q t_2q, in seconds."""
    return cost.d_1q * profile.t_1q + cost.d_2q * profile.t_2q


def fidelity_bound(profile: HardwareProfile, cost: CircuitCost) -> float:
    """Upper bound F_1q^n_1q * F_2q^n_2q on the circuit fidelity."""
    return profile.f_1q ** cost.n_1q * profile.f_2q ** cost.n_2q


def infidelity(profile: HardwareProfile, cost: CircuitCost) -> float:
    return 1.0 - fidelity_bound(profile, cost)


_BUILTIN = (
    HardwareProfile("Superconducting", 8.2e-9, 25e-9, 0.99997, 0.998),
    HardwareProfile("Trapped-ion", 1.32e-6, 60e-6, 0.9999985, 0.9997),
)

# Noiseless reference with superconducting gate times
IDEAL_PROFILE = HardwareProfile("Ideal", 8.2e-9, 25e-9, 1.0, 1.0)


def builtin_profiles() -> List[HardwareProfile]:
    """The superconducting and trapped-ion platform rows."""
    return list(_BUILTIN)


def _key(name: str) -> str:
    return name.strip().lower().replace("_", "-").replace(" ", "-")


def get_profile(name: str) -> HardwareProfile:
    """
    Look up a built-in profile by case-insensitive name.

    Raises:
        ConfigError: If no profile has that name
    """
    for profile in list(_BUILTIN) + [IDEAL_PROFILE]:
        if _key(profile.name) == _key(name):
            return profile
    known = [p.name for p in list(_BUILTIN) + [IDEAL_PROFILE]]
    raise ConfigError(f"Unknown hardware profile {name!r}, expected one of {known}")


def noise_channels_from_profile(profile: HardwareProfile) -> NoiseModel:
    """Uniform Pauli error after each k-qubit gate with probability 1 - F_kq."""
    return NoiseModel(1.0 - profile.f_1q, 1.0 - profile.f_2q, source=profile.name)
