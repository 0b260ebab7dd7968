"""
Bell functionals, classical bounds, optimal strategies and SOS certificates.

Party j measures qubit j. Two functionals are built in: the bipartite CHSH
expression and the five-party functional I5 whose maximal quantum value
4*sqrt(2)+1 self-tests the five-qubit code space. I5 is stored expanded into
seven single-product correlators.
"""

import itertools
import logging
import math
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from python_debug import debug_trace

from qsgps import code5, qsim
from qsgps.constants import (
    CHSH_CLASSICAL_BOUND,
    CHSH_QUANTUM_BOUND,
    DICHOTOMIC_ATOL,
    I5_CLASSICAL_BOUND,
    I5_QUANTUM_BOUND,
)
from qsgps.errors import (
    DimensionMismatchError,
    EnumerationLimitError,
    NotAnticommutingError,
)
from qsgps.models.bell import (
    BellEstimate,
    BellFunctional,
    CorrelatorTerm,
    DichotomicObservable,
    MeasurementStrategy,
    PseudoStabilizerSet,
)
from qsgps.models.operators import PAULI_MATRICES, Observable, kron_all
from qsgps.models.state import DensityMatrix, Statevector

logger = logging.getLogger('qsgps.bell')

State = Union[Statevector, DensityMatrix]

MAX_ENUMERATION_PARTIES = 6

_SQRT2 = math.sqrt(2.0)
_EYE2 = np.eye(2, dtype=complex)


class FunctionalKind(str, Enum):
    CHSH = "chsh"
    I5 = "i5"

    @classmethod
    def parse(cls, value: Union[str, "FunctionalKind"]) -> "FunctionalKind":
        if isinstance(value, FunctionalKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"Unknown functional {value!r}, expected one of {[k.value for k in cls]}") from None


@lru_cache(maxsize=None)
def builtin_functional(kind: Union[str, FunctionalKind]) -> BellFunctional:
    """
    CHSH or I5 as a BellFunctional.

    Args:
        kind: 'chsh' or 'i5'

    Returns:
        CHSH with four terms and bounds (2, 2*sqrt(2)), or I5 with seven
        terms and bounds (5, 4*sqrt(2)+1)
    """
    kind = FunctionalKind.parse(kind)
    if kind is FunctionalKind.CHSH:
        terms = [
            CorrelatorTerm(+1, (0, 0)),
            CorrelatorTerm(+1, (0, 1)),
            CorrelatorTerm(+1, (1, 0)),
            CorrelatorTerm(-1, (1, 1)),
        ]
        return BellFunctional("CHSH", 2, terms, CHSH_CLASSICAL_BOUND, CHSH_QUANTUM_BOUND)
    terms = [
        CorrelatorTerm(+1, (0, 1, 1, 0, None)),
        CorrelatorTerm(+1, (1, 1, 1, 0, None)),
        CorrelatorTerm(+1, (None, 0, 1, 1, 0)),
        CorrelatorTerm(+1, (0, None, 0, 1, 1)),
        CorrelatorTerm(+1, (1, None, 0, 1, 1)),
        CorrelatorTerm(+2, (0, 0, None, 0, 1)),
        CorrelatorTerm(-2, (1, 0, None, 0, 1)),
    ]
    return BellFunctional("I5", 5, terms, I5_CLASSICAL_BOUND, I5_QUANTUM_BOUND)


def optimal_strategy(kind: Union[str, FunctionalKind]) -> MeasurementStrategy:
    """Measurements attaining the quantum bound on the target states."""
    kind = FunctionalKind.parse(kind)
    x = DichotomicObservable.pauli("X")
    z = DichotomicObservable.pauli("Z")
    plus = DichotomicObservable((PAULI_MATRICES["X"] + PAULI_MATRICES["Z"]) / _SQRT2)
    minus = DichotomicObservable((PAULI_MATRICES["X"] - PAULI_MATRICES["Z"]) / _SQRT2)
    if kind is FunctionalKind.CHSH:
        return MeasurementStrategy([(x, z), (plus, minus)])
    return MeasurementStrategy([(plus, minus)] + [(x, z)] * 4)


def target_state(kind: Union[str, FunctionalKind]) -> Statevector:
    """(|00> + |11>)/sqrt2 for CHSH, |0_L> for I5."""
    kind = FunctionalKind.parse(kind)
    if kind is FunctionalKind.CHSH:
        r = 1.0 / _SQRT2
        return Statevector.from_bitstrings({"00": r, "11": r})
    return code5.logical_state(1.0, 0.0)


def _check_dimensions(f: BellFunctional, strat: MeasurementStrategy, num_qubits: Optional[int] = None) -> None:
    if strat.parties != f.parties:
        raise DimensionMismatchError(f"{f.name} has {f.parties} parties, strategy has {strat.parties}")
    if num_qubits is not None and num_qubits != f.parties:
        raise DimensionMismatchError(f"{f.name} needs one qubit per party ({f.parties}), state has {num_qubits}")


def term_operator(term: CorrelatorTerm, strat: MeasurementStrategy) -> np.ndarray:
    """Dense tensor product for one correlator."""
    return kron_all(
        _EYE2 if c is None else strat.settings[j][c].matrix
        for j, c in enumerate(term.choices)
    )


def bell_operator(f: BellFunctional, strat: MeasurementStrategy) -> np.ndarray:
    """Dense Bell operator sum_k c_k prod_j A^j."""
    _check_dimensions(f, strat)
    return sum(term.coefficient * term_operator(term, strat) for term in f.terms)


def evaluate(f: BellFunctional, strat: MeasurementStrategy, state: State) -> float:
    """
    Exact value of a functional on a state.

    Raises:
        DimensionMismatchError: If parties, strategy and register disagree
    """
    _check_dimensions(f, strat, state.num_qubits)
    return qsim.expectation(state, bell_operator(f, strat))


@debug_trace()
def classical_maximum(f: BellFunctional) -> Tuple[float, Tuple[Tuple[int, int], ...]]:
    """
    Maximum over deterministic +-1 assignments of every A0^j, A1^j.

    Returns:
        (value, assignment) where assignment[j] = (a0, a1) for party j

    Raises:
        EnumerationLimitError: For more than six parties
    """
    if f.parties > MAX_ENUMERATION_PARTIES:
        raise EnumerationLimitError(
            f"{f.parties} parties need 4^{f.parties} assignments; limit is {MAX_ENUMERATION_PARTIES} parties"
        )
    local = ((1, 1), (1, -1), (-1, 1), (-1, -1))
    best_value = -math.inf
    best: Tuple[Tuple[int, int], ...] = ()
    for assignment in itertools.product(local, repeat=f.parties):
        value = 0.0
        for term in f.terms:
            product = 1
            for j, c in enumerate(term.choices):
                if c is not None:
                    product *= assignment[j][c]
            value += term.coefficient * product
        if value > best_value:
            best_value, best = value, assignment
    logger.debug(f"{f.name}: classical maximum {best_value} at {best}")
    return best_value, best


def pseudo_stabilizers(strat: MeasurementStrategy) -> PseudoStabilizerSet:
    """
    S~1..S~4 for a five-party strategy.

    Party 1 enters through (A0 + A1)/sqrt(2) and (A0 - A1)/sqrt(2); with the
    optimal strategy these are X and Z and every S~k equals the generator Sk.
    """
    if strat.parties != 5:
        raise DimensionMismatchError(f"Pseudo-stabilizers need 5 parties, got {strat.parties}")
    a = [(s0.matrix, s1.matrix) for s0, s1 in strat.settings]
    plus = (a[0][0] + a[0][1]) / _SQRT2
    minus = (a[0][0] - a[0][1]) / _SQRT2
    factors = [
        [plus, a[1][1], a[2][1], a[3][0], _EYE2],
        [_EYE2, a[1][0], a[2][1], a[3][1], a[4][0]],
        [plus, _EYE2, a[2][0], a[3][1], a[4][1]],
        [minus, a[1][0], _EYE2, a[3][0], a[4][1]],
    ]
    return PseudoStabilizerSet(strat, factors)


# Weights of (I - S~k)^2 in the I5 certificate
I5_SOS_WEIGHTS = (1.0 / _SQRT2, 0.5, 1.0 / _SQRT2, _SQRT2)


def sos_residual(strat: MeasurementStrategy, kind: Union[str, FunctionalKind]) -> float:
    """
    Operator-norm gap between (bound*I - Bell operator) and its SOS form.

    I5:   (4 sqrt2 + 1) I - I5 = sum_k w_k (I - S~k)^2
    CHSH: 2 sqrt2 I - I2 = (1/sqrt2) [((A0+A1)/sqrt2 - B0)^2 + ((A0-A1)/sqrt2 - B1)^2]

    Both identities use only A^2 = I and commutation across parties, so
    the residual vanishes for every dichotomic strategy.
    """
    kind = FunctionalKind.parse(kind)
    f = builtin_functional(kind)
    lhs = f.quantum_bound * np.eye(1 << f.parties) - bell_operator(f, strat)
    if kind is FunctionalKind.CHSH:
        (a0, a1), (b0, b1) = [(s0.matrix, s1.matrix) for s0, s1 in strat.settings]
        first = np.kron((a0 + a1) / _SQRT2, _EYE2) - np.kron(_EYE2, b0)
        second = np.kron((a0 - a1) / _SQRT2, _EYE2) - np.kron(_EYE2, b1)
        rhs = (first @ first + second @ second) / _SQRT2
    else:
        eye = np.eye(1 << f.parties)
        rhs = sum(w * (eye - s) @ (eye - s) for w, s in zip(I5_SOS_WEIGHTS, pseudo_stabilizers(strat).densify()))
    return float(np.linalg.norm(lhs - rhs, ord=2))


def induced_third_observable(a0: DichotomicObservable, a1: DichotomicObservable) -> DichotomicObservable:
    """
    A2 = -i [A0, A1] / 2 for anticommuting A0, A1.

    Raises:
        NotAnticommutingError: If {A0, A1} is not zero
    """
    anti = a0.matrix @ a1.matrix + a1.matrix @ a0.matrix
    if not np.allclose(anti, 0.0, atol=DICHOTOMIC_ATOL):
        raise NotAnticommutingError(f"Inputs anticommutator has norm {np.linalg.norm(anti):.3e}")
    return DichotomicObservable(-0.5j * (a0.matrix @ a1.matrix - a1.matrix @ a0.matrix))


def random_dichotomic(rng: np.random.Generator) -> DichotomicObservable:
    """cos(t) X + sin(t) (cos(p) Y + sin(p) Z) with random angles."""
    theta = rng.uniform(0.0, math.pi)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return DichotomicObservable.bloch(
        (math.cos(theta), math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi))
    )


def random_strategy(parties: int, rng: np.random.Generator) -> MeasurementStrategy:
    return MeasurementStrategy([(random_dichotomic(rng), random_dichotomic(rng)) for _ in range(parties)])


def conjugate_strategy(strat: MeasurementStrategy, unitaries: Sequence[np.ndarray]) -> MeasurementStrategy:
    """Replace every A^j by V_j A^j V_j^dagger."""
    if len(unitaries) != strat.parties:
        raise DimensionMismatchError(f"Got {len(unitaries)} unitaries for {strat.parties} parties")
    return MeasurementStrategy([
        tuple(DichotomicObservable(v @ a.matrix @ v.conj().T) for a in pair)
        for v, pair in zip(unitaries, strat.settings)
    ])


@debug_trace()
def sample_estimate(
    f: BellFunctional,
    strat: MeasurementStrategy,
    state: State,
    shots_per_term: int,
    rng: np.random.Generator,
) -> BellEstimate:
    """
    Finite-shot estimate of a functional, one independent batch per term.

    stderr = sqrt(sum_k c_k^2 var_k / N) with var_k the empirical variance
    of the outcome products of term k.
    """
    if shots_per_term < 1:
        raise ValueError(f"shots_per_term must be at least 1, got {shots_per_term}")
    _check_dimensions(f, strat, state.num_qubits)
    estimate = 0.0
    variance = 0.0
    for term in f.terms:
        observables = [
            Observable(matrix=strat.settings[j][term.choices[j]].matrix, targets=(j,))
            for j in term.active_parties
        ]
        outcomes = qsim.sample_product_outcomes(state, observables, shots_per_term, rng)
        products = outcomes.prod(axis=1, dtype=np.int64)
        estimate += term.coefficient * float(products.mean())
        variance += term.coefficient ** 2 * float(products.var()) / shots_per_term
    logger.debug(f"{f.name} estimate {estimate:.6f} +- {math.sqrt(variance):.6f} ({shots_per_term} shots/term)")
    return BellEstimate(estimate, math.sqrt(variance))


def _bloch_state(r: np.ndarray) -> Tuple[complex, complex]:
    x, y, z = r / np.linalg.norm(r)
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return (math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0))


def _product_value(f: BellFunctional, axes: List[Tuple[np.ndarray, np.ndarray]], r: List[np.ndarray]) -> float:
    value = 0.0
    for term in f.terms:
        product = term.coefficient
        for j in term.active_parties:
            product *= float(r[j] @ axes[j][term.choices[j]])
        value += product
    return value


def classical_strategy_state(
    f: BellFunctional,
    strat: Optional[MeasurementStrategy] = None,
    sweeps: int = 50,
) -> Tuple[float, Statevector]:
    """
    Best unentangled (product) state against a fixed strategy.

    The value is multilinear in the single-qubit Bloch vectors, so each
    sweep moves every party to its normalized gradient. Two deterministic
    starts are tried: one aligned with the best classical assignment, one
    with every A0 axis.

    Returns:
        (value, product statevector); value never exceeds the classical bound
    """
    if strat is None:
        strat = optimal_strategy(FunctionalKind.I5 if f.parties == 5 else FunctionalKind.CHSH)
    _check_dimensions(f, strat)
    axes = [(a0.bloch_vector(), a1.bloch_vector()) for a0, a1 in strat.settings]
    _, assignment = classical_maximum(f)
    starts = []
    aligned = []
    for (n0, n1), (s0, s1) in zip(axes, assignment):
        v = s0 * n0 + s1 * n1
        aligned.append(v / np.linalg.norm(v) if np.linalg.norm(v) > 1e-9 else s0 * n0)
    starts.append(aligned)
    starts.append([n0 / np.linalg.norm(n0) for n0, _ in axes])

    best_value, best_r = -math.inf, None
    for r in starts:
        r = [np.array(v, dtype=float) for v in r]
        value = _product_value(f, axes, r)
        for _ in range(sweeps):
            for j in range(f.parties):
                grad = np.zeros(3)
                for term in f.terms:
                    if term.choices[j] is None:
                        continue
                    weight = term.coefficient
                    for k in term.active_parties:
                        if k != j:
                            weight *= float(r[k] @ axes[k][term.choices[k]])
                    grad += weight * axes[j][term.choices[j]]
                if np.linalg.norm(grad) > 1e-12:
                    r[j] = grad / np.linalg.norm(grad)
            updated = _product_value(f, axes, r)
            converged = updated - value < 1e-13
            value = updated
            if converged:
                break
        if value > best_value:
            best_value, best_r = value, r
    state = Statevector.product(*[_bloch_state(v) for v in best_r])
    exact = evaluate(f, strat, state)
    logger.debug(f"{f.name}: best product-state value {exact:.6f}")
    return exact, state
