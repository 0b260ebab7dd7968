"""
Classical positioning: the pseudorange forward model and a Gauss-Newton
solver for receiver position and clock bias.

The clock bias is carried internally as the range offset c*b (meters) so
that all four unknowns share a scale; it is converted back to seconds in
the returned PositionFix.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from python_debug import debug_trace

from qsgps.constants import SPEED_OF_LIGHT
from qsgps.errors import (
    ConfigError,
    ConvergenceError,
    DegenerateGeometryError,
    IdMismatchError,
    SolverError,
)
from qsgps.models.geometry import (
    EcefPoint,
    PositionFix,
    Pseudorange,
    SatelliteEpoch,
    SolverConfig,
)

logger = logging.getLogger('qsgps.geoposition')

EARTH_RADIUS = 6_371_000.0
ORBIT_RADIUS = 26_600_000.0
MAX_CONDITION = 1e10
ROOT_GRANULARITY = 1.0

Start = Union[EcefPoint, Tuple[EcefPoint, float]]


def _positions(sats: Sequence[SatelliteEpoch]) -> np.ndarray:
    ids = [s.id for s in sats]
    if len(set(ids)) != len(ids):
        raise IdMismatchError(f"Satellite ids repeat: {ids}")
    return np.array([s.position.as_array() for s in sats], dtype=float).reshape(-1, 3)


def _ranges(positions: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(positions - x, axis=1)


def forward_pseudoranges(
    truth: EcefPoint,
    bias: float,
    sats: Sequence[SatelliteEpoch],
) -> List[Pseudorange]:
    """
    Pseudoranges a receiver at ``truth`` with clock bias ``bias`` (seconds)
    would measure: rho_i = |p_i - truth| + c*bias.

    Raises:
        DegenerateGeometryError: If a satellite sits at the receiver position
    """
    distances = _ranges(_positions(sats), truth.as_array())
    if np.any(distances == 0.0):
        raise DegenerateGeometryError(f"Satellite coincides with receiver position {truth}")
    offset = SPEED_OF_LIGHT * float(bias)
    return [Pseudorange(s.id, d + offset) for s, d in zip(sats, distances)]


def jacobian(sats: Sequence[SatelliteEpoch], position: EcefPoint) -> np.ndarray:
    """
    Derivatives of the residuals with respect to (x, y, z, b).

    Row i is [(x - p_i)/|x - p_i|, c]; the bias column is per second.
    """
    positions = _positions(sats)
    x = position.as_array()
    distances = _ranges(positions, x)
    if np.any(distances == 0.0):
        raise DegenerateGeometryError(f"Satellite coincides with {position}")
    rows = (x - positions) / distances[:, None]
    return np.hstack([rows, np.full((len(positions), 1), SPEED_OF_LIGHT)])


def gdop(sats: Sequence[SatelliteEpoch], position: EcefPoint) -> float:
    """
    Geometric dilution of precision, sqrt(trace((G^T G)^-1)) with the range
    unit-vector matrix G = [e_i, 1].

    Raises:
        DegenerateGeometryError: If G^T G is singular
    """
    design = jacobian(sats, position)
    design[:, 3] = 1.0
    normal = design.T @ design
    if len(sats) < 4 or np.linalg.cond(normal) > MAX_CONDITION ** 2:
        raise DegenerateGeometryError(f"Singular geometry for {len(sats)} satellites")
    return float(np.sqrt(np.trace(np.linalg.inv(normal))))


def _align(sats: Sequence[SatelliteEpoch], ranges: Sequence[Pseudorange]) -> Tuple[np.ndarray, np.ndarray]:
    positions = _positions(sats)
    by_id = {r.id: r.rho for r in ranges}
    if len(by_id) != len(ranges) or set(by_id) != {s.id for s in sats}:
        raise IdMismatchError(
            f"Satellite ids {sorted(s.id for s in sats)} do not match pseudorange ids {sorted(r.id for r in ranges)}"
        )
    return positions, np.array([by_id[s.id] for s in sats], dtype=float)


@debug_trace()
def solve_fix(
    sats: Sequence[SatelliteEpoch],
    ranges: Sequence[Pseudorange],
    cfg: Optional[SolverConfig] = None,
) -> PositionFix:
    """
    Gauss-Newton solution of |p_i - x| + c*b = rho_i.

    Exactly four satellites without damping give a square Newton system;
    otherwise the (optionally Levenberg-damped) normal equations are solved.
    Convergence is declared when the update is shorter than the configured
    tolerance, floored at the rounding resolution of the satellite
    coordinates.

    Args:
        sats: Four or more satellites with distinct ids
        ranges: One pseudorange per satellite, matched by id
        cfg: Solver settings; defaults start at Earth center with zero bias

    Returns:
        Converged PositionFix

    Raises:
        IdMismatchError: If the id sets differ
        DegenerateGeometryError: If fewer than four satellites are given or
            the Jacobian is singular
        ConvergenceError: If max_iterations pass without convergence; the
            last iterate is attached as ``fix``
    """
    cfg = cfg if cfg is not None else SolverConfig()
    positions, rho = _align(sats, ranges)
    count = len(positions)
    if count < 4:
        raise DegenerateGeometryError(f"Need at least 4 satellites, got {count}")

    x = cfg.initial_guess.as_array()
    cb = SPEED_OF_LIGHT * cfg.initial_bias
    step_floor = max(cfg.tolerance, 64.0 * np.finfo(float).eps * float(np.max(np.abs(positions))))
    square = count == 4 and cfg.damping == 0.0

    iterations = 0
    converged = False
    while iterations < cfg.max_iterations:
        iterations += 1
        distances = _ranges(positions, x)
        if np.any(distances == 0.0):
            raise DegenerateGeometryError(f"Iterate landed on a satellite at step {iterations}")
        residual = distances + cb - rho
        design = np.hstack([(x - positions) / distances[:, None], np.ones((count, 1))])
        if np.linalg.cond(design) > MAX_CONDITION:
            raise DegenerateGeometryError(f"Jacobian is singular at iteration {iterations}")
        try:
            if square:
                step = np.linalg.solve(design, -residual)
            else:
                normal = design.T @ design + cfg.damping * np.eye(4)
                step = np.linalg.solve(normal, -design.T @ residual)
        except np.linalg.LinAlgError as e:
            raise DegenerateGeometryError(f"Jacobian is singular at iteration {iterations}: {e}") from e
        x = x + step[:3]
        cb = cb + step[3]
        if not (np.all(np.isfinite(x)) and np.isfinite(cb)):
            break
        logger.debug(f"iteration {iterations}: |step| = {np.linalg.norm(step):.3e} m")
        if np.linalg.norm(step) < step_floor:
            converged = True
            break

    finite = bool(np.all(np.isfinite(x)) and np.isfinite(cb))
    residual_norm = float(np.linalg.norm(_ranges(positions, x) + cb - rho)) if finite else float("nan")
    if not converged:
        fix = None
        if finite:
            fix = PositionFix(EcefPoint.from_array(x), cb / SPEED_OF_LIGHT, residual_norm, iterations, False)
        raise ConvergenceError(f"No convergence after {iterations} iterations", fix=fix)
    fix = PositionFix(EcefPoint.from_array(x), cb / SPEED_OF_LIGHT, residual_norm, iterations, True)
    logger.debug(f"Converged: {fix}")
    return fix


def _split_start(start: Start, default_bias: float) -> Tuple[EcefPoint, float]:
    if isinstance(start, EcefPoint):
        return start, default_bias
    point, bias = start
    return point, float(bias)


@debug_trace()
def enumerate_roots(
    sats: Sequence[SatelliteEpoch],
    ranges: Sequence[Pseudorange],
    cfg: Optional[SolverConfig],
    starts: Sequence[Start],
) -> List[PositionFix]:
    """
    Run solve_fix from every start and keep the distinct converged fixes.

    Two fixes are the same root when their (x, y, z, c*b) differ by less
    than one meter. Starts that fail are logged and skipped. With exactly
    four satellites one or two roots may appear.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    _align(sats, ranges)
    roots: List[PositionFix] = []
    for start in starts:
        point, bias = _split_start(start, cfg.initial_bias)
        try:
            fix = solve_fix(sats, ranges, cfg.with_start(point, bias))
        except SolverError as e:
            logger.warning(f"Start {point} did not converge: {e}")
            continue
        state = np.append(fix.position.as_array(), SPEED_OF_LIGHT * fix.clock_bias)
        duplicate = any(
            np.linalg.norm(state - np.append(r.position.as_array(), SPEED_OF_LIGHT * r.clock_bias)) < ROOT_GRANULARITY
            for r in roots
        )
        if not duplicate:
            roots.append(fix)
    logger.info(f"{len(roots)} distinct root(s) from {len(starts)} start(s)")
    return roots


def _unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_receiver(rng: np.random.Generator, max_bias: float = 1e-2) -> Tuple[EcefPoint, float]:
    """Receiver on the Earth shell with a uniform clock bias in [-max_bias, max_bias]."""
    point = EcefPoint.from_array(EARTH_RADIUS * _unit(rng))
    return point, float(rng.uniform(-max_bias, max_bias))


def satellites_visible_from(
    truth: EcefPoint,
    count: int,
    rng: np.random.Generator,
    min_elevation_deg: float = 15.0,
    radius: float = ORBIT_RADIUS,
    max_gdop: float = 20.0,
    max_attempts: int = 1000,
) -> List[SatelliteEpoch]:
    """
    Draw ``count`` satellites on a shell of ``radius`` above the receiver's
    horizon mask (spherical Earth), redrawing the whole set until its GDOP is
    at most ``max_gdop``.

    Raises:
        ConfigError: If no acceptable set is found within max_attempts
    """
    if count < 1:
        raise ConfigError(f"count must be at least 1, got {count}")
    up = truth.as_array() / np.linalg.norm(truth.as_array())
    min_sine = np.sin(np.radians(min_elevation_deg))
    for _ in range(max_attempts):
        points = []
        while len(points) < count:
            p = radius * _unit(rng)
            line = p - truth.as_array()
            if np.dot(up, line) / np.linalg.norm(line) >= min_sine:
                points.append(p)
        sats = [SatelliteEpoch(f"S{i + 1}", EcefPoint.from_array(p)) for i, p in enumerate(points)]
        if count < 4:
            return sats
        try:
            if gdop(sats, truth) <= max_gdop:
                return sats
        except DegenerateGeometryError:
            continue
    raise ConfigError(f"No satellite set with GDOP <= {max_gdop} after {max_attempts} attempts")
