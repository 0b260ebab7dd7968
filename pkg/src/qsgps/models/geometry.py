import math
from typing import Any, Dict, Optional, Sequence

import numpy as np

from qsgps.errors import ConfigError
from qsgps.models.base import Model


class EcefPoint(Model):
    """Earth-centered Cartesian point in meters."""

    def __init__(self, x: float, y: float, z: float):
        super().__init__("ecef_point")
        values = (float(x), float(y), float(z))
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"ECEF components must be finite, got {values}")
        self.x, self.y, self.z = values

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "EcefPoint":
        if len(values) != 3:
            raise ConfigError(f"Expected three coordinates, got {len(values)}")
        return cls(*values)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def distance_to(self, other: "EcefPoint") -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))

    def translated(self, offset: Sequence[float]) -> "EcefPoint":
        return EcefPoint.from_array(self.as_array() + np.asarray(offset, dtype=float))

    def to_dict(self) -> Dict[str, Any]:
        return {"x_m": self.x, "y_m": self.y, "z_m": self.z}

    def __str__(self) -> str:
        return f"EcefPoint({self.x:.3f}, {self.y:.3f}, {self.z:.3f})"


class SatelliteEpoch(Model):
    """Satellite position at its transmit time."""

    def __init__(self, sat_id: str, position: EcefPoint, transmit_time: float = 0.0):
        super().__init__("satellite_epoch")
        self.id = str(sat_id)
        self.position = position
        self.transmit_time = float(transmit_time)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "position": [self.position.x, self.position.y, self.position.z],
            "transmit_time": self.transmit_time,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SatelliteEpoch":
        unknown = set(data) - {"id", "position", "transmit_time"}
        if unknown:
            raise ConfigError(f"Unknown satellite keys: {sorted(unknown)}")
        try:
            return cls(data["id"], EcefPoint.from_array(data["position"]), data.get("transmit_time", 0.0))
        except KeyError as e:
            raise ConfigError(f"Satellite entry missing key {e}") from None

    def __str__(self) -> str:
        return f"SatelliteEpoch({self.id})"


class Pseudorange(Model):
    """Measured range c * (receive - transmit), bias included."""

    def __init__(self, sat_id: str, rho: float):
        super().__init__("pseudorange")
        if not rho > 0:
            raise ValueError(f"Pseudorange must be positive, got {rho}")
        self.id = str(sat_id)
        self.rho = float(rho)

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "rho_m": self.rho}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Pseudorange":
        try:
            return cls(data["id"], data["rho_m"])
        except KeyError as e:
            raise ConfigError(f"Pseudorange entry missing key {e}") from None


class SolverConfig(Model):
    """Gauss-Newton settings; tolerance is a step length in meters."""

    def __init__(
        self,
        max_iterations: int = 50,
        tolerance: float = 1e-9,
        initial_guess: Optional[EcefPoint] = None,
        initial_bias: float = 0.0,
        damping: float = 0.0,
    ):
        super().__init__("solver_config")
        if not tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {tolerance}")
        if int(max_iterations) < 1:
            raise ConfigError(f"max_iterations must be at least 1, got {max_iterations}")
        if damping < 0:
            raise ConfigError(f"damping must be non-negative, got {damping}")
        self.max_iterations = int(max_iterations)
        self.tolerance = float(tolerance)
        self.initial_guess = initial_guess if initial_guess is not None else EcefPoint(0.0, 0.0, 0.0)
        self.initial_bias = float(initial_bias)
        self.damping = float(damping)

    def with_start(self, guess: EcefPoint, bias: float = 0.0) -> "SolverConfig":
        return SolverConfig(self.max_iterations, self.tolerance, guess, bias, self.damping)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_iterations": self.max_iterations,
            "tolerance_m": self.tolerance,
            "initial_guess": [self.initial_guess.x, self.initial_guess.y, self.initial_guess.z],
            "initial_bias_s": self.initial_bias,
            "damping": self.damping,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        known = {"max_iterations", "tolerance_m", "initial_guess", "initial_bias_s", "damping"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown solver keys: {sorted(unknown)}")
        guess = data.get("initial_guess")
        return cls(
            max_iterations=data.get("max_iterations", 50),
            tolerance=data.get("tolerance_m", 1e-9),
            initial_guess=EcefPoint.from_array(guess) if guess is not None else None,
            initial_bias=data.get("initial_bias_s", 0.0),
            damping=data.get("damping", 0.0),
        )


class PositionFix(Model):
    """Solved receiver position and clock bias with solver diagnostics."""

    def __init__(
        self,
        position: EcefPoint,
        clock_bias: float,
        residual_norm: float,
        iterations: int,
        converged: bool,
    ):
        super().__init__("position_fix")
        self.position = position
        self.clock_bias = float(clock_bias)
        self.residual_norm = float(residual_norm)
        self.iterations = int(iterations)
        self.converged = bool(converged)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "position": self.position.to_dict(),
            "clock_bias_s": self.clock_bias,
            "residual_norm_m": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def __str__(self) -> str:
        return f"PositionFix({self.position}, bias={self.clock_bias:.3e}s, converged={self.converged})"
