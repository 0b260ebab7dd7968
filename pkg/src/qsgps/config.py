"""
JSON inputs: hardware profiles, attack descriptions, positioning scenarios
and protocol configurations. See docs/schemas.md for the file formats.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from qsgps import adversary, resource
from qsgps.errors import AttackModelError, ConfigError
from qsgps.models.attack import (
    AttackModel,
    Dephasing,
    Depolarizing,
    NoAttack,
    PauliAttack,
    StateReplacement,
)
from qsgps.models.base import complex_from_dict
from qsgps.models.code import PauliError
from qsgps.models.geometry import EcefPoint, Pseudorange, SatelliteEpoch, SolverConfig
from qsgps.models.hardware import HardwareProfile
from qsgps.models.protocol import ProtocolConfig
from qsgps.models.state import DensityMatrix

logger = logging.getLogger('qsgps.config')

Scenario = Tuple[List[SatelliteEpoch], EcefPoint, float, Optional[List[Pseudorange]], SolverConfig]


def load_json(path: Union[str, Path]) -> Any:
    """
    Read a JSON file.

    Raises:
        ConfigError: If the file cannot be read or parsed
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}") from e
    logger.debug(f"Loaded {path}")
    return data


def _require_mapping(data: Any, what: str) -> Mapping[str, Any]:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{what} must be a JSON object, got {type(data).__name__}")
    return data


def _check_keys(data: Mapping[str, Any], allowed: set, what: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"Unknown {what} keys: {sorted(unknown)}")


def parse_hardware(data: Any) -> HardwareProfile:
    """A built-in profile name, or an inline profile object."""
    if isinstance(data, str):
        return resource.get_profile(data)
    return HardwareProfile.from_dict(_require_mapping(data, "hardware"))


def _attack(data: Mapping[str, Any]) -> AttackModel:
    kind = data.get("type")
    if kind == "none":
        _check_keys(data, {"type"}, "attack")
        return NoAttack()
    if kind == "pauli":
        _check_keys(data, {"type", "errors"}, "attack")
        return PauliAttack([PauliError.from_dict(e) for e in data.get("errors", [])])
    if kind == "depolarizing":
        _check_keys(data, {"type", "p", "qubits"}, "attack")
        return Depolarizing(data["p"], data.get("qubits", (1, 2, 3, 4, 5)))
    if kind == "dephasing":
        _check_keys(data, {"type", "qubits"}, "attack")
        return Dephasing(data["qubits"])
    if kind == "replacement":
        _check_keys(data, {"type", "state", "density_matrix", "name"}, "attack")
        if data.get("state") == "classical":
            return adversary.classical_replacement_attack()
        if "density_matrix" not in data:
            raise ConfigError("Replacement attack needs state='classical' or a density_matrix")
        return StateReplacement(DensityMatrix(complex_from_dict(data["density_matrix"])), data.get("name", "custom"))
    raise ConfigError(f"Unknown attack type {kind!r}")


def parse_attack(data: Any) -> AttackModel:
    """
    Build an AttackModel from its JSON object.

    Raises:
        ConfigError: On unknown types, missing fields or invalid parameters
    """
    data = _require_mapping(data, "attack")
    try:
        return _attack(data)
    except ConfigError:
        raise
    except (AttackModelError, KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid attack {dict(data)}: {e}") from e


def parse_attack_list(data: Any) -> List[AttackModel]:
    """A list of attack objects, or an object with an ``attacks`` list."""
    if isinstance(data, Mapping):
        _check_keys(data, {"attacks"}, "attack file")
        data = data.get("attacks")
    if not isinstance(data, list):
        raise ConfigError("Attack file must hold a list of attacks")
    return [parse_attack(item) for item in data]


def _truth(data: Any) -> Tuple[EcefPoint, float]:
    data = _require_mapping(data, "truth")
    _check_keys(data, {"position", "bias_s"}, "truth")
    try:
        return EcefPoint.from_array(data["position"]), float(data.get("bias_s", 0.0))
    except KeyError as e:
        raise ConfigError(f"truth missing key {e}") from None


def _satellites(data: Any) -> List[SatelliteEpoch]:
    if not isinstance(data, list):
        raise ConfigError("satellites must be a list")
    return [SatelliteEpoch.from_dict(_require_mapping(item, "satellite")) for item in data]


def parse_scenario(data: Any) -> Scenario:
    """
    Positioning scenario: satellites, truth, optional measured pseudoranges
    and optional solver settings. Without pseudoranges the forward model is
    used by the caller.

    Returns:
        (satellites, truth, truth_bias, pseudoranges or None, solver config)
    """
    data = _require_mapping(data, "scenario")
    _check_keys(data, {"satellites", "truth", "pseudoranges", "solver"}, "scenario")
    try:
        sats = _satellites(data["satellites"])
        truth, bias = _truth(data["truth"])
        ranges = None
        if data.get("pseudoranges") is not None:
            ranges = [Pseudorange.from_dict(_require_mapping(r, "pseudorange")) for r in data["pseudoranges"]]
        solver = SolverConfig.from_dict(_require_mapping(data.get("solver", {}), "solver"))
    except KeyError as e:
        raise ConfigError(f"scenario missing key {e}") from None
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid scenario: {e}") from e
    return sats, truth, bias, ranges, solver


_PROTOCOL_KEYS = {
    "hardware", "satellites", "truth", "shots_per_term", "threshold", "attack", "attacks",
    "correction_enabled", "seed", "jamming_probability", "solver",
}


def parse_protocol_config(data: Any, seed: Optional[int] = None) -> ProtocolConfig:
    """
    Build a ProtocolConfig. An explicit ``seed`` overrides the file's.

    Raises:
        ConfigError: On unknown keys or invalid values
    """
    data = _require_mapping(data, "protocol config")
    _check_keys(data, _PROTOCOL_KEYS, "protocol config")
    try:
        truth, bias = _truth(data["truth"])
        attacks: Dict[str, AttackModel] = {
            str(k): parse_attack(v) for k, v in _require_mapping(data.get("attacks", {}), "attacks").items()
        }
        kwargs: Dict[str, Any] = {}
        for key in ("shots_per_term", "threshold", "correction_enabled", "jamming_probability"):
            if key in data:
                kwargs[key] = data[key]
        if seed is not None:
            kwargs["seed"] = seed
        elif "seed" in data:
            kwargs["seed"] = data["seed"]
        return ProtocolConfig(
            hardware=parse_hardware(data.get("hardware", "ideal")),
            satellites=_satellites(data["satellites"]),
            truth=truth,
            truth_bias=bias,
            attack=parse_attack(data["attack"]) if "attack" in data else None,
            attacks=attacks,
            solver=SolverConfig.from_dict(_require_mapping(data.get("solver", {}), "solver")),
            **kwargs,
        )
    except KeyError as e:
        raise ConfigError(f"protocol config missing key {e}") from None
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid protocol config: {e}") from e
