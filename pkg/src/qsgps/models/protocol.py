from typing import Any, Dict, List, Mapping, Optional, Sequence

from qsgps.constants import DEFAULT_SEED, DEFAULT_THRESHOLD
from qsgps.errors import ConfigError
from qsgps.models.attack import AttackModel, NoAttack
from qsgps.models.base import Model
from qsgps.models.code import PauliError, Syndrome
from qsgps.models.geometry import EcefPoint, PositionFix, Pseudorange, SatelliteEpoch, SolverConfig
from qsgps.models.hardware import HardwareProfile

DETECTION_REASONS = ("uncertified", "corrected", "jammed")


class ProtocolConfig(Model):
    """
    Everything needed to simulate one positioning task.

    ``attack`` applies to every round unless ``attacks`` names a different
    model for that satellite id.
    """

    def __init__(
        self,
        hardware: HardwareProfile,
        satellites: Sequence[SatelliteEpoch],
        truth: EcefPoint,
        truth_bias: float = 0.0,
        shots_per_term: int = 10_000,
        threshold: float = DEFAULT_THRESHOLD,
        attack: Optional[AttackModel] = None,
        attacks: Optional[Mapping[str, AttackModel]] = None,
        correction_enabled: bool = False,
        seed: int = DEFAULT_SEED,
        jamming_probability: float = 0.0,
        solver: Optional[SolverConfig] = None,
    ):
        super().__init__("protocol_config")
        satellites = list(satellites)
        if len(satellites) < 4:
            raise ConfigError(f"Need at least 4 satellites, got {len(satellites)}")
        ids = [s.id for s in satellites]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"Satellite ids repeat: {ids}")
        if int(shots_per_term) < 1:
            raise ConfigError(f"shots_per_term must be at least 1, got {shots_per_term}")
        if not 0.0 <= float(jamming_probability) <= 1.0:
            raise ConfigError(f"jamming_probability must be in [0,1], got {jamming_probability}")
        attacks = dict(attacks or {})
        stray = set(attacks) - set(ids)
        if stray:
            raise ConfigError(f"Attacks name unknown satellites: {sorted(stray)}")
        self.hardware = hardware
        self.satellites = satellites
        self.truth = truth
        self.truth_bias = float(truth_bias)
        self.shots_per_term = int(shots_per_term)
        self.threshold = float(threshold)
        self.attack = attack if attack is not None else NoAttack()
        self.attacks = attacks
        self.correction_enabled = bool(correction_enabled)
        self.seed = int(seed)
        self.jamming_probability = float(jamming_probability)
        self.solver = solver if solver is not None else SolverConfig()

    def satellite(self, sat_id: str) -> SatelliteEpoch:
        """
        Raises:
            ConfigError: If no satellite has this id
        """
        for sat in self.satellites:
            if sat.id == sat_id:
                return sat
        raise ConfigError(f"Unknown satellite id {sat_id!r}")

    def attack_for(self, sat_id: str) -> AttackModel:
        return self.attacks.get(sat_id, self.attack)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hardware": self.hardware.to_dict(),
            "satellites": [s.to_dict() for s in self.satellites],
            "truth": {"position": [self.truth.x, self.truth.y, self.truth.z], "bias_s": self.truth_bias},
            "shots_per_term": self.shots_per_term,
            "threshold": self.threshold,
            "attack": self.attack.to_dict(),
            "attacks": {k: v.to_dict() for k, v in sorted(self.attacks.items())},
            "correction_enabled": self.correction_enabled,
            "seed": self.seed,
            "jamming_probability": self.jamming_probability,
            "solver": self.solver.to_dict(),
        }


class RoundRecord(Model):
    """Outcome of one satellite's certification round."""

    def __init__(
        self,
        round_index: int,
        satellite_id: str,
        i5_estimate: Optional[float],
        i5_stderr: Optional[float],
        certified: bool,
        generation_time: float,
        syndrome: Optional[Syndrome] = None,
        correction: Optional[PauliError] = None,
        pseudorange: Optional[Pseudorange] = None,
        transmit_time: Optional[float] = None,
        receive_time: Optional[float] = None,
        discarded: bool = False,
    ):
        super().__init__("round_record")
        if pseudorange is not None and not certified:
            raise ValueError("Only certified rounds carry a pseudorange")
        self.round_index = int(round_index)
        self.satellite_id = satellite_id
        self.i5_estimate = i5_estimate
        self.i5_stderr = i5_stderr
        self.certified = bool(certified)
        self.generation_time = float(generation_time)
        self.syndrome = syndrome
        self.correction = correction
        self.pseudorange = pseudorange
        self.transmit_time = transmit_time
        self.receive_time = receive_time
        self.discarded = bool(discarded)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round_index": self.round_index,
            "satellite_id": self.satellite_id,
            "discarded": self.discarded,
            "i5_estimate": self.i5_estimate,
            "i5_stderr": self.i5_stderr,
            "certified": self.certified,
            "syndrome": self.syndrome.label() if self.syndrome is not None else None,
            "correction": self.correction.label() if self.correction is not None else None,
            "pseudorange_m": self.pseudorange.rho if self.pseudorange is not None else None,
            "transmit_time_s": self.transmit_time,
            "receive_time_s": self.receive_time,
            "generation_time_s": self.generation_time,
        }

    def __str__(self) -> str:
        return f"RoundRecord({self.round_index}, {self.satellite_id}, certified={self.certified})"


class DetectionEvent(Model):
    """A round that was uncertified, needed correction, or was jammed."""

    def __init__(self, round_index: int, satellite_id: str, reason: str):
        super().__init__("detection_event")
        if reason not in DETECTION_REASONS:
            raise ValueError(f"Unknown detection reason {reason!r}")
        self.round_index = int(round_index)
        self.satellite_id = satellite_id
        self.reason = reason

    def to_dict(self) -> Dict[str, Any]:
        return {"round_index": self.round_index, "satellite_id": self.satellite_id, "reason": self.reason}


class ProtocolReport(Model):
    def __init__(
        self,
        rounds: List[RoundRecord],
        fix: Optional[PositionFix],
        detection_events: List[DetectionEvent],
        total_simulated_time: float,
    ):
        super().__init__("protocol_report")
        self.rounds = list(rounds)
        self.fix = fix
        self.detection_events = list(detection_events)
        self.total_simulated_time = float(total_simulated_time)

    @property
    def certified_rounds(self) -> List[RoundRecord]:
        return [r for r in self.rounds if r.certified]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rounds": [r.to_dict() for r in self.rounds],
            "fix": self.fix.to_dict() if self.fix is not None else None,
            "detection_events": [e.to_dict() for e in self.detection_events],
            "total_simulated_time_s": self.total_simulated_time,
        }

    def __str__(self) -> str:
        return (
            f"ProtocolReport({len(self.certified_rounds)}/{len(self.rounds)} certified, "
            f"fix={'yes' if self.fix is not None else 'no'})"
        )
