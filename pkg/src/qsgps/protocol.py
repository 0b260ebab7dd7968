"""
End-to-end positioning task: noisy code generation, attack injection,
optional correction, I5 certification from samples, timestamps and the
position fix.

Each satellite broadcasts its own five-qubit code to the receiver, one
round per satellite. A single code shared by four satellites and the
receiver is the other reading of the protocol; it is not simulated.
"""

import logging
from functools import lru_cache
from typing import Optional

import numpy as np
from python_debug import debug_trace

from qsgps import adversary, bell, code5, geoposition, resource
from qsgps.constants import SPEED_OF_LIGHT
from qsgps.models.hardware import HardwareProfile, NoiseModel
from qsgps.models.protocol import DetectionEvent, ProtocolConfig, ProtocolReport, RoundRecord
from qsgps.models.state import DensityMatrix

logger = logging.getLogger('qsgps.protocol')


@lru_cache(maxsize=16)
def _prepared(p_1q: float, p_2q: float) -> DensityMatrix:
    return code5.encode_density(1.0, 0.0, NoiseModel(p_1q, p_2q))


def prepared_state(profile: HardwareProfile) -> DensityMatrix:
    """|0_L> generated on the profile's noisy gates."""
    noise = resource.noise_channels_from_profile(profile)
    return _prepared(noise.p_1q, noise.p_2q)


def generation_time(profile: HardwareProfile) -> float:
    return resource.total_time(profile, resource.circuit_cost(code5.encoding_circuit()))


@debug_trace()
def run_round(
    cfg: ProtocolConfig,
    satellite_id: str,
    rng: np.random.Generator,
    round_index: int = 0,
) -> RoundRecord:
    """
    Generate, tamper, optionally correct, and certify one satellite's code.

    A certified round gets the forward-model pseudorange for the configured
    truth, with receive_time = transmit_time + rho/c.

    Raises:
        ConfigError: If the satellite id is not in the config
    """
    sat = cfg.satellite(satellite_id)
    t_gen = generation_time(cfg.hardware)
    if cfg.jamming_probability > 0.0 and rng.random() < cfg.jamming_probability:
        logger.warning(f"Round {round_index} ({satellite_id}) jammed, discarded")
        return RoundRecord(round_index, satellite_id, None, None, False, t_gen, discarded=True)

    state = adversary.apply_attack(prepared_state(cfg.hardware), cfg.attack_for(satellite_id))
    syndrome = correction = None
    if cfg.correction_enabled:
        state, syndrome, correction = code5.measure_and_correct(state, rng)

    estimate = bell.sample_estimate(
        bell.builtin_functional("i5"),
        bell.optimal_strategy("i5"),
        state,
        cfg.shots_per_term,
        rng,
    )
    certified = estimate.estimate >= cfg.threshold
    pseudorange = transmit = receive = None
    if certified:
        (pseudorange,) = geoposition.forward_pseudoranges(cfg.truth, cfg.truth_bias, [sat])
        transmit = sat.transmit_time
        receive = transmit + pseudorange.rho / SPEED_OF_LIGHT
    logger.debug(
        f"Round {round_index} ({satellite_id}): I5 = {estimate.estimate:.4f} +- {estimate.stderr:.4f}, "
        f"certified={certified}"
    )
    return RoundRecord(
        round_index,
        satellite_id,
        estimate.estimate,
        estimate.stderr,
        certified,
        t_gen,
        syndrome=syndrome,
        correction=correction,
        pseudorange=pseudorange,
        transmit_time=transmit,
        receive_time=receive,
    )


def _event_for(record: RoundRecord) -> Optional[DetectionEvent]:
    if record.discarded:
        return DetectionEvent(record.round_index, record.satellite_id, "jammed")
    if not record.certified:
        return DetectionEvent(record.round_index, record.satellite_id, "uncertified")
    if record.correction is not None:
        return DetectionEvent(record.round_index, record.satellite_id, "corrected")
    return None


@debug_trace()
def run_task(cfg: ProtocolConfig, rng: Optional[np.random.Generator] = None) -> ProtocolReport:
    """
    One round per configured satellite, then a fix from the certified ones.

    Every round draws from its own child of the master generator, so the
    report depends only on the config and seed.

    Args:
        cfg: Task configuration
        rng: Master generator; defaults to one seeded with ``cfg.seed``

    Returns:
        ProtocolReport; ``fix`` is None unless at least four distinct
        satellites certified

    Raises:
        SolverError: Propagated from the position solver
    """
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    children = rng.spawn(len(cfg.satellites))
    rounds = [
        run_round(cfg, sat.id, child, index)
        for index, (sat, child) in enumerate(zip(cfg.satellites, children))
    ]
    events = [e for e in (_event_for(r) for r in rounds) if e is not None]

    certified = {r.satellite_id: r for r in rounds if r.certified}
    fix = None
    if len(certified) >= 4:
        sats = [s for s in cfg.satellites if s.id in certified]
        fix = geoposition.solve_fix(sats, [certified[s.id].pseudorange for s in sats], cfg.solver)
    else:
        logger.warning(f"Only {len(certified)} certified satellite(s); no fix")

    total = sum(r.generation_time for r in rounds if not r.discarded)
    report = ProtocolReport(rounds, fix, events, total)
    logger.info(f"{report}: {len(events)} detection event(s)")
    return report
