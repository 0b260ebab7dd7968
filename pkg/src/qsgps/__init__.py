"""
qsgps: simulator for device-independent, quantum-secured satellite
positioning.

Satellites certify each broadcast five-qubit code with a five-party Bell
test before its timestamp is trusted; certified pseudoranges feed a
Gauss-Newton position and clock-bias solver.

Modules:
    qsim         dense statevector and density-matrix kernels
    code5        five-qubit code, encoder, syndromes and correction
    bell         CHSH and I5 functionals, bounds, SOS certificates, sampling
    adversary    attack models and their effect on I5
    geoposition  pseudorange forward model and position solver
    resource     gate costs, total time and fidelity per platform
    protocol     end-to-end positioning task
    cli          command-line entry point
"""

from qsgps.errors import (
    ConfigError,
    ConvergenceError,
    DegenerateGeometryError,
    QsgpsError,
    SolverError,
)
from qsgps.models.attack import (
    Dephasing,
    Depolarizing,
    NoAttack,
    PauliAttack,
    StateReplacement,
)
from qsgps.models.geometry import EcefPoint, PositionFix, Pseudorange, SatelliteEpoch, SolverConfig
from qsgps.models.hardware import HardwareProfile
from qsgps.models.protocol import ProtocolConfig, ProtocolReport
from qsgps.models.state import DensityMatrix, Statevector

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DegenerateGeometryError",
    "DensityMatrix",
    "Dephasing",
    "Depolarizing",
    "EcefPoint",
    "HardwareProfile",
    "NoAttack",
    "PauliAttack",
    "PositionFix",
    "ProtocolConfig",
    "ProtocolReport",
    "Pseudorange",
    "QsgpsError",
    "SatelliteEpoch",
    "SolverConfig",
    "SolverError",
    "StateReplacement",
    "Statevector",
]
