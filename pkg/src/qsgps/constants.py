"""Physical constants and numerical tolerances shared across modules."""

import math

# Exact by SI definition, m/s
SPEED_OF_LIGHT = 299_792_458.0

NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-12
HERMITIAN_ATOL = 1e-12
CHANNEL_ATOL = 1e-10
DICHOTOMIC_ATOL = 1e-10
IMAG_ATOL = 1e-10
PSD_ATOL = 1e-10

MAX_QUBITS = 10

CODE_QUBITS = 5

CHSH_CLASSICAL_BOUND = 2.0
CHSH_QUANTUM_BOUND = 2.0 * math.sqrt(2.0)
I5_CLASSICAL_BOUND = 5.0
I5_QUANTUM_BOUND = 4.0 * math.sqrt(2.0) + 1.0

DEFAULT_THRESHOLD = I5_CLASSICAL_BOUND

DEFAULT_SEED = 20240601
