"""[[4,2,2]] error detection for the two-qubit parity classifier."""

from .code import (
    LOGICAL_X,
    LOGICAL_Z,
    STRING_TO_LOGICAL,
    SUPPORT,
    codeword,
    encode_logical,
    syndrome,
    undetectable_logical_errors,
)
from .protocol import AncillaLedger, LogicalRegister422, build_encoded_parity
from .shots import LogicalReadout, NoSurvivingShots, logical_measure_z1, readout_from_physical, run_shot, simulate
from .sites import QedNoise, noise_sites
