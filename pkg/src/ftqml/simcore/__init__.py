"""Dense state-vector and density-matrix simulation."""

from dataclasses import dataclass

from . import gates
from .channels import (
    KrausChannel,
    SuperOperatorMatrix,
    apply_channel,
    apply_superoperator,
    channel_to_superoperator,
    devectorize,
    embed_superoperator,
    exp_lindbladian,
    is_cptp,
    superoperator_log,
    superoperator_to_choi,
    vectorize,
)
from .circuit import CircuitIR, Op, Register, op_unitary, run_circuit
from .sampling import measure_z_expectation, sample_bitstrings, sample_indices, shot_uniforms
from .states import (
    DensityMatrix,
    DimensionMismatch,
    PureState,
    QubitIndexError,
    apply_gate,
    bits_to_index,
    embed_operator,
    format_bitstring,
    index_to_bits,
    partial_trace,
    reduced_probabilities,
)


@dataclass(frozen=True)
class ShotOutcome:
    """One measured shot: physical bitstring index plus syndrome flags."""

    bitstring: int
    syndrome_flags: tuple = ()

    @property
    def discarded(self) -> bool:
        return any(self.syndrome_flags)


__all__ = [
    "gates",
    "CircuitIR",
    "DensityMatrix",
    "DimensionMismatch",
    "KrausChannel",
    "Op",
    "PureState",
    "QubitIndexError",
    "Register",
    "ShotOutcome",
    "SuperOperatorMatrix",
    "apply_channel",
    "apply_gate",
    "apply_superoperator",
    "bits_to_index",
    "channel_to_superoperator",
    "devectorize",
    "embed_operator",
    "embed_superoperator",
    "exp_lindbladian",
    "format_bitstring",
    "index_to_bits",
    "is_cptp",
    "measure_z_expectation",
    "op_unitary",
    "partial_trace",
    "reduced_probabilities",
    "run_circuit",
    "sample_bitstrings",
    "sample_indices",
    "shot_uniforms",
    "superoperator_log",
    "superoperator_to_choi",
    "vectorize",
]
