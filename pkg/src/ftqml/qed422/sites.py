"""Where the two Pauli noise models insert errors in an encoded circuit."""

from __future__ import annotations

from dataclasses import dataclass

from ..noisechan import NoiseSite, PauliInjectionSpec
from ..simcore.circuit import CircuitIR

MODELS = ("gate", "env")


@dataclass(frozen=True)
class QedNoise:
    """``gate``: a Pauli after every gate; ``env``: a sweep over all live qubits every ``cadence`` gates."""

    model: str = "gate"
    p: float = 0.0
    f_anc: float = 1.0
    two_qubit_multiplier: float = 2.0
    cadence: int = 4

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"noise model must be one of {MODELS}")
        self.injection  # range checks

    @property
    def injection(self) -> PauliInjectionSpec:
        return PauliInjectionSpec(self.p, self.two_qubit_multiplier, self.cadence, self.f_anc)

    def site_rate(self, site: NoiseSite) -> float:
        return self.injection.site_rate(site.two_qubit, site.ancilla)


def noise_sites(ir: CircuitIR, noise: QedNoise) -> list:
    """Noise sites in circuit order; syndrome qubits never receive errors."""
    syndrome = ir.register("syndrome")
    ancilla = ir.register("ancilla")
    physical = ir.register("physical")
    sites = []
    seen_anc: list = []
    gates = 0
    for i, op in enumerate(ir.ops):
        for q in op.targets:
            if q in ancilla and q not in seen_anc:
                seen_anc.append(q)
        if not op.is_gate:
            continue
        gates += 1
        if noise.model == "gate":
            kind = "gate2" if len(op.targets) == 2 else "gate1"
            for q in op.targets:
                if q not in syndrome:
                    sites.append(NoiseSite(i, q, kind, q in ancilla))
        elif gates % noise.cadence == 0:
            for q in list(physical.qubits) + seen_anc:
                sites.append(NoiseSite(i, q, "env", q in ancilla))
    return sites


def site_block(ir: CircuitIR, site: NoiseSite) -> str:
    return ir.ops[site.op_index].meta.get("block", "main")
