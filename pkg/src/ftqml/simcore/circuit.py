"""A small ordered-gate circuit representation and its dense executor."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from . import gates as G
from .channels import apply_channel, apply_superoperator
from .states import PureState, QubitIndexError, apply_gate

NON_UNITARY = {"measure", "kraus", "superop", "barrier"}


@dataclass(frozen=True)
class Register:
    name: str
    start: int
    size: int

    def __contains__(self, q: int) -> bool:
        return self.start <= q < self.start + self.size

    @property
    def qubits(self) -> range:
        return range(self.start, self.start + self.size)


@dataclass
class Op:
    kind: str
    targets: tuple
    param: object = None  # parameter name, literal angle, or None
    noise: str | None = None  # attached-noise tag
    payload: object = None  # channel for "kraus"/"superop" ops
    meta: dict = field(default_factory=dict)

    @property
    def is_gate(self) -> bool:
        return self.kind not in NON_UNITARY

    def angle(self, bindings: Mapping[str, float] | None = None) -> float | None:
        if self.param is None:
            return None
        if isinstance(self.param, str):
            if bindings is None or self.param not in bindings:
                raise KeyError(f"unbound parameter {self.param!r}")
            value = bindings[self.param]
        else:
            value = self.param
        return float(value) * self.meta.get("sign", 1.0)


@dataclass
class CircuitIR:
    registers: list = field(default_factory=list)
    ops: list = field(default_factory=list)
    parameters: tuple = ()

    @property
    def n_qubits(self) -> int:
        return max((r.start + r.size for r in self.registers), default=0)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise KeyError(name)

    def register_of(self, q: int) -> str:
        for r in self.registers:
            if q in r:
                return r.name
        raise QubitIndexError(f"qubit {q} is in no register")

    def add(self, kind: str, *targets, param=None, noise=None, payload=None, **meta) -> Op:
        op = Op(kind, tuple(int(t) for t in targets), param, noise, payload, dict(meta))
        self.ops.append(op)
        return op

    def validate(self) -> None:
        declared = set(self.parameters)
        for i, op in enumerate(self.ops):
            for q in op.targets:
                if not any(q in r for r in self.registers):
                    raise QubitIndexError(f"op {i} ({op.kind}) targets undeclared qubit {q}")
            if len(set(op.targets)) != len(op.targets):
                raise QubitIndexError(f"op {i} ({op.kind}) repeats a qubit")
            if isinstance(op.param, str) and op.param not in declared:
                raise KeyError(f"op {i} binds undeclared parameter {op.param!r}")
            if op.kind in G.ARITY and G.ARITY[op.kind] != len(op.targets):
                raise ValueError(f"op {i}: {op.kind} acts on {G.ARITY[op.kind]} qubit(s)")

    def count(self) -> Counter:
        return Counter(op.kind for op in self.ops)

    def gates(self) -> Iterable[tuple[int, Op]]:
        return ((i, op) for i, op in enumerate(self.ops) if op.is_gate)


def op_unitary(op: Op, bindings=None) -> np.ndarray:
    return G.gate_matrix(op.kind, op.angle(bindings))


def run_circuit(
    ir: CircuitIR,
    state,
    bindings: Mapping[str, float] | None = None,
    after_op: Callable | None = None,
):
    """Execute every unitary and channel op of ``ir`` on ``state``.

    ``after_op(index, op, state)`` may return a replacement state; it is how
    noise attachments and trajectory injections are hooked in.  Measurement
    ops are left to the caller.
    """
    for i, op in enumerate(ir.ops):
        if op.kind in ("measure", "barrier"):
            pass
        elif op.kind == "kraus":
            state = apply_channel(_as_density(state), op.payload, op.targets)
        elif op.kind == "superop":
            state = apply_superoperator(_as_density(state), op.payload, op.targets)
        else:
            state = apply_gate(state, op_unitary(op, bindings), op.targets)
        if after_op is not None:
            new = after_op(i, op, state)
            if new is not None:
                state = new
    return state


def _as_density(state):
    if isinstance(state, PureState):
        return state.to_density()
    return state
