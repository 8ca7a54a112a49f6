"""Circuit builder for logical operations on one [[4,2,2]] block.

A logical rotation ``R_A(theta) (x) R_A(theta)`` is mediated by a fresh pair
of ancillas that copy the logical computational-basis value.  For the X and Y
axes the ancillas temporarily flip the block back to ``|00>_L`` (controlled
logical-X gates), rotate themselves, and hand the result back:

1. initialise the new pair from the input bits, or copy the newest pair;
2. clear older ancillas with CNOTs controlled by the new pair;
3. controlled logical X: ``n0 -> q1, q3`` and ``n1 -> q2, q3``;
4. rotate ``n0`` and ``n1``;
5. undo step 3;
6. undo step 2.

Z rotations only need steps 1 and 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..simcore.circuit import CircuitIR, Register

N_PHYSICAL = 4
PARITY_ANCILLAS = 6
LX_TARGETS = {0: (1, 3), 1: (2, 3)}  # logical qubit (0-based) -> physical X support


@dataclass
class LedgerRecord:
    stage: str  # "rx", "ry", "rz" or "cnot"
    ancillas: tuple
    init_from: object  # "input" or the ancilla pair copied in step 1
    linked: tuple = ()  # (new ancilla, older ancilla) CNOTs of step 2
    op_span: tuple = (0, 0)


@dataclass
class AncillaLedger:
    records: list = field(default_factory=list)
    mirrors: dict = field(default_factory=dict)  # ancilla -> logical qubit index it copies

    def pairs(self) -> list:
        return [r.ancillas for r in self.records if r.stage != "cnot"]

    def expected_cnots(self, rec: LedgerRecord) -> list:
        """The CNOT (control, target) sequence a record prescribes, in order."""
        out = []
        n0, n1 = rec.ancillas if rec.stage != "cnot" else (None, None)
        if rec.stage == "cnot":
            return [pair for pair in rec.linked]
        if rec.init_from != "input":
            p0, p1 = rec.init_from
            out += [(p0, n0), (p1, n1)]
        if rec.stage == "rz":
            return out
        step2 = list(rec.linked)
        step3 = [(n0, t) for t in LX_TARGETS[0]] + [(n1, t) for t in LX_TARGETS[1]]
        out += step2 + step3 + step3[::-1] + step2[::-1]
        return out


class LogicalRegister422:
    """Builds a :class:`CircuitIR` on ``4 + n_ancillas + 2 * rounds`` qubits."""

    def __init__(self, n_ancillas: int = PARITY_ANCILLAS, rounds: int = 0, param: str = "theta"):
        if not 0 <= rounds <= 5:
            raise ValueError("rounds must lie in 0..5")
        self.n_ancillas = n_ancillas
        self.rounds = rounds
        self.param = param
        self.physical = tuple(range(N_PHYSICAL))
        self.ancilla_pool = tuple(range(N_PHYSICAL, N_PHYSICAL + n_ancillas))
        s0 = N_PHYSICAL + n_ancillas
        self.syndrome_pool = tuple(range(s0, s0 + 2 * rounds))
        self.ir = CircuitIR(
            [
                Register("physical", 0, N_PHYSICAL),
                Register("ancilla", N_PHYSICAL, n_ancillas),
                Register("syndrome", s0, 2 * rounds),
            ],
            [],
            (param,),
        )
        self.rotation_ancillas: list = []
        self.syndrome_qubits: list = []
        self.ledger = AncillaLedger()
        self.input_bits = (0, 0)
        self._rotations = 0
        self.block = "main"

    @property
    def round_count(self) -> int:
        return len(self.syndrome_qubits) // 2

    @property
    def n_qubits(self) -> int:
        return self.ir.n_qubits

    def _add(self, kind, *targets, **kw):
        stage = kw.pop("stage", None)
        return self.ir.add(kind, *targets, block=self.block, stage=stage, **kw)

    def _fresh_pair(self) -> tuple:
        k = len(self.rotation_ancillas)
        if k + 2 > self.n_ancillas:
            raise ValueError("no free rotation ancillas left")
        pair = self.ancilla_pool[k:k + 2]
        self.rotation_ancillas += list(pair)
        return pair

    # -- logical operations ------------------------------------------------

    def encode(self, b1: int, b2: int) -> None:
        """Prepare ``|b1 b2>_L``."""
        self.input_bits = (int(b1), int(b2))
        self._add("h", 0, stage="encode")
        for t in (1, 2, 3):
            self._add("cnot", 0, t, stage="encode")
        for j, b in enumerate(self.input_bits):
            if b:
                for t in LX_TARGETS[j]:
                    self._add("x", t, stage="encode")

    def _init_pair(self, pair: tuple, stage: str):
        pairs = self.ledger.pairs()
        if not pairs:
            for j, b in enumerate(self.input_bits):
                if b:
                    self._add("x", pair[j], stage=stage, step=1)
            return "input"
        prev = pairs[-1]
        for j in range(2):
            self._add("cnot", prev[j], pair[j], stage=stage, step=1)
        return prev

    def logical_double_rotation(self, axis: str) -> tuple:
        axis = axis.upper()
        if axis == "Z":
            return self.logical_rz_pair()
        if axis not in ("X", "Y"):
            raise ValueError("axis must be X, Y or Z")
        stage = "r" + axis.lower()
        start = len(self.ir.ops)
        pair = self._fresh_pair()
        init = self._init_pair(pair, stage)
        older = [a for a in self.rotation_ancillas if a not in pair]
        linked = tuple((pair[self.ledger.mirrors[a]], a) for a in older)
        for c, t in linked:
            self._add("cnot", c, t, stage=stage, step=2)
        step3 = [(pair[j], t) for j in range(2) for t in LX_TARGETS[j]]
        for c, t in step3:
            self._add("cnot", c, t, stage=stage, step=3)
        for j in range(2):
            self._rotation(stage, pair[j])
        for c, t in reversed(step3):
            self._add("cnot", c, t, stage=stage, step=5)
        for c, t in reversed(linked):
            self._add("cnot", c, t, stage=stage, step=6)
        self.ledger.mirrors.update({pair[0]: 0, pair[1]: 1})
        self.ledger.records.append(LedgerRecord(stage, pair, init, linked, (start, len(self.ir.ops))))
        return pair

    def logical_rz_pair(self) -> tuple:
        start = len(self.ir.ops)
        pair = self._fresh_pair()
        init = self._init_pair(pair, "rz")
        for j in range(2):
            self._rotation("rz", pair[j])
        self.ledger.mirrors.update({pair[0]: 0, pair[1]: 1})
        self.ledger.records.append(LedgerRecord("rz", pair, init, (), (start, len(self.ir.ops))))
        return pair

    def _rotation(self, stage: str, q: int) -> None:
        self._add(stage, q, param=self.param, stage=stage, step=4, rotation=self._rotations)
        self._rotations += 1

    def logical_cnot(self) -> None:
        """Logical CNOT (control 1, target 2): ``SWAP(q0, q1)`` then re-sync the ancilla copies."""
        start = len(self.ir.ops)
        self._add("swap", 0, 1, stage="cnot")
        linked = tuple(self.ledger.pairs())
        for a0, a1 in linked:
            self._add("cnot", a0, a1, stage="cnot")
        self.ledger.records.append(LedgerRecord("cnot", (), None, linked, (start, len(self.ir.ops))))

    def logical_z1(self) -> None:
        for q in (0, 1):
            self._add("z", q, stage="z1")

    def syndrome_round(self) -> tuple:
        """Append one XXXX and one ZZZZ check on two fresh, noiseless syndrome qubits."""
        k = self.round_count
        if k >= self.rounds:
            raise ValueError(f"register was built for {self.rounds} rounds")
        sx, sz = self.syndrome_pool[2 * k:2 * k + 2]
        self.syndrome_qubits += [sx, sz]
        self.block = f"round{k + 1}"
        self._add("h", sx, stage="syndrome")
        for q in self.physical:
            self._add("cnot", sx, q, stage="syndrome")
        self._add("h", sx, stage="syndrome")
        self._add("measure", sx, stage="syndrome", round=k + 1, check="X")
        for q in self.physical:
            self._add("cnot", q, sz, stage="syndrome")
        self._add("measure", sz, stage="syndrome", round=k + 1, check="Z")
        return sx, sz

    def measure_physical(self) -> None:
        self.block = "final"
        for q in self.physical:
            self._add("measure", q, stage="readout")

    def replay_ok(self) -> bool:
        """Check that every ledger record matches the CNOTs actually emitted."""
        for rec in self.ledger.records:
            a, b = rec.op_span
            got = [op.targets for op in self.ir.ops[a:b] if op.kind == "cnot"]
            if got != [tuple(p) for p in self.ledger.expected_cnots(rec)]:
                return False
        return True


def build_encoded_parity(bits, rounds: int = 0) -> LogicalRegister422:
    """Logical parity circuit on input ``bits`` followed by ``rounds`` syndrome rounds."""
    reg = LogicalRegister422(PARITY_ANCILLAS, rounds)
    reg.encode(*bits)
    reg.logical_double_rotation("X")
    reg.logical_rz_pair()
    reg.logical_cnot()
    reg.logical_double_rotation("Y")
    reg.logical_z1()
    for _ in range(rounds):
        reg.syndrome_round()
    reg.measure_physical()
    reg.ir.validate()
    return reg
