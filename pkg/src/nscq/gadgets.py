"""Builders for the reusable sub-circuits of the feasibility search.

Register layout convention (qubit indices ascending):

    [node regs | delay regs | sum reg | carry | adder staging | compare work | flag]

Node registers come first so the node marginal lives in the low bits of a
basis index. The staging register is reserved by the qubit-accounting
formula (delay outputs zero-extended for addition); the in-place adder used
here never touches it, so it stays |0> throughout.

All builders emit pure permutation/phase circuits, so their classical action
can be replayed exactly on basis states; that replay is the conformance
test, not any particular gate arrangement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import NscInstance
from .statevec import (QuantumCircuit, cnot, controlled_x, cp, h, mcz, x)


@dataclass(frozen=True)
class RegisterLayout:
    """Named qubit ranges for one instance's circuit."""

    bits_per_node: int
    node_regs: tuple[range, ...]
    delay_regs: tuple[range, ...]
    sum_reg: range
    carry: int
    add_ancilla: range
    cmp_ancilla: range
    flag: int
    total_qubits: int

    def __post_init__(self):
        ranges = [*self.node_regs, *self.delay_regs, self.sum_reg,
                  range(self.carry, self.carry + 1), self.add_ancilla,
                  self.cmp_ancilla, range(self.flag, self.flag + 1)]
        seen: set[int] = set()
        for r in ranges:
            for q in r:
                if q in seen:
                    raise ValueError(f"qubit {q} assigned to two registers")
                seen.add(q)
        if seen != set(range(self.total_qubits)):
            raise ValueError("registers must exactly cover the qubit range")

    @property
    def node_qubits(self) -> tuple[int, ...]:
        return tuple(q for r in self.node_regs for q in r)

    @property
    def ancilla_qubits(self) -> tuple[int, ...]:
        """Everything that must return to |0>: all but the node registers."""
        return tuple(q for q in range(self.total_qubits) if q not in set(self.node_qubits))

    def encode(self, node_values, delay_values=None, sum_value: int = 0,
               carry: int = 0, add_ancilla: int = 0, cmp_ancilla: int = 0,
               flag: int = 0) -> int:
        """Pack per-register values into a basis index."""
        index = 0
        for reg, value in zip(self.node_regs, node_values):
            index |= int(value) << reg.start
        for reg, value in zip(self.delay_regs, delay_values or ()):
            index |= int(value) << reg.start
        index |= int(sum_value) << self.sum_reg.start
        index |= int(carry) << self.carry
        if self.add_ancilla:
            index |= int(add_ancilla) << self.add_ancilla.start
        if self.cmp_ancilla:
            index |= int(cmp_ancilla) << self.cmp_ancilla.start
        index |= int(flag) << self.flag
        return index

    def decode(self, index: int) -> "DecodedRegisters":
        def val(reg: range) -> int:
            return (index >> reg.start) & ((1 << len(reg)) - 1)

        return DecodedRegisters(
            node_values=tuple(val(r) for r in self.node_regs),
            delay_values=tuple(val(r) for r in self.delay_regs),
            sum_value=val(self.sum_reg),
            carry=(index >> self.carry) & 1,
            add_ancilla=val(self.add_ancilla),
            cmp_ancilla=val(self.cmp_ancilla),
            flag=(index >> self.flag) & 1,
        )


@dataclass(frozen=True)
class DecodedRegisters:
    node_values: tuple[int, ...]
    delay_values: tuple[int, ...]
    sum_value: int
    carry: int
    add_ancilla: int
    cmp_ancilla: int
    flag: int


@dataclass(frozen=True)
class ComparatorSpec:
    """Threshold for the integer <= comparison on the sum register."""

    threshold: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("comparator width must be >= 1")
        if not 0 <= self.threshold < (1 << self.width):
            raise ValueError(
                f"threshold {self.threshold} not representable in {self.width} bits")


def _delay_width(instance: NscInstance) -> int:
    if instance.mode == "binary":
        return 1  # single-bit delays by the mode invariant
    return max(1, max(d.max_delay for d in instance.delays).bit_length())


def _sum_width(instance: NscInstance) -> int:
    if instance.mode == "binary":
        return instance.graph.num_arcs.bit_length()  # floor(log2 A) + 1
    return max(_delay_width(instance), max(1, instance.max_total_delay.bit_length()))


def layout(instance: NscInstance, *, reserve_staging: bool = True) -> RegisterLayout:
    """Assign disjoint qubit ranges for one instance.

    Pure accounting: works for any size (execution backends enforce their
    own caps). In binary mode the total reproduces
    n(bits per node)*V + A + 3*floor(log2 A) + 4.

    ``reserve_staging=False`` omits the adder staging register. No gate ever
    addresses it (the adder is in-place), so simulation backends use the
    lean form to shrink the state vector; resource reports keep the default.
    """
    n = max(1, (instance.cycle_length - 1).bit_length())
    w = _delay_width(instance)
    eps = _sum_width(instance)
    cursor = 0
    node_regs = []
    for _ in range(instance.graph.num_nodes):
        node_regs.append(range(cursor, cursor + n))
        cursor += n
    delay_regs = []
    for _ in range(instance.graph.num_arcs):
        delay_regs.append(range(cursor, cursor + w))
        cursor += w
    sum_reg = range(cursor, cursor + eps)
    cursor += eps
    carry = cursor
    cursor += 1
    add_ancilla = range(cursor, cursor + (eps if reserve_staging else 0))
    cursor = add_ancilla.stop
    cmp_ancilla = range(cursor, cursor + eps - 1)
    cursor += eps - 1
    flag = cursor
    cursor += 1
    return RegisterLayout(n, tuple(node_regs), tuple(delay_regs), sum_reg,
                          carry, add_ancilla, cmp_ancilla, flag, cursor)


def hadamard_layer(node_regs, num_qubits: int) -> QuantumCircuit:
    """One H per node-register qubit: uniform superposition of assignments."""
    return QuantumCircuit(num_qubits,
                          tuple(h(q) for r in node_regs for q in r))


def delay_oracle_for_edge(instance: NscInstance, edge_index: int,
                          lay: RegisterLayout) -> QuantumCircuit:
    """XOR-load one arc's delay value into its delay register.

    Table lookup: one multi-controlled write per (mu_i, mu_j) value pair
    with a nonzero delay, the controls negated where the pair's bits are 0.
    In binary mode every write is a Toffoli on the two endpoint node qubits
    and the delay qubit.
    """
    i, j = instance.graph.arcs[edge_index]
    dreg = lay.delay_regs[edge_index]
    spec = instance.delays[edge_index]
    gates = []
    C = instance.cycle_length
    reg_i, reg_j = lay.node_regs[i], lay.node_regs[j]
    for vi in range(C):
        for vj in range(C):
            value = spec.values[(vi - vj) % C]
            if value == 0:
                continue
            if value >= 1 << len(dreg):
                raise ValueError(
                    f"delay {value} not representable in {len(dreg)} bits")
            controls = tuple(reg_i) + tuple(reg_j)
            negated = {q for t, q in enumerate(reg_i) if not (vi >> t) & 1}
            negated |= {q for t, q in enumerate(reg_j) if not (vj >> t) & 1}
            for m in range(value.bit_length()):
                if (value >> m) & 1:
                    gates.append(controlled_x(controls, dreg[m], negated=negated))
    return QuantumCircuit(lay.total_qubits, tuple(gates))


def add_into_sum(delay_reg: range, sum_reg: range, carry: int,
                 num_qubits: int) -> QuantumCircuit:
    """Ripple the delay register into the accumulator: sum <- sum + delay.

    Each delay bit drives an in-place controlled increment of the sum bits
    at and above its weight; carries are implicit in the control
    conjunctions (a chain of half adders), applied top-down so every gate
    reads pre-addition values. On basis states the action is exactly
    (carry:sum) <- (carry:sum + delay) mod 2^(width+1); the delay register
    is untouched.
    """
    w, eps = len(delay_reg), len(sum_reg)
    if w > eps:
        raise ValueError(
            f"delay width {w} exceeds sum width {eps}: addition would overflow")
    gates = []
    for m in range(w):
        d = delay_reg[m]
        chain = list(sum_reg)[m:]
        gates.append(controlled_x((d, *chain), carry))
        for t in range(len(chain) - 1, 0, -1):
            gates.append(controlled_x((d, *chain[:t]), chain[t]))
        gates.append(cnot(d, chain[0]))
    return QuantumCircuit(num_qubits, tuple(gates))


def comparator_leq(sum_reg: range, spec: ComparatorSpec, flag: int,
                   cmp_ancilla: range, num_qubits: int) -> QuantumCircuit:
    """flag <- flag XOR [sum <= threshold]; sum and work bits restored.

    Scans from the most significant bit: work qubit e_j records "sum and
    threshold agree on every bit above j". "Greater" happens exactly at the
    first divergent bit where the threshold bit is 0 and the sum bit is 1;
    those mutually exclusive events are XORed into the flag after an X, so
    the flag accumulates NOT(sum > K) = [sum <= K]. The prefix chain is
    then uncomputed.
    """
    eps = len(sum_reg)
    if spec.width != eps:
        raise ValueError("comparator width must match the sum register")
    if len(cmp_ancilla) < eps - 1:
        raise ValueError(f"need {eps - 1} comparator work qubits, have {len(cmp_ancilla)}")
    kbit = [(spec.threshold >> t) & 1 for t in range(eps)]
    work = list(cmp_ancilla)
    prefix: dict[int, int | None] = {eps - 1: None}
    compute = []
    prev: int | None = None
    for pos, bit in enumerate(range(eps - 2, -1, -1)):
        target = work[pos]
        above = sum_reg[bit + 1]
        negated = {above} if kbit[bit + 1] == 0 else set()
        controls = (above,) if prev is None else (prev, above)
        compute.append(controlled_x(controls, target, negated=negated))
        prefix[bit] = target
        prev = target
    events = [x(flag)]
    for bit in range(eps - 1, -1, -1):
        if kbit[bit] == 1:
            continue
        anc = prefix[bit]
        controls = (sum_reg[bit],) if anc is None else (anc, sum_reg[bit])
        events.append(controlled_x(controls, flag))
    uncompute = [g.inverse() for g in reversed(compute)]
    return QuantumCircuit(num_qubits, tuple(compute + events + uncompute))


def diffuser(node_regs, num_qubits: int) -> QuantumCircuit:
    """Reflection about the uniform state on the node qubits.

    H / X conjugation around a phase flip on |1...1>; realizes
    -(2|u><u| - I), a global sign away from the canonical reflection.
    """
    qs = [q for r in node_regs for q in r]
    if not qs:
        raise ValueError("diffuser needs at least one node qubit")
    gates = [h(q) for q in qs] + [x(q) for q in qs]
    gates.append(mcz(qs))
    gates += [x(q) for q in qs] + [h(q) for q in qs]
    return QuantumCircuit(num_qubits, tuple(gates))


def forward_qft(qubits, num_qubits: int) -> QuantumCircuit:
    """Quantum Fourier transform on ``qubits`` (little-endian values).

    Maps |y> to (1/sqrt(P)) sum_z exp(2 pi i y z / P) |z>, P = 2^len(qubits).
    Controlled-phase ladder plus a final qubit-order reversal (swap = three
    CNOTs, since the gate set has no native swap).
    """
    qs = tuple(qubits)
    m = len(qs)
    if m < 1:
        raise ValueError("QFT needs at least one qubit")
    gates = []
    for i in range(m - 1, -1, -1):
        gates.append(h(qs[i]))
        for j in range(i - 1, -1, -1):
            gates.append(cp(qs[j], qs[i], math.pi / (1 << (i - j))))
    for a in range(m // 2):
        qa, qb = qs[a], qs[m - 1 - a]
        gates += [cnot(qa, qb), cnot(qb, qa), cnot(qa, qb)]
    return QuantumCircuit(num_qubits, tuple(gates))


def inverse_qft(qubits, num_qubits: int) -> QuantumCircuit:
    return forward_qft(qubits, num_qubits).inverse()
