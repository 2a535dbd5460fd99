"""Dense complex state-vector engine for a small permutation/phase/H gate set.

Amplitudes are stored little-endian: bit q of a basis index is the value of
qubit q. Gates act in place on reshaped views of the amplitude array (no
2^n x 2^n matrices are ever formed), which keeps a gate application at one
pass over the affected half of the array.

Determinism: every stochastic operation (sampling, noise trajectories) takes
a 64-bit seed and uses numpy's PCG64 generator, so identical seeds give
identical results on any platform running the same numpy.

Capacity: the dense backend is capped at MAX_QUBITS (one state vector of
2^26 complex128 amplitudes is 1 GiB).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CapacityError

MAX_QUBITS = 26

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_X_KINDS = frozenset({"X", "CNOT", "CCX", "MCX"})
_Z_KINDS = frozenset({"Z", "MCZ"})
GATE_KINDS = _X_KINDS | _Z_KINDS | frozenset({"H", "CP"})

# kind -> required control count (None = any)
_CONTROL_ARITY = {"H": 0, "X": 0, "Z": 0, "CNOT": 1, "CCX": 2, "CP": 1,
                  "MCX": None, "MCZ": None}


@dataclass(frozen=True)
class GateOp:
    """One gate: a kind tag, control/target qubits, and an optional CP angle.

    ``negated_controls`` is the subset of controls that are active on |0>
    instead of |1> (equivalent to conjugating those controls with X).
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    negated_controls: frozenset[int] = frozenset()
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "negated_controls", frozenset(int(q) for q in self.negated_controls))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.targets) != 1:
            raise ValueError(f"{self.kind} takes exactly one target")
        arity = _CONTROL_ARITY[self.kind]
        if arity is not None and len(self.controls) != arity:
            raise ValueError(f"{self.kind} takes {arity} control(s), got {len(self.controls)}")
        if set(self.controls) & set(self.targets):
            raise ValueError("controls and targets must be disjoint")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError("duplicate control qubit")
        if not self.negated_controls <= set(self.controls):
            raise ValueError("negated_controls must be a subset of controls")
        if any(q < 0 for q in self.controls + self.targets):
            raise ValueError("negative qubit index")
        if self.angle and self.kind != "CP":
            raise ValueError("only CP carries an angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def inverse(self) -> "GateOp":
        if self.kind == "CP":
            return replace(self, angle=-self.angle)
        return self  # H, X, Z, CNOT, CCX, MCX, MCZ are self-inverse


def h(q: int) -> GateOp:
    return GateOp("H", (q,))


def x(q: int) -> GateOp:
    return GateOp("X", (q,))


def z(q: int) -> GateOp:
    return GateOp("Z", (q,))


def cnot(control: int, target: int, negated=()) -> GateOp:
    return GateOp("CNOT", (target,), (control,), frozenset(negated))


def ccx(c1: int, c2: int, target: int, negated=()) -> GateOp:
    return GateOp("CCX", (target,), (c1, c2), frozenset(negated))


def mcx(controls, target: int, negated=()) -> GateOp:
    return GateOp("MCX", (target,), tuple(controls), frozenset(negated))


def controlled_x(controls, target: int, negated=()) -> GateOp:
    """X on target conditioned on ``controls``; picks the tightest kind tag."""
    controls = tuple(controls)
    kind = {0: "X", 1: "CNOT", 2: "CCX"}.get(len(controls), "MCX")
    return GateOp(kind, (target,), controls, frozenset(negated))


def mcz(qubits, negated=()) -> GateOp:
    """Phase flip on the all-active pattern of ``qubits`` (symmetric gate)."""
    qubits = tuple(qubits)
    if not qubits:
        raise ValueError("MCZ needs at least one qubit")
    if len(qubits) == 1:
        return GateOp("Z", qubits)
    return GateOp("MCZ", (qubits[-1],), qubits[:-1], frozenset(negated))


def cp(control: int, target: int, angle: float) -> GateOp:
    return GateOp("CP", (target,), (control,), angle=angle)


@dataclass(frozen=True)
class QuantumCircuit:
    """Immutable ordered gate sequence over a fixed qubit count."""

    num_qubits: int
    gates: tuple[GateOp, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(f"gate {g.kind} on {g.qubits} exceeds {self.num_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "QuantumCircuit") -> "QuantumCircuit":
        if self.num_qubits != other.num_qubits:
            raise ValueError("cannot concatenate circuits with different qubit counts")
        return QuantumCircuit(self.num_qubits, self.gates + other.gates)

    def inverse(self) -> "QuantumCircuit":
        return QuantumCircuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)))


@dataclass
class StateVector:
    """2^num_qubits complex amplitudes, little-endian basis indexing."""

    num_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


def zero_state(num_qubits: int) -> StateVector:
    """The all-zeros computational basis state |0...0>."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    if num_qubits > MAX_QUBITS:
        raise CapacityError(
            f"{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit dense-backend cap")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def basis_state(num_qubits: int, index: int) -> StateVector:
    state = zero_state(num_qubits)
    if not 0 <= index < 1 << num_qubits:
        raise ValueError("basis index out of range")
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def _involved_view(amps: np.ndarray, n: int, qubits) -> tuple[np.ndarray, dict[int, int]]:
    """Reshape so each involved qubit gets its own length-2 axis.

    Untouched qubit stretches collapse into single axes, which keeps the
    view low-dimensional (fast strided slicing) regardless of n.
    """
    shape: list[int] = []
    axis_of: dict[int, int] = {}
    prev = n
    for q in sorted(qubits, reverse=True):
        seg = prev - q - 1
        if seg > 0:
            shape.append(1 << seg)
        shape.append(2)
        axis_of[q] = len(shape) - 1
        prev = q
    if prev > 0:
        shape.append(1 << prev)
    return amps.reshape(shape), axis_of


def _selector(gate: GateOp, axis_of: dict[int, int], ndim: int) -> list:
    sel: list = [slice(None)] * ndim
    for c in gate.controls:
        sel[axis_of[c]] = 0 if c in gate.negated_controls else 1
    return sel


def _apply_inplace(amps: np.ndarray, n: int, gate: GateOp) -> None:
    kind = gate.kind
    if kind == "H":
        view = amps.reshape(-1, 2, 1 << gate.targets[0])
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = (a + b) * _INV_SQRT2
        view[:, 1, :] = (a - b) * _INV_SQRT2
    elif kind in _X_KINDS:
        view, axis_of = _involved_view(amps, n, gate.qubits)
        sel = _selector(gate, axis_of, view.ndim)
        ax = axis_of[gate.targets[0]]
        lo, hi = list(sel), list(sel)
        lo[ax], hi[ax] = 0, 1
        lo, hi = tuple(lo), tuple(hi)
        tmp = view[lo].copy()
        view[lo] = view[hi]
        view[hi] = tmp
    elif kind in _Z_KINDS:
        view, axis_of = _involved_view(amps, n, gate.qubits)
        sel = _selector(gate, axis_of, view.ndim)
        sel[axis_of[gate.targets[0]]] = 1
        view[tuple(sel)] *= -1.0
    elif kind == "CP":
        view, axis_of = _involved_view(amps, n, gate.qubits)
        sel = _selector(gate, axis_of, view.ndim)
        sel[axis_of[gate.targets[0]]] = 1
        view[tuple(sel)] *= np.exp(1j * gate.angle)
    else:  # pragma: no cover - kinds are validated at construction
        raise ValueError(f"unknown gate kind {kind!r}")


def _check_gate_fits(state: StateVector, gate: GateOp) -> None:
    if max(gate.qubits) >= state.num_qubits:
        raise ValueError(f"gate {gate.kind} on {gate.qubits} exceeds {state.num_qubits} qubits")


def apply(state: StateVector, gate: GateOp) -> StateVector:
    """Return the state transformed by one gate (input left untouched)."""
    _check_gate_fits(state, gate)
    out = state.copy()
    _apply_inplace(out.amplitudes, out.num_qubits, gate)
    return out


def run_circuit(state: StateVector, circuit: QuantumCircuit) -> StateVector:
    """Apply every gate in order; checks the norm afterwards."""
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit has {circuit.num_qubits} qubits, state has {state.num_qubits}")
    out = state.copy()
    for gate in circuit.gates:
        _apply_inplace(out.amplitudes, out.num_qubits, gate)
    if abs(out.norm() - 1.0) > 1e-10:
        raise ArithmeticError("state norm drifted beyond 1e-10")
    return out


def invert(circuit: QuantumCircuit) -> QuantumCircuit:
    """Reversed gate order with per-gate inverses."""
    return circuit.inverse()


def probabilities(state: StateVector, qubits=None) -> np.ndarray:
    """Marginal distribution over ``qubits``.

    Outcome index m has bit j equal to the measured value of ``qubits[j]``.
    With ``qubits=None`` this is the full elementwise |amplitude|^2 array.
    """
    n = state.num_qubits
    if qubits is None:
        qubits = tuple(range(n))
    qs = tuple(int(q) for q in qubits)
    if len(set(qs)) != len(qs):
        raise ValueError("duplicate qubit in subset")
    if any(q < 0 or q >= n for q in qs):
        raise ValueError("qubit index out of range")
    p = np.abs(state.amplitudes) ** 2
    if qs == tuple(range(n)):
        return p
    t = p.reshape((2,) * n)
    keep = sorted(n - 1 - q for q in qs)
    drop = tuple(a for a in range(n) if a not in set(keep))
    if drop:
        t = t.sum(axis=drop)
    k = len(qs)
    # axis i of t is original axis keep[i]; output axis i must be qubit qs[k-1-i]
    perm = [keep.index(n - 1 - qs[k - 1 - i]) for i in range(k)]
    return t.transpose(perm).reshape(-1)


def sample(state: StateVector, qubits, shots: int, seed: int) -> dict[int, int]:
    """Multinomial measurement counts over ``qubits``; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = probabilities(state, qubits)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p / p.sum())
    return {int(i): int(c) for i, c in enumerate(counts) if c}


_PAULIS = ("X", "Y", "Z")


def _apply_pauli_inplace(amps: np.ndarray, n: int, q: int, pauli: str) -> None:
    view = amps.reshape(-1, 2, 1 << q)
    if pauli == "X":
        tmp = view[:, 0, :].copy()
        view[:, 0, :] = view[:, 1, :]
        view[:, 1, :] = tmp
    elif pauli == "Y":
        tmp = view[:, 0, :].copy()
        view[:, 0, :] = -1j * view[:, 1, :]
        view[:, 1, :] = 1j * tmp
    else:
        view[:, 1, :] *= -1.0


def run_noisy_trajectory(state: StateVector, circuit: QuantumCircuit,
                         noise_rate: float, seed: int) -> StateVector:
    """One stochastic Pauli-noise trajectory of the circuit.

    After each gate touching two or more qubits, each touched qubit
    independently suffers a uniformly random Pauli (X, Y or Z) with
    probability ``noise_rate``. The state stays pure and normalized; a rate
    of zero reproduces ``run_circuit`` bit for bit.
    """
    if not 0.0 <= noise_rate <= 1.0:
        raise ValueError("noise_rate must be in [0, 1]")
    if circuit.num_qubits != state.num_qubits:
        raise ValueError("circuit/state qubit count mismatch")
    out = state.copy()
    rng = np.random.default_rng(seed)
    for gate in circuit.gates:
        _apply_inplace(out.amplitudes, out.num_qubits, gate)
        touched = gate.qubits
        if noise_rate > 0.0 and len(touched) >= 2:
            for q in touched:
                if rng.random() < noise_rate:
                    _apply_pauli_inplace(out.amplitudes, out.num_qubits, q,
                                         _PAULIS[rng.integers(3)])
    return out
