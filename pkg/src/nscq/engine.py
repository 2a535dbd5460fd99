"""Oracle assembly, Grover search on two backends, and quantum counting.

The full oracle computes the feasibility bit reversibly (per-arc delay
loads, sequential addition, threshold comparison), applies a Z on the flag,
and then uncomputes every intermediate register. Net effect on a basis
assignment |mu> with zeroed work registers: the phase (-1)^kappa(mu), work
registers back to |0>. Because of that guaranteed uncomputation, the search
can equivalently be simulated on the node space alone (the "fast" backend),
with the gate-level backend existing to validate exactly that claim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .gadgets import (ComparatorSpec, RegisterLayout, add_into_sum,
                      comparator_leq, delay_oracle_for_edge, diffuser,
                      hadamard_layer, layout)
from .model import FeasibleSet, NscInstance, RobustParams, feasible_set
from .statevec import (MAX_QUBITS, QuantumCircuit, StateVector, probabilities,
                       run_circuit, run_noisy_trajectory, sample, z,
                       zero_state)

MAX_ITERATIONS = 64
COUNT_STATE_CAP = 1 << 24


def analytic_success(N: int, M: int, k: int) -> float:
    """Closed-form success probability sin^2((2k+1) asin(sqrt(M/N)))."""
    if N < 1 or M < 0 or M > N:
        raise ValueError("need 0 <= M <= N with N >= 1")
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    if M == 0:
        return 0.0
    theta = math.asin(math.sqrt(M / N))
    return math.sin((2 * k + 1) * theta) ** 2


def success_metrics(distribution, marked) -> tuple[float, float, float | None]:
    """(success, baseline, ratio) for a distribution and a marked set.

    ``marked`` may be a FeasibleSet, a boolean mask, or an iterable of
    outcome indices. The ratio is None when nothing is marked.
    """
    p = np.asarray(distribution, dtype=float)
    if p.ndim != 1:
        raise ValueError("distribution must be one-dimensional")
    if (p < -1e-12).any() or abs(p.sum() - 1.0) > 1e-6:
        raise ValueError("malformed distribution: entries must be a probability vector")
    mask = _marked_mask(marked, p.size)
    success = float(p[mask].sum())
    M = int(mask.sum())
    baseline = M / p.size
    ratio = success / baseline if M else None
    return success, baseline, ratio


def _marked_mask(marked, size: int) -> np.ndarray:
    if isinstance(marked, FeasibleSet):
        mask = marked.mask
    else:
        marked = np.asarray(marked)
        if marked.dtype == bool:
            mask = marked
        else:
            mask = np.zeros(size, dtype=bool)
            mask[marked.astype(np.int64)] = True
    if mask.size != size:
        raise ValueError("marked set does not match the distribution size")
    return mask


def build_oracle(instance: NscInstance, lay: RegisterLayout) -> QuantumCircuit:
    """Full phase oracle: compute stages, Z on the flag, uncompute stages."""
    forward = _compute_stage(instance, lay, through="flag")
    phase = QuantumCircuit(lay.total_qubits, (z(lay.flag),))
    return forward + phase + forward.inverse()


def _compute_stage(instance: NscInstance, lay: RegisterLayout,
                   through: str) -> QuantumCircuit:
    circ = QuantumCircuit(lay.total_qubits)
    for e in range(instance.graph.num_arcs):
        circ = circ + delay_oracle_for_edge(instance, e, lay)
    if through == "delay":
        return circ
    for e in range(instance.graph.num_arcs):
        circ = circ + add_into_sum(lay.delay_regs[e], lay.sum_reg, lay.carry,
                                   lay.total_qubits)
    if through == "sum":
        return circ
    eps = len(lay.sum_reg)
    k_eff = min(instance.threshold, (1 << eps) - 1)  # sums never exceed the register
    spec = ComparatorSpec(k_eff, eps)
    return circ + comparator_leq(lay.sum_reg, spec, lay.flag, lay.cmp_ancilla,
                                 lay.total_qubits)


def oracle_stage_circuits(instance: NscInstance, lay: RegisterLayout
                          ) -> tuple[QuantumCircuit, QuantumCircuit, QuantumCircuit]:
    """Probe circuits stopping after the delay loads, the adds, the compare."""
    return (_compute_stage(instance, lay, "delay"),
            _compute_stage(instance, lay, "sum"),
            _compute_stage(instance, lay, "flag"))


@dataclass
class SearchOutcome:
    """Result of one search run, scored against the exact marked set."""

    node_distribution: np.ndarray
    marked: FeasibleSet
    success_probability: float
    baseline: float
    ratio: float | None
    k_used: int
    backend: str
    shots: int = 0
    seed: int | None = None
    counts: dict[int, int] | None = None
    sampled_success: float | None = None
    noise_rate: float = 0.0
    trajectories: int = 1

    @property
    def total_states(self) -> int:
        return int(self.node_distribution.size)

    @property
    def feasible_count(self) -> int:
        return self.marked.size


def _check_gate_capacity(lay: RegisterLayout) -> None:
    if lay.total_qubits > MAX_QUBITS:
        raise CapacityError(
            f"gate-level backend needs {lay.total_qubits} qubits, "
            f"above the {MAX_QUBITS}-qubit dense-backend cap")


def _check_k(k: int) -> None:
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    if k > MAX_ITERATIONS:
        raise ValueError(
            f"iteration count {k} above the engine cap {MAX_ITERATIONS}; "
            "use analytic_success for the asymptotic regime")


def _finish_outcome(dist, fs, k, backend, shots, seed, state=None,
                    node_qubits=None, noise_rate=0.0, trajectories=1) -> SearchOutcome:
    success, baseline, ratio = success_metrics(dist, fs)
    counts = None
    sampled = None
    if shots:
        if state is not None:
            counts = sample(state, node_qubits, shots, seed or 0)
        else:
            rng = np.random.default_rng(seed or 0)
            raw = rng.multinomial(shots, dist / dist.sum())
            counts = {int(i): int(c) for i, c in enumerate(raw) if c}
        marked_idx = set(int(i) for i in fs.indices)
        sampled = sum(c for i, c in counts.items() if i in marked_idx) / shots
    return SearchOutcome(np.asarray(dist), fs, success, baseline, ratio, k,
                         backend, shots=shots, seed=seed, counts=counts,
                         sampled_success=sampled, noise_rate=noise_rate,
                         trajectories=trajectories)


def _gate_level_circuit(instance: NscInstance, lay: RegisterLayout,
                        k: int) -> QuantumCircuit:
    circ = hadamard_layer(lay.node_regs, lay.total_qubits)
    if k:
        body = build_oracle(instance, lay) + diffuser(lay.node_regs, lay.total_qubits)
        for _ in range(k):
            circ = circ + body
    return circ


def _require_full_register_cycle(instance: NscInstance, lay: RegisterLayout) -> None:
    if instance.cycle_length != 1 << lay.bits_per_node:
        raise ValueError(
            "gate-level search needs a power-of-two cycle length: the Hadamard "
            "initialization spans the whole node register")


def grover_search_gate_level(instance: NscInstance, k: int, shots: int = 0,
                             seed: int = 0) -> SearchOutcome:
    """Full-circuit search: H layer then k x (oracle, diffuser).

    Executes on the lean layout (the reserved adder staging register is
    never addressed by a gate, so simulating it would only scale the state
    vector by an idle factor).
    """
    _check_k(k)
    lay = layout(instance, reserve_staging=False)
    _check_gate_capacity(lay)
    _require_full_register_cycle(instance, lay)
    fs = feasible_set(instance)
    state = run_circuit(zero_state(lay.total_qubits), _gate_level_circuit(instance, lay, k))
    dist = probabilities(state, lay.node_qubits)
    return _finish_outcome(dist, fs, k, "gate", shots, seed,
                           state=state, node_qubits=lay.node_qubits)


def _grover_step(amp: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """One canonical Grover iteration on the node space: flip then reflect."""
    out = amp.copy()
    out[mask] *= -1.0
    return 2.0 * out.mean() - out


def grover_search_fast(instance: NscInstance, k: int, shots: int = 0,
                       seed: int = 0) -> SearchOutcome:
    """Node-space-only search; exact because the oracle uncomputes its work."""
    _check_k(k)
    fs = feasible_set(instance)
    N = fs.total
    amp = np.full(N, 1.0 / math.sqrt(N), dtype=np.complex128)
    for _ in range(k):
        amp = _grover_step(amp, fs.mask)
    dist = np.abs(amp) ** 2
    return _finish_outcome(dist, fs, k, "fast", shots, seed)


def grover_search_noisy(instance: NscInstance, k: int, noise_rate: float,
                        trajectories: int, seed: int = 0,
                        shots: int = 0) -> SearchOutcome:
    """Gate-level search averaged over stochastic Pauli-noise trajectories."""
    _check_k(k)
    if trajectories < 1:
        raise ValueError("need at least one trajectory")
    lay = layout(instance, reserve_staging=False)
    _check_gate_capacity(lay)
    _require_full_register_cycle(instance, lay)
    fs = feasible_set(instance)
    circ = _gate_level_circuit(instance, lay, k)
    rng = np.random.default_rng(seed)
    traj_seeds = rng.integers(0, 1 << 63, size=trajectories)
    start = zero_state(lay.total_qubits)
    mean = np.zeros(1 << len(lay.node_qubits), dtype=float)
    for ts in traj_seeds:
        state = run_noisy_trajectory(start, circ, noise_rate, int(ts))
        mean += probabilities(state, lay.node_qubits)
    mean /= trajectories
    out = _finish_outcome(mean, fs, k, "noisy", shots, seed,
                          noise_rate=noise_rate, trajectories=trajectories)
    return out


@dataclass
class CountEstimate:
    """Phase-estimation count of the feasible set."""

    m_hat: float
    t: int
    phase_index: int
    phase_fraction: float
    error_bound: float
    total_states: int
    distribution: np.ndarray
    counts: dict[int, int] | None = None

    @property
    def theta(self) -> float:
        return math.pi * self.phase_fraction


def quantum_count(instance: NscInstance, t: int, shots: int = 0,
                  seed: int = 0) -> CountEstimate:
    """Estimate the feasible count via phase estimation of the Grover step.

    A t-qubit counting register controls powers G^(2^j) of the canonical
    Grover operator on the node space; row y of the joint state therefore
    holds G^y applied to the uniform state. The inverse Fourier transform
    on the counting register is a normalized FFT along that axis. The most
    likely outcome y* gives theta = pi y* / 2^t and M_hat = N sin^2(theta).

    The reported error bound is the additive-accuracy form
    2 pi sqrt(M(N-M))/2^t + pi^2 N / 4^t of the standard counting analysis,
    evaluated at M_hat.
    """
    if not 1 <= t <= 12:
        raise ValueError("counting register must have 1..12 qubits")
    fs = feasible_set(instance)
    N = fs.total
    P = 1 << t
    if P * N > COUNT_STATE_CAP:
        raise CapacityError(
            f"counting needs {P} x {N} joint amplitudes, above the 2^24 cap")
    psi = np.empty((P, N), dtype=np.complex128)
    g = np.full(N, 1.0 / math.sqrt(N), dtype=np.complex128)
    scale = 1.0 / math.sqrt(P)
    for y in range(P):
        psi[y] = g * scale
        if y < P - 1:
            g = _grover_step(g, fs.mask)
    out = np.fft.fft(psi, axis=0) * scale
    dist = (np.abs(out) ** 2).sum(axis=1)
    y_star = int(np.argmax(dist))
    frac = y_star / P
    m_hat = N * math.sin(math.pi * frac) ** 2
    bound = (2.0 * math.pi * math.sqrt(max(m_hat * (N - m_hat), 0.0)) / P
             + (math.pi ** 2) * N / (P * P))
    counts = None
    if shots:
        rng = np.random.default_rng(seed)
        raw = rng.multinomial(shots, dist / dist.sum())
        counts = {int(i): int(c) for i, c in enumerate(raw) if c}
    return CountEstimate(m_hat, t, y_star, frac, bound, N, dist, counts)


@dataclass
class QuantumVerdict:
    """Counting-based robust decision with an explicit inconclusive flag."""

    holds: bool
    inconclusive: bool
    m_hat: float
    delta: int
    error_bound: float
    estimate: CountEstimate

    @property
    def verdict(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "holds" if self.holds else "fails"


def robust_decision_quantum(instance: NscInstance, params: RobustParams,
                            t: int, seed: int = 0) -> QuantumVerdict:
    """Decide feasible-count >= delta from the counting estimate.

    Flagged inconclusive when the margin |M_hat - delta| is inside the
    error bound (the chosen t cannot separate the two hypotheses).
    """
    est = quantum_count(instance, t, seed=seed)
    delta = params.resolve_delta(est.total_states)
    margin = abs(est.m_hat - delta)
    return QuantumVerdict(est.m_hat >= delta, margin < est.error_bound,
                          est.m_hat, delta, est.error_bound, est)
