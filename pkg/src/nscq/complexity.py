"""Closed-form resource and iteration-count calculators.

Asymptotic claims are carried as evaluable power expressions
(constant * base^exponent) so tests can compare numbers, not strings.
Qubit accounting mirrors the register layout exactly; gate counts are
measured from the actual builders, never estimated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import MAX_ITERATIONS, analytic_success, build_oracle
from .gadgets import diffuser, layout
from .model import NscInstance


@dataclass(frozen=True)
class PowerExpr:
    """Evaluable asymptotic record: constant * base ** exponent."""

    base: float
    exponent: float
    constant: float = 1.0

    def value(self) -> float:
        return self.constant * self.base ** self.exponent

    def __str__(self) -> str:
        c = "" if self.constant == 1.0 else f"{self.constant:g} * "
        return f"{c}{self.base:g}^{self.exponent:g}"


@dataclass(frozen=True)
class QueryCounts:
    quantum: PowerExpr
    classical: PowerExpr
    ratio: PowerExpr


def grover_query_count(cycle_length: int, num_nodes: int) -> QueryCounts:
    """Oracle-query scaling of search versus exhaustive classical checking."""
    if cycle_length < 2:
        raise ValueError("cycle length must be at least 2")
    if num_nodes < 1:
        raise ValueError("need at least one node")
    C, V = float(cycle_length), float(num_nodes)
    return QueryCounts(quantum=PowerExpr(C, V / 2),
                       classical=PowerExpr(C, V),
                       ratio=PowerExpr(C, V / 2))


@dataclass(frozen=True)
class IterationCounts:
    """Prescribed iteration count in both conventions.

    ``k_paper`` is the displayed ceiling form ceil((pi/4) sqrt(N/M));
    ``k_exact`` is the true argmax of the analytic success probability over
    k in {0..64} (smallest k on ties).
    """

    k_paper: int
    k_exact: int


def optimal_iterations(N: int, M: int) -> IterationCounts:
    if M < 1:
        raise ValueError("optimal iteration count is undefined for M = 0")
    if M > N:
        raise ValueError("M cannot exceed N")
    k_paper = math.ceil((math.pi / 4.0) * math.sqrt(N / M))
    best_k, best_p = 0, analytic_success(N, M, 0)
    for k in range(1, MAX_ITERATIONS + 1):
        p = analytic_success(N, M, k)
        if p > best_p + 1e-12:  # tolerance keeps the smallest k on periodic ties
            best_k, best_p = k, p
    return IterationCounts(k_paper, best_k)


def robust_iterations(alpha: float) -> int:
    """ceil((pi/4) sqrt(1/alpha)): iteration count independent of N."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    return math.ceil((math.pi / 4.0) * math.sqrt(1.0 / alpha))


@dataclass(frozen=True)
class PolyIterations:
    """Floor-convention count plus a practical max(1, .) companion.

    A raw value of zero is meaningful (uniform sampling already suffices),
    so it is reported explicitly rather than silently bumped.
    """

    raw: int
    practical: int


def poly_precision_iterations(alpha0: float, p_n: float) -> PolyIterations:
    """floor((pi/4) sqrt(p(N)/alpha0)) for polynomially decaying feasibility."""
    if not 0.0 < alpha0 <= 1.0:
        raise ValueError("alpha0 must be in (0, 1]")
    if p_n < 1.0:
        raise ValueError("p(N) must be >= 1")
    if alpha0 / p_n > 1.0:
        raise ValueError("alpha0/p(N) is a fraction and must be <= 1")
    raw = math.floor((math.pi / 4.0) * math.sqrt(p_n / alpha0))
    return PolyIterations(raw, max(1, raw))


def classical_sampling_cost(alpha: float) -> float:
    """Expected uniform-sampling trials to hit a feasible assignment: 1/alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    return 1.0 / alpha


def counting_cost(alpha: float) -> float:
    """Counting query form sqrt(2/alpha) at accuracy delta/2."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    return math.sqrt(2.0 / alpha)


@dataclass(frozen=True)
class ResourceEstimate:
    """Qubit breakdown plus measured gate counts for one iteration.

    Depth fields are gate-count proxies (no scheduling model); the
    per-iteration estimate is the full oracle (compute, phase, uncompute,
    hence roughly twice the one-way depth) plus the diffuser.
    """

    total_qubits: int
    node_qubits: int
    delay_qubits: int
    sum_qubits: int
    carry_qubits: int
    flag_qubits: int
    ancilla_qubits: int
    delay_oracle_gates: int | None = None
    adder_gates: int | None = None
    comparator_gates: int | None = None
    oracle_depth_estimate: int | None = None
    oracle_gate_count: int | None = None
    diffuser_depth_estimate: int | None = None
    iteration_depth_estimate: int | None = None
    two_qubit_gate_count: int | None = None
    oracle_depth_scaling: str = "O(A log A)"

    def __post_init__(self):
        parts = (self.node_qubits + self.delay_qubits + self.sum_qubits
                 + self.carry_qubits + self.flag_qubits + self.ancilla_qubits)
        if parts != self.total_qubits:
            raise ValueError("qubit components must sum to the total")


def qubit_count(bits_per_node: int, num_nodes: int, num_arcs: int) -> ResourceEstimate:
    """Closed-form qubit total n*V + A + 3*floor(log2 A) + 4 with breakdown.

    Floor convention throughout; the ancilla block is the adder staging
    register (floor(log2 A) + 1) plus the comparator work bits
    (floor(log2 A)).
    """
    if bits_per_node < 1 or num_nodes < 2 or num_arcs < 1:
        raise ValueError("need bits_per_node >= 1, num_nodes >= 2, num_arcs >= 1")
    lg = num_arcs.bit_length() - 1
    eps = lg + 1
    node = bits_per_node * num_nodes
    ancilla = eps + lg
    total = node + num_arcs + eps + 1 + 1 + ancilla
    return ResourceEstimate(total_qubits=total, node_qubits=node,
                            delay_qubits=num_arcs, sum_qubits=eps,
                            carry_qubits=1, flag_qubits=1,
                            ancilla_qubits=ancilla)


def oracle_cost(instance: NscInstance) -> ResourceEstimate:
    """Exact gate counts from the builders for one Grover iteration."""
    from .engine import oracle_stage_circuits  # local: avoids import-order noise

    lay = layout(instance)
    delay_c, sum_c, flag_c = oracle_stage_circuits(instance, lay)
    delay_gates = len(delay_c)
    adder_gates = len(sum_c) - delay_gates
    comparator_gates = len(flag_c) - len(sum_c)
    one_way = len(flag_c)
    full_oracle = len(build_oracle(instance, lay))
    diff = diffuser(lay.node_regs, lay.total_qubits)
    iteration = full_oracle + len(diff)
    two_qubit = sum(1 for g in (build_oracle(instance, lay).gates + diff.gates)
                    if len(g.qubits) >= 2)
    return ResourceEstimate(
        total_qubits=lay.total_qubits,
        node_qubits=len(lay.node_qubits),
        delay_qubits=sum(len(r) for r in lay.delay_regs),
        sum_qubits=len(lay.sum_reg),
        carry_qubits=1,
        flag_qubits=1,
        ancilla_qubits=len(lay.add_ancilla) + len(lay.cmp_ancilla),
        delay_oracle_gates=delay_gates,
        adder_gates=adder_gates,
        comparator_gates=comparator_gates,
        oracle_depth_estimate=one_way,
        oracle_gate_count=full_oracle,
        diffuser_depth_estimate=len(diff),
        iteration_depth_estimate=iteration,
        two_qubit_gate_count=two_qubit,
    )


@dataclass(frozen=True)
class RegimeReport:
    """Hardness taxonomy for feasibility fraction alpha = alpha0 / N^beta."""

    beta: float
    hardness_label: str
    quantum_iterations: PowerExpr
    classical_samples: PowerExpr
    speedup_factor: PowerExpr


def regime_classify(beta: float, cycle_length: int, num_nodes: int,
                    alpha0: float = 1.0) -> RegimeReport:
    """Classify the search-cost regime for p(N) = N^beta, N = C^V.

    beta = 0 needs a constant iteration count; 0 < beta < 1 is polynomial
    in N^beta; beta = 1 sits on the exponential boundary (the quantum cost
    becomes C^(V/2)); beta > 1 is squarely exponential. The quadratic
    exponent advantage persists in every regime.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if not 0.0 < alpha0 <= 1.0:
        raise ValueError("alpha0 must be in (0, 1]")
    C, V = float(cycle_length), float(num_nodes)
    quantum = PowerExpr(C, V * beta / 2.0, (math.pi / 4.0) / math.sqrt(alpha0))
    classical = PowerExpr(C, V * beta, 1.0 / alpha0)
    speedup = PowerExpr(C, V * beta / 2.0, 4.0 / (math.pi * math.sqrt(alpha0)))
    if beta == 0:
        label = "constant"
    elif beta < 1:
        label = "polynomial"
    elif beta == 1:
        label = "exponential-boundary"
    else:
        label = "exponential"
    return RegimeReport(beta, label, quantum, classical, speedup)
