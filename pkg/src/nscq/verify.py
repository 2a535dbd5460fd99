"""Self-check suite: cross-backend agreement and oracle/classical equivalence.

Runs a bundled seeded ensemble of small instances and checks, exactly where
the contracts are exact:

* the circuit flag bit equals the classical feasibility bit on every basis
  assignment, with the delay and sum registers holding the right
  intermediate values;
* the oracle leaves no probability mass outside the work-registers-zero
  subspace;
* gate-level and node-space-only search produce the same node distribution;
* measured success probabilities match the closed-form amplification law;
* layout totals match the closed-form qubit count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexity import qubit_count
from .engine import (analytic_success, build_oracle, grover_search_fast,
                     grover_search_gate_level, oracle_stage_circuits)
from .gadgets import hadamard_layer, layout
from .model import (NscInstance, feasible_set, offsets_from_index,
                    random_instance, total_delay)
from .statevec import run_circuit, zero_state


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def default_ensemble(sizes=(4, 5, 6), seeds_per_size: int = 3) -> list[NscInstance]:
    """Small seeded ensemble mixing thresholds 1 and 2."""
    out = []
    for n in sizes:
        for s in range(seeds_per_size):
            out.append(random_instance(n, seed=1000 * n + s, threshold=1 + s % 2))
    return out


def probe_instance(instance: NscInstance) -> tuple[bool, str]:
    """Replay every basis assignment through the staged compute circuits."""
    lay = layout(instance)
    delay_c, sum_c, flag_c = oracle_stage_circuits(instance, lay)
    start = run_circuit(zero_state(lay.total_qubits),
                        hadamard_layer(lay.node_regs, lay.total_qubits))
    V, C = instance.graph.num_nodes, instance.cycle_length
    N = instance.num_states
    for stage_name, circ in (("delay", delay_c), ("sum", sum_c), ("flag", flag_c)):
        state = run_circuit(start, circ)
        hot = np.flatnonzero(np.abs(state.amplitudes) > 1e-12)
        if hot.size != N:
            return False, f"{stage_name} stage has {hot.size} branches, expected {N}"
        for raw in hot:
            regs = lay.decode(int(raw))
            mu = regs.node_values
            delays = tuple(d.delay(mu[i], mu[j])
                           for (i, j), d in zip(instance.graph.arcs, instance.delays))
            if regs.delay_values != delays:
                return False, f"{stage_name}: delay registers wrong at mu={mu}"
            if stage_name == "delay":
                continue
            if regs.sum_value != sum(delays):
                return False, f"{stage_name}: sum register wrong at mu={mu}"
            if regs.carry or regs.add_ancilla or regs.cmp_ancilla:
                return False, f"{stage_name}: stray work bits at mu={mu}"
            if stage_name == "flag":
                want = 1 if total_delay(instance, mu) <= instance.threshold else 0
                if regs.flag != want:
                    return False, f"flag != feasibility bit at mu={mu}"
    return True, f"{N} assignments x 3 stages replayed"


def check_oracle_equivalence(ensemble) -> CheckResult:
    for inst in ensemble:
        ok, detail = probe_instance(inst)
        if not ok:
            return CheckResult("oracle-classical-equivalence", False,
                               f"seed {inst.seed}: {detail}")
    return CheckResult("oracle-classical-equivalence", True,
                       f"{len(ensemble)} instances, all basis assignments")


def check_uncomputation(ensemble) -> CheckResult:
    worst = 0.0
    for inst in ensemble:
        lay = layout(inst)
        state = run_circuit(zero_state(lay.total_qubits),
                            hadamard_layer(lay.node_regs, lay.total_qubits)
                            + build_oracle(inst, lay))
        p = np.abs(state.amplitudes) ** 2
        node_bits = len(lay.node_qubits)
        residual = float(p.sum() - p[:1 << node_bits].sum())
        worst = max(worst, residual)
    ok = worst < 1e-12
    return CheckResult("oracle-uncomputation", ok,
                       f"worst residual mass {worst:.2e}")


def check_backend_agreement(ensemble, ks=(1, 2)) -> CheckResult:
    worst = 0.0
    for inst in ensemble:
        for k in ks:
            gate = grover_search_gate_level(inst, k)
            fast = grover_search_fast(inst, k)
            diff = float(np.max(np.abs(gate.node_distribution - fast.node_distribution)))
            worst = max(worst, diff)
    ok = worst < 1e-10
    return CheckResult("backend-agreement", ok, f"worst per-entry gap {worst:.2e}")


def check_amplification_law(ensemble, k_max: int = 6) -> CheckResult:
    worst = 0.0
    for inst in ensemble:
        fs = feasible_set(inst)
        for k in range(k_max + 1):
            got = grover_search_fast(inst, k).success_probability
            want = analytic_success(fs.total, fs.size, k)
            worst = max(worst, abs(got - want))
    ok = worst < 1e-9
    return CheckResult("amplification-law", ok, f"worst |measured - analytic| {worst:.2e}")


def check_layout_totals(sizes=(4, 5, 6, 7, 8, 9, 10), seeds_per_size: int = 3) -> CheckResult:
    for n in sizes:
        for s in range(seeds_per_size):
            inst = random_instance(n, seed=7000 + 17 * n + s)
            lay = layout(inst)
            formula = qubit_count(1, n, inst.graph.num_arcs).total_qubits
            if lay.total_qubits != formula:
                return CheckResult("layout-totals", False,
                                   f"n={n} seed={inst.seed}: {lay.total_qubits} != {formula}")
    return CheckResult("layout-totals", True, "layout matches the closed form")


def check_shift_invariance(ensemble_general) -> CheckResult:
    """Global offset shifts preserve the total delay for difference tables."""
    for inst in ensemble_general:
        C, V = inst.cycle_length, inst.graph.num_nodes
        for idx in range(0, inst.num_states, max(1, inst.num_states // 32)):
            mu = offsets_from_index(idx, C, V)
            base = total_delay(inst, mu)
            for c in range(1, C):
                shifted = tuple((v + c) % C for v in mu)
                if total_delay(inst, shifted) != base:
                    return CheckResult("shift-invariance", False,
                                       f"seed {inst.seed}: shift by {c} changed the delay")
    return CheckResult("shift-invariance", True, "difference tables are shift-invariant")


def run_verification(sizes=(4, 5, 6), seeds_per_size: int = 3) -> list[CheckResult]:
    ensemble = default_ensemble(sizes, seeds_per_size)
    general = [random_instance(n, seed=500 + n, mode="general", cycle_length=4,
                               threshold=2, max_delay=2) for n in (4, 5)]
    checks = [
        check_layout_totals(),
        check_oracle_equivalence(ensemble),
        check_uncomputation(ensemble),
        check_backend_agreement(ensemble),
        check_amplification_law(ensemble),
        check_shift_invariance(general),
    ]
    return checks
