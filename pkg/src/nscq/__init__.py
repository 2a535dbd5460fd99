"""Grover search, exact simulation, and resource accounting for cyclic
signal-offset coordination problems."""

from .complexity import (IterationCounts, PolyIterations, PowerExpr,
                         QueryCounts, RegimeReport, ResourceEstimate,
                         classical_sampling_cost, counting_cost,
                         grover_query_count, optimal_iterations, oracle_cost,
                         poly_precision_iterations, qubit_count,
                         regime_classify, robust_iterations)
from .engine import (CountEstimate, QuantumVerdict, SearchOutcome,
                     analytic_success, build_oracle, grover_search_fast,
                     grover_search_gate_level, grover_search_noisy,
                     oracle_stage_circuits, quantum_count,
                     robust_decision_quantum, success_metrics)
from .errors import CapacityError, InstanceFormatError
from .gadgets import (ComparatorSpec, RegisterLayout, add_into_sum,
                      comparator_leq, delay_oracle_for_edge, diffuser,
                      forward_qft, hadamard_layer, inverse_qft, layout)
from .model import (ClassicalVerdict, FeasibleSet, NetworkGraph, NscInstance,
                    PeriodicDelayTable, RobustParams, SamplingResult,
                    classical_random_sampling, dumps_instance, feasible_set,
                    index_of_offsets, instance_from_dict, instance_to_dict,
                    kappa, load_instance, loads_instance, offsets_from_index,
                    random_instance, robust_decision_classical, save_instance,
                    total_delay)
from .statevec import (GateOp, QuantumCircuit, StateVector, apply,
                       basis_state, ccx, cnot, controlled_x, cp, h, invert,
                       mcx, mcz, probabilities, run_circuit,
                       run_noisy_trajectory, sample, x, z, zero_state)

__version__ = "0.1.0"
