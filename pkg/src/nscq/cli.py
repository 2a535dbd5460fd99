"""Experiment harness: generate / run / sweep / count / resources / verify.

Sweeps are deterministic end to end: each grid cell derives its own 63-bit
seed as sha256("master:n:K:k:rep"), so any cell can be reproduced in
isolation, and identical configurations yield byte-identical CSV (the CSV
carries no timing column; wall time lives in the JSON format).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity
error.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .charts import render_sweep_svg
from .complexity import optimal_iterations, oracle_cost
from .engine import (grover_search_fast, grover_search_gate_level,
                     grover_search_noisy, quantum_count,
                     robust_decision_quantum, success_metrics)
from .errors import CapacityError, InstanceFormatError
from .model import (NscInstance, RobustParams, feasible_set, load_instance,
                    dumps_instance, random_instance)
from .verify import run_verification

CSV_HEADER = "n,K,k,seed,N,M,k_paper,k_exact,success,baseline,ratio,backend,shots,noise_rate"


@dataclass
class SweepConfig:
    sizes: tuple[int, ...] = (4, 5, 6, 7, 8, 9, 10)
    thresholds: tuple[int, ...] = (1, 2)
    iteration_counts: tuple[int, ...] = (1, 2)
    seeds_per_size: int = 5
    master_seed: int = 0
    shots: int = 1024
    sample: bool = False
    backend: str = "fast"
    noise_rate: float = 0.0
    trajectories: int = 100
    workers: int = 1

    def __post_init__(self):
        if not (self.sizes and self.thresholds and self.iteration_counts):
            raise ValueError("sweep ranges must be non-empty")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass
class SweepRow:
    n: int
    K: int
    k: int
    seed: int
    N: int | None = None
    M: int | None = None
    k_paper: int | None = None
    k_exact: int | None = None
    success: float | None = None
    baseline: float | None = None
    ratio: float | None = None
    backend: str = "fast"
    shots: int = 0
    noise_rate: float = 0.0
    sampled_success: float | None = None
    wall_time: float = 0.0
    reason: str | None = None


def derive_cell_seed(master: int, n: int, K: int, k: int, rep: int) -> int:
    digest = hashlib.sha256(f"{master}:{n}:{K}:{k}:{rep}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(_csv_cell(v) for v in (
            r.n, r.K, r.k, r.seed, r.N, r.M, r.k_paper, r.k_exact, r.success,
            r.baseline, r.ratio, r.backend, r.shots, r.noise_rate)))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    return json.dumps([dataclasses.asdict(r) for r in rows], indent=2) + "\n"


def _search(instance: NscInstance, k: int, backend: str, *, seed: int,
            shots: int, noise_rate: float, trajectories: int):
    if backend == "gate":
        return grover_search_gate_level(instance, k, shots, seed)
    if backend == "fast":
        return grover_search_fast(instance, k, shots, seed)
    if backend == "noisy":
        return grover_search_noisy(instance, k, noise_rate, trajectories,
                                   seed, shots)
    raise ValueError(f"unknown backend {backend!r}")


def _row_for_instance(instance: NscInstance, k: int, backend: str, *, seed: int,
                      shots: int, noise_rate: float, trajectories: int) -> SweepRow:
    started = time.perf_counter()
    outcome = _search(instance, k, backend, seed=seed, shots=shots,
                      noise_rate=noise_rate, trajectories=trajectories)
    N, M = outcome.total_states, outcome.feasible_count
    k_paper = k_exact = None
    if M >= 1:
        pair = optimal_iterations(N, M)
        k_paper, k_exact = pair.k_paper, pair.k_exact
    return SweepRow(
        n=instance.graph.num_nodes, K=instance.threshold, k=k, seed=seed,
        N=N, M=M, k_paper=k_paper, k_exact=k_exact,
        success=outcome.success_probability, baseline=outcome.baseline,
        ratio=outcome.ratio, backend=backend, shots=shots,
        noise_rate=noise_rate, sampled_success=outcome.sampled_success,
        wall_time=time.perf_counter() - started)


def _evaluate_cell(cfg: SweepConfig, n: int, K: int, k: int, rep: int) -> SweepRow:
    seed = derive_cell_seed(cfg.master_seed, n, K, k, rep)
    instance = random_instance(n, seed, threshold=K)
    shots = cfg.shots if cfg.sample else 0
    try:
        return _row_for_instance(instance, k, cfg.backend, seed=seed, shots=shots,
                                 noise_rate=cfg.noise_rate,
                                 trajectories=cfg.trajectories)
    except CapacityError as exc:
        # cells that cannot run are recorded, never dropped
        return SweepRow(n=n, K=K, k=k, seed=seed, N=instance.num_states,
                        M=feasible_set(instance).size,
                        backend="skipped:capacity", shots=0,
                        noise_rate=cfg.noise_rate, reason=str(exc))


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """One row per (n, K, k, rep) cell, in grid order regardless of workers."""
    cells = [(n, K, k, rep)
             for n in cfg.sizes
             for K in cfg.thresholds
             for k in cfg.iteration_counts
             for rep in range(cfg.seeds_per_size)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_evaluate_cell, cfg, *cell) for cell in cells]
            return [f.result() for f in futures]
    return [_evaluate_cell(cfg, *cell) for cell in cells]


# --- argument plumbing -------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "-" in chunk.lstrip("-"):
            lo, hi = chunk.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            out.append(int(chunk))
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return tuple(out)


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="instance JSON file (overrides generation flags)")
    p.add_argument("--nodes", type=int, help="generate: number of nodes")
    p.add_argument("--seed", type=int, default=0, help="generation / sampling seed")
    p.add_argument("--cycle-length", type=int, default=2)
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("--mode", choices=("binary", "general"), default="binary")
    p.add_argument("--max-delay", type=int, default=1,
                   help="general mode: largest table entry")


def _resolve_instance(args) -> NscInstance:
    if args.instance:
        return load_instance(args.instance)
    if args.nodes is None:
        raise InstanceFormatError("give --instance FILE or --nodes N")
    return random_instance(args.nodes, args.seed, args.mode,
                           cycle_length=args.cycle_length,
                           threshold=args.threshold, max_delay=args.max_delay)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_generate(args) -> int:
    if args.nodes is None:
        raise InstanceFormatError("generate requires --nodes")
    inst = random_instance(args.nodes, args.seed, args.mode,
                           cycle_length=args.cycle_length,
                           threshold=args.threshold, max_delay=args.max_delay)
    _emit(dumps_instance(inst), args.out)
    return 0


def _cmd_run(args) -> int:
    inst = _resolve_instance(args)
    shots = args.shots if args.sample else 0
    row = _row_for_instance(inst, args.iterations, args.backend, seed=args.seed,
                            shots=shots, noise_rate=args.noise_rate,
                            trajectories=args.trajectories)
    if args.format == "json":
        _emit(rows_to_json([row]), args.out)
    else:
        _emit(rows_to_csv([row]), args.out)
    return 0


def _cmd_sweep(args) -> int:
    cfg = SweepConfig(sizes=args.sizes, thresholds=args.thresholds,
                      iteration_counts=args.iterations,
                      seeds_per_size=args.seeds_per_size,
                      master_seed=args.seed, shots=args.shots,
                      sample=args.sample, backend=args.backend,
                      noise_rate=args.noise_rate,
                      trajectories=args.trajectories, workers=args.workers)
    rows = run_sweep(cfg)
    if args.format == "json":
        _emit(rows_to_json(rows), args.out)
    elif args.format == "svg":
        _emit(render_sweep_svg(rows), args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
    return 0


def _cmd_count(args) -> int:
    inst = _resolve_instance(args)
    if args.alpha is not None or args.delta is not None:
        params = RobustParams(alpha=args.alpha, delta=args.delta)
        verdict = robust_decision_quantum(inst, params, args.counting_qubits,
                                          seed=args.seed)
        est = verdict.estimate
        payload = {
            "m_hat": est.m_hat, "t": est.t, "phase_index": est.phase_index,
            "phase_fraction": est.phase_fraction, "error_bound": est.error_bound,
            "total_states": est.total_states, "delta": verdict.delta,
            "verdict": verdict.verdict,
        }
    else:
        est = quantum_count(inst, args.counting_qubits, shots=args.shots,
                            seed=args.seed)
        payload = {
            "m_hat": est.m_hat, "t": est.t, "phase_index": est.phase_index,
            "phase_fraction": est.phase_fraction, "error_bound": est.error_bound,
            "total_states": est.total_states,
        }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [f"{key}: {value}" for key, value in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_resources(args) -> int:
    inst = _resolve_instance(args)
    est = oracle_cost(inst)
    payload = dataclasses.asdict(est)
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [f"{key}: {value}" for key, value in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    checks = run_verification(sizes=args.sizes, seeds_per_size=args.seeds_per_size)
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}: {c.detail}")
        failed += 0 if c.passed else 1
    if failed:
        print(f"{failed} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nscq",
        description="Signal-offset coordination: search experiments and resource reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance as JSON")
    _add_instance_args(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("run", help="search one instance and report metrics")
    _add_instance_args(p)
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--backend", choices=("gate", "fast", "noisy"), default="fast")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--sample", action="store_true",
                   help="also report sampled counts (exact metrics stay)")
    p.add_argument("--noise-rate", type=float, default=0.0)
    p.add_argument("--trajectories", type=int, default=100)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("sweep", help="grid study over sizes, thresholds, iterations")
    p.add_argument("--sizes", type=_int_list, default=(4, 5, 6, 7, 8, 9, 10),
                   help="comma list or range, e.g. 4-10")
    p.add_argument("--thresholds", type=_int_list, default=(1, 2))
    p.add_argument("--iterations", type=_int_list, default=(1, 2))
    p.add_argument("--seeds-per-size", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--sample", action="store_true")
    p.add_argument("--backend", choices=("gate", "fast", "noisy"), default="fast")
    p.add_argument("--noise-rate", type=float, default=0.0)
    p.add_argument("--trajectories", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("count", help="estimate the feasible count by phase estimation")
    _add_instance_args(p)
    p.add_argument("--counting-qubits", type=int, default=7)
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=int)
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("resources", help="qubit and gate accounting for an instance")
    _add_instance_args(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_resources)

    p = sub.add_parser("verify", help="run the cross-backend self-check suite")
    p.add_argument("--sizes", type=_int_list, default=(4, 5, 6))
    p.add_argument("--seeds-per-size", type=int, default=3)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already reported the problem
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (InstanceFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
