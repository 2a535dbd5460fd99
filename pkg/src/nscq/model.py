"""Classical side of the signal-offset coordination problem.

A problem instance is a directed arc list over intersections, a common cycle
length C, one periodic delay table per arc, and a total-delay threshold K.
Arc (i, j) contributes ``table[(mu_i - mu_j) mod C]`` to the total, so every
delay is a pure function of the offset difference (and global offset shifts
never change the total). Binary mode is the C = 2, single-bit-delay special
case whose circuit realization is one layer of Toffoli-class writes per arc;
general mode allows any C >= 2 and multi-bit delays.

Everything here is exact and seedable; the brute-force enumeration is the
ground truth the quantum engines are verified against.
"""
from __future__ import annotations

import heapq
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InstanceFormatError

ENUMERATION_CAP = 1 << 24

Offsets = tuple[int, ...]


@dataclass(frozen=True)
class NetworkGraph:
    """Directed arc list over ``num_nodes`` intersections."""

    num_nodes: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple((int(i), int(j)) for i, j in self.arcs))
        if self.num_nodes < 1:
            raise ValueError("graph needs at least one node")
        if not self.arcs:
            raise ValueError("arc list must be non-empty")
        for i, j in self.arcs:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < self.num_nodes and 0 <= j < self.num_nodes):
                raise ValueError(f"arc ({i}, {j}) has an invalid node index")

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)


@dataclass(frozen=True)
class PeriodicDelayTable:
    """Delay as a function of the offset difference, periodic by construction.

    ``values[x]`` is the delay at difference x; indexing is always taken
    mod C, so h(x) == h(x + C) holds for every x.
    """

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) < 2:
            raise ValueError("delay table needs at least cycle length 2")
        if any(v < 0 for v in self.values):
            raise ValueError("delays must be nonnegative")

    @property
    def cycle_length(self) -> int:
        return len(self.values)

    def delay(self, mu_i: int, mu_j: int) -> int:
        return self.values[(mu_i - mu_j) % len(self.values)]

    @property
    def max_delay(self) -> int:
        return max(self.values)


@dataclass(frozen=True)
class NscInstance:
    """A coordination problem: graph, cycle length, per-arc delays, threshold."""

    graph: NetworkGraph
    cycle_length: int
    delays: tuple[PeriodicDelayTable, ...]
    threshold: int
    mode: str = "binary"
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "delays", tuple(self.delays))
        if self.cycle_length < 2:
            raise ValueError("cycle length must be at least 2")
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        if len(self.delays) != self.graph.num_arcs:
            raise ValueError("need exactly one delay table per arc")
        for d in self.delays:
            if not isinstance(d, PeriodicDelayTable):
                raise ValueError("each arc needs a periodic delay table")
            if d.cycle_length != self.cycle_length:
                raise ValueError("table length must equal the cycle length")
        if self.mode == "binary":
            if self.cycle_length != 2:
                raise ValueError("binary mode requires cycle length 2")
            if any(v not in (0, 1) for d in self.delays for v in d.values):
                raise ValueError("binary mode requires single-bit delay values")
        elif self.mode != "general":
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def num_states(self) -> int:
        return self.cycle_length ** self.graph.num_nodes

    @property
    def max_total_delay(self) -> int:
        return sum(d.max_delay for d in self.delays)


@dataclass(frozen=True)
class RobustParams:
    """Required feasible-set size, given directly or as a fraction alpha."""

    delta: int | None = None
    alpha: float | None = None

    def __post_init__(self):
        if (self.delta is None) == (self.alpha is None):
            raise ValueError("give exactly one of delta or alpha")
        if self.delta is not None and self.delta < 1:
            raise ValueError("delta must be >= 1")
        if self.alpha is not None and not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")

    def resolve_delta(self, total_states: int) -> int:
        if self.delta is not None:
            if self.delta > total_states:
                raise ValueError("delta exceeds the search-space size")
            return self.delta
        # small slack so exact products like 0.1 * 10 do not ceil to 2
        return int(math.ceil(self.alpha * total_states - 1e-9))


def _check_offsets(instance: NscInstance, mu) -> Offsets:
    mu = tuple(int(v) for v in mu)
    if len(mu) != instance.graph.num_nodes:
        raise ValueError("offset vector length must equal the node count")
    if any(not 0 <= v < instance.cycle_length for v in mu):
        raise ValueError("offsets must lie in [0, cycle_length)")
    return mu


def total_delay(instance: NscInstance, mu) -> int:
    """Sum of per-arc delays at the offset assignment ``mu``."""
    mu = _check_offsets(instance, mu)
    return sum(d.delay(mu[i], mu[j])
               for (i, j), d in zip(instance.graph.arcs, instance.delays))


def kappa(instance: NscInstance, mu) -> int:
    """Feasibility bit: 1 iff the total delay is within the threshold."""
    return 1 if total_delay(instance, mu) <= instance.threshold else 0


def offsets_from_index(index: int, cycle_length: int, num_nodes: int) -> Offsets:
    """Mixed-radix decode; node v holds digit v (least significant first)."""
    out = []
    for _ in range(num_nodes):
        out.append(index % cycle_length)
        index //= cycle_length
    return tuple(out)


def index_of_offsets(mu, cycle_length: int) -> int:
    idx = 0
    for v in reversed(tuple(mu)):
        idx = idx * cycle_length + int(v)
    return idx


@dataclass(frozen=True)
class FeasibleSet:
    """Exact enumeration result: a boolean mask over all C^V assignments."""

    mask: np.ndarray
    cycle_length: int
    num_nodes: int

    @property
    def total(self) -> int:
        return int(self.mask.size)

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def assignments(self) -> list[Offsets]:
        return [offsets_from_index(int(i), self.cycle_length, self.num_nodes)
                for i in self.indices]

    def contains(self, mu) -> bool:
        return bool(self.mask[index_of_offsets(mu, self.cycle_length)])


def feasible_set(instance: NscInstance) -> FeasibleSet:
    """Enumerate every assignment and keep those with total delay <= K."""
    N = instance.num_states
    if N > ENUMERATION_CAP:
        raise CapacityError(
            f"{N} assignments exceeds the 2^24 brute-force enumeration cap")
    V = instance.graph.num_nodes
    C = instance.cycle_length
    idx = np.arange(N, dtype=np.int64)
    total = np.zeros(N, dtype=np.int64)
    for (i, j), d in zip(instance.graph.arcs, instance.delays):
        mi = (idx // C**i) % C
        mj = (idx // C**j) % C
        table = np.asarray(d.values, dtype=np.int64)
        total += table[(mi - mj) % C]
    return FeasibleSet(total <= instance.threshold, C, V)


@dataclass(frozen=True)
class ClassicalVerdict:
    holds: bool
    feasible_count: int
    delta: int
    total_states: int


def robust_decision_classical(instance: NscInstance,
                              params: RobustParams) -> ClassicalVerdict:
    """Exact decision: does the feasible set have at least delta members?"""
    fs = feasible_set(instance)
    delta = params.resolve_delta(fs.total)
    return ClassicalVerdict(fs.size >= delta, fs.size, delta, fs.total)


def _tree_from_pruefer(seq: list[int], n: int) -> set[tuple[int, int]]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = set()
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.add((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.add((min(u, w), max(u, w)))
    return edges


def random_instance(num_nodes: int, seed: int, mode: str = "binary", *,
                    cycle_length: int = 2, threshold: int = 1,
                    max_delay: int = 1) -> NscInstance:
    """Seeded random connected instance with ``num_nodes`` nodes, n+1 edges.

    The topology is a uniform random labeled tree (decoded from a random
    Pruefer sequence) plus two distinct non-tree edges; arcs are oriented
    low index -> high index. Binary mode draws each arc's two-entry delay
    table uniformly from {0,1}^2; general mode draws table entries uniformly
    from {0..max_delay}.
    """
    if num_nodes < 4:
        raise ValueError(
            "need at least 4 nodes to place num_nodes + 1 distinct edges")
    if mode == "binary":
        if cycle_length != 2:
            raise ValueError("binary mode requires cycle length 2")
        max_delay = 1
    elif mode != "general":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    seq = [int(v) for v in rng.integers(0, num_nodes, size=num_nodes - 2)]
    tree = _tree_from_pruefer(seq, num_nodes)
    pool = sorted({(i, j) for i in range(num_nodes) for j in range(i + 1, num_nodes)} - tree)
    extra = rng.choice(len(pool), size=2, replace=False)
    arcs = tuple(sorted(tree | {pool[int(k)] for k in extra}))
    vals = rng.integers(0, max_delay + 1, size=(len(arcs), cycle_length))
    delays = tuple(PeriodicDelayTable(tuple(int(v) for v in row)) for row in vals)
    graph = NetworkGraph(num_nodes, arcs)
    return NscInstance(graph, cycle_length, delays, threshold, mode, seed=int(seed))


@dataclass(frozen=True)
class SamplingResult:
    trials: int
    found: Offsets | None
    exhausted: bool


def classical_random_sampling(instance: NscInstance, seed: int,
                              max_trials: int) -> SamplingResult:
    """Draw uniform assignments until one is feasible; geometric baseline."""
    if max_trials < 1:
        raise ValueError("max_trials must be >= 1")
    rng = np.random.default_rng(seed)
    V = instance.graph.num_nodes
    C = instance.cycle_length
    for trial in range(1, max_trials + 1):
        mu = tuple(int(v) for v in rng.integers(0, C, size=V))
        if kappa(instance, mu):
            return SamplingResult(trial, mu, False)
    return SamplingResult(max_trials, None, True)


# --- instance file format (JSON) -------------------------------------------

def instance_to_dict(instance: NscInstance) -> dict:
    edges = []
    for (i, j), d in zip(instance.graph.arcs, instance.delays):
        edges.append({"i": i, "j": j, "table": list(d.values)})
    return {
        "nodes": instance.graph.num_nodes,
        "cycle_length": instance.cycle_length,
        "threshold": instance.threshold,
        "mode": instance.mode,
        "edges": edges,
        "seed": instance.seed,
    }


def _require(d: dict, key: str, kind, where: str):
    if key not in d:
        raise InstanceFormatError(f"{where}: missing key {key!r}")
    value = d[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InstanceFormatError(f"{where}: key {key!r} must be {kind.__name__}")
    return value


def instance_from_dict(d: dict, where: str = "instance") -> NscInstance:
    if not isinstance(d, dict):
        raise InstanceFormatError(f"{where}: expected a JSON object")
    nodes = _require(d, "nodes", int, where)
    cycle = _require(d, "cycle_length", int, where)
    threshold = _require(d, "threshold", int, where)
    mode = _require(d, "mode", str, where)
    edges = _require(d, "edges", list, where)
    seed = d.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise InstanceFormatError(f"{where}: key 'seed' must be int or null")
    arcs = []
    delays: list[PeriodicDelayTable] = []
    for pos, e in enumerate(edges):
        here = f"{where}: edges[{pos}]"
        if not isinstance(e, dict):
            raise InstanceFormatError(f"{here}: expected an object")
        i = _require(e, "i", int, here)
        j = _require(e, "j", int, here)
        table = _require(e, "table", list, here)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in table):
            raise InstanceFormatError(f"{here}: table entries must be integers")
        if len(table) != cycle:
            raise InstanceFormatError(f"{here}: table must have cycle_length entries")
        arcs.append((i, j))
        try:
            delays.append(PeriodicDelayTable(tuple(table)))
        except ValueError as exc:
            raise InstanceFormatError(f"{here}: {exc}") from exc
    try:
        return NscInstance(NetworkGraph(nodes, tuple(arcs)), cycle, tuple(delays),
                           threshold, mode, seed=seed)
    except ValueError as exc:
        raise InstanceFormatError(f"{where}: {exc}") from exc


def dumps_instance(instance: NscInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"


def loads_instance(text: str, where: str = "instance") -> NscInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return instance_from_dict(data, where)


def save_instance(instance: NscInstance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(instance))


def load_instance(path: str | os.PathLike) -> NscInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read(), where=str(path))
