"""Experiment harness: graph ingestion, stream generators, runs, metrics.

A run replays a stream of insert/delete events through one algorithm,
recording per-operation oracle calls and the value of the reported solution.
The solution is queried after every operation; the cost of that query is kept
in a separate column so the per-operation algorithm cost matches the
algorithm's own accounting.
"""

from __future__ import annotations

import csv
import random
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .baselines import RandomK, SieveStreaming
from .dynamic_core import CoreParams
from .errors import ConfigError
from .meta import GuessEnsemble
from .oracle import CountingOracle, CoverageFunction, ElementId, Graph, SetFunction
from .reference import greedy
from .simplified import SimplifiedStructure

ALGORITHMS = ("full", "simple", "sieve", "random", "greedy")


@dataclass(frozen=True)
class StreamEvent:
    kind: str  # "insert" | "delete"
    element: ElementId


@dataclass(frozen=True)
class SolutionAwareDeleteStream:
    """Insert all of `order`, then repeatedly delete the highest-degree node
    of the algorithm's current solution (highest-degree live node when the
    solution is empty).  Resolved during the run, so not a plain event list."""

    order: tuple[int, ...]


@dataclass(frozen=True)
class MetricsRecord:
    op_index: int
    oracle_calls_this_op: int
    cumulative_calls: int
    solution_value: float
    report_calls: int
    algo: str
    seed: int
    k: int
    eps: float


@dataclass(frozen=True)
class AlgoParams:
    lazy_eps: float = 0.0
    ladder_eps: float = 1.0
    peel_eps: float = 0.1
    sample_cap: int | None = 64
    sieve_eps: float = 0.1


@dataclass(frozen=True)
class Summary:
    algo: str
    k: int
    eps: float
    repeats: int
    mean_avg_value: float
    std_avg_value: float
    mean_total_calls: float
    std_total_calls: float


# -- dataset ingestion -------------------------------------------------------


class SnapParseError(ValueError):
    pass


def load_snap_edges(path) -> tuple[Graph, dict[int, int]]:
    """Parse a whitespace-separated edge list; '#' lines are comments.

    Node ids are remapped densely to 0..n-1 in order of first appearance;
    the mapping original-id -> dense-id is returned alongside the graph.
    Output is normalized: undirected, deduplicated, no self-loops.
    """
    mapping: dict[int, int] = {}
    edges: list[tuple[int, int]] = []

    def dense(orig: int) -> int:
        if orig not in mapping:
            mapping[orig] = len(mapping)
        return mapping[orig]

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise SnapParseError(f"{path}:{lineno}: expected two fields, got {len(parts)}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise SnapParseError(f"{path}:{lineno}: non-integer node id") from None
            edges.append((dense(u), dense(v)))
    return Graph.from_edges(len(mapping), edges), mapping


def write_snap_edges(path, graph: Graph) -> None:
    """Emit a graph as an edge list readable by load_snap_edges."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes {graph.node_count} edges {graph.edge_count()}\n")
        for u in range(graph.node_count):
            for v in graph.neighbors[u]:
                if u < v:
                    fh.write(f"{u} {v}\n")


# -- synthetic graphs --------------------------------------------------------


def synthetic_gnm(n: int, m: int, rng: random.Random) -> Graph:
    """Uniform random graph with n nodes and (up to) m distinct edges."""
    edges: set[tuple[int, int]] = set()
    limit = n * (n - 1) // 2
    m = min(m, limit)
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, edges)


def synthetic_preferential(n: int, attach: int, rng: random.Random) -> Graph:
    """Preferential-attachment graph: each new node links to `attach` existing
    nodes sampled proportionally to degree."""
    if n < attach + 1:
        raise ConfigError("need at least attach+1 nodes")
    edges: list[tuple[int, int]] = []
    endpoints: list[int] = []
    for u in range(attach + 1):
        for v in range(u + 1, attach + 1):
            edges.append((u, v))
            endpoints.extend((u, v))
    for u in range(attach + 1, n):
        targets: set[int] = set()
        while len(targets) < attach:
            targets.add(rng.choice(endpoints))
        for v in targets:
            edges.append((u, v))
            endpoints.extend((u, v))
    return Graph.from_edges(n, edges)


# -- stream generators -------------------------------------------------------


def gen_window_stream(order: Sequence[ElementId], window: int) -> list[StreamEvent]:
    """Sliding window over `order`: from position `window` on, each insert is
    preceded by the delete of the element that entered `window` steps earlier;
    trailing deletes flush the window."""
    if window < 1:
        raise ConfigError("window must be >= 1")
    events: list[StreamEvent] = []
    for t, e in enumerate(order):
        if t >= window:
            events.append(StreamEvent("delete", order[t - window]))
        events.append(StreamEvent("insert", e))
    tail = min(window, len(order))
    for e in order[len(order) - tail :]:
        events.append(StreamEvent("delete", e))
    return events


def gen_degree_delete_stream(graph: Graph, rng: random.Random) -> list[StreamEvent]:
    """Insert all nodes in shuffled order, then delete them in non-increasing
    degree order (ties by id)."""
    order = list(range(graph.node_count))
    rng.shuffle(order)
    events = [StreamEvent("insert", e) for e in order]
    by_degree = sorted(range(graph.node_count), key=lambda v: (-graph.degree(v), v))
    events.extend(StreamEvent("delete", v) for v in by_degree)
    return events


def check_stream_legality(events: Iterable[StreamEvent]) -> bool:
    live: set[ElementId] = set()
    for ev in events:
        if ev.kind == "insert":
            if ev.element in live:
                return False
            live.add(ev.element)
        elif ev.kind == "delete":
            if ev.element not in live:
                return False
            live.discard(ev.element)
        else:
            return False
    return True


# -- algorithm adapters ------------------------------------------------------


class _EnsembleAdapter:
    def __init__(self, fn: SetFunction, k: int, params: AlgoParams, rng, simplified: bool):
        self.oracle = CountingOracle(fn)
        self.rng = rng
        factory = None
        if simplified:
            factory = lambda guess, cap: SimplifiedStructure(
                CoreParams(
                    k=k,
                    opt_guess=guess,
                    lazy_eps=params.lazy_eps,
                    ladder_eps=params.ladder_eps,
                    peel_eps=params.peel_eps,
                    capacity=cap,
                    sample_cap=params.sample_cap,
                )
            )
        self.ensemble = GuessEnsemble(
            k,
            lazy_eps=params.lazy_eps,
            ladder_eps=params.ladder_eps,
            peel_eps=params.peel_eps,
            sample_cap=params.sample_cap,
            structure_factory=factory,
        )

    def apply(self, ev: StreamEvent) -> None:
        if ev.kind == "insert":
            self.ensemble.insert(ev.element, self.oracle, self.rng)
        else:
            self.ensemble.delete(ev.element, self.oracle, self.rng)

    def current(self) -> tuple[frozenset, float]:
        return self.ensemble.best(self.oracle)


class _SieveAdapter:
    def __init__(self, fn: SetFunction, k: int, params: AlgoParams, rng):
        self.oracle = CountingOracle(fn)
        self.sieve = SieveStreaming(k, sieve_eps=params.sieve_eps)

    def apply(self, ev: StreamEvent) -> None:
        if ev.kind == "insert":
            self.sieve.insert(ev.element, self.oracle)
        else:
            self.sieve.delete(ev.element, self.oracle)

    def current(self) -> tuple[frozenset, float]:
        return self.sieve.best(self.oracle)


class _RandomAdapter:
    def __init__(self, fn: SetFunction, k: int, params: AlgoParams, rng):
        self.oracle = CountingOracle(fn)
        self.rng = rng
        self.state = RandomK(k)

    def apply(self, ev: StreamEvent) -> None:
        if ev.kind == "insert":
            self.state.insert(ev.element, self.rng)
        else:
            self.state.delete(ev.element, self.rng)

    def current(self) -> tuple[frozenset, float]:
        members = self.state.current()
        return members, self.oracle.evaluate(members)


class _GreedyAdapter:
    def __init__(self, fn: SetFunction, k: int, params: AlgoParams, rng):
        self.oracle = CountingOracle(fn)
        self.k = k
        self.live: set[ElementId] = set()
        self._cached: tuple[frozenset, float] = (frozenset(), 0.0)

    def apply(self, ev: StreamEvent) -> None:
        if ev.kind == "insert":
            self.live.add(ev.element)
        else:
            self.live.discard(ev.element)
        self._cached = greedy(self.oracle, self.live, self.k)

    def current(self) -> tuple[frozenset, float]:
        return self._cached


def make_algorithm(algo: str, fn: SetFunction, k: int, params: AlgoParams, rng):
    if algo == "full":
        return _EnsembleAdapter(fn, k, params, rng, simplified=False)
    if algo == "simple":
        return _EnsembleAdapter(fn, k, params, rng, simplified=True)
    if algo == "sieve":
        return _SieveAdapter(fn, k, params, rng)
    if algo == "random":
        return _RandomAdapter(fn, k, params, rng)
    if algo == "greedy":
        return _GreedyAdapter(fn, k, params, rng)
    raise ConfigError(f"unknown algorithm {algo!r}")


# -- experiment execution ----------------------------------------------------


@dataclass
class ExperimentResult:
    algo: str
    k: int
    eps: float
    seed: int
    records: list[list[MetricsRecord]]  # one list per repeat
    summary: Summary
    blocks: list[tuple[int, float, float]]  # (block index, mean f, cumulative calls)


def _repeat_rng(seed: int, repeat: int) -> random.Random:
    return random.Random(f"{seed}:{repeat}")


def _resolve_events(stream, adapter) -> Iterable[StreamEvent]:
    if isinstance(stream, SolutionAwareDeleteStream):
        return _solution_aware_events(stream, adapter)
    return stream


def _solution_aware_events(stream: SolutionAwareDeleteStream, adapter):
    graph: Graph = stream_graph_of(adapter)
    live: set[int] = set()
    for e in stream.order:
        live.add(e)
        yield StreamEvent("insert", e)
    while live:
        members, _ = adapter.current()
        pool = [v for v in members if v in live] or sorted(live)
        victim = max(pool, key=lambda v: (graph.degree(v), -v))
        live.discard(victim)
        yield StreamEvent("delete", victim)


def stream_graph_of(adapter) -> Graph:
    fn = adapter.oracle.fn
    if isinstance(fn, CoverageFunction):
        return fn.graph
    raise ConfigError("solution-aware deletions need a graph objective")


def run_repeat(algo: str, fn: SetFunction, stream, k: int, params: AlgoParams,
               seed: int, repeat: int) -> list[MetricsRecord]:
    rng = _repeat_rng(seed, repeat)
    adapter = make_algorithm(algo, fn, k, params, rng)
    oracle = adapter.oracle
    records: list[MetricsRecord] = []
    cumulative = 0
    for op_index, ev in enumerate(_resolve_events(stream, adapter), start=1):
        before = oracle.query_count()
        adapter.apply(ev)
        op_calls = oracle.query_count() - before
        cumulative += op_calls
        before = oracle.query_count()
        _, value = adapter.current()
        report_calls = oracle.query_count() - before
        records.append(
            MetricsRecord(
                op_index=op_index,
                oracle_calls_this_op=op_calls,
                cumulative_calls=cumulative,
                solution_value=value,
                report_calls=report_calls,
                algo=algo,
                seed=seed,
                k=k,
                eps=params.lazy_eps,
            )
        )
    return records


def aggregate_blocks(per_repeat: list[list[MetricsRecord]], n_blocks: int = 400):
    """Average f per block and cumulative calls at block end, averaged over
    repeats.  Blocks are equal-sized; the last absorbs the remainder."""
    if not per_repeat or not per_repeat[0]:
        return []
    n_ops = len(per_repeat[0])
    blocks = min(n_blocks, n_ops)
    size = n_ops // blocks
    bounds = [(b * size, (b + 1) * size if b < blocks - 1 else n_ops) for b in range(blocks)]
    rows = []
    for b, (start, stop) in enumerate(bounds, start=1):
        mean_f = statistics.fmean(
            rec.solution_value for records in per_repeat for rec in records[start:stop]
        )
        mean_oc = statistics.fmean(records[stop - 1].cumulative_calls for records in per_repeat)
        rows.append((b, mean_f, mean_oc))
    return rows


def summarize(algo: str, k: int, eps: float, per_repeat: list[list[MetricsRecord]]) -> Summary:
    avg_values = []
    totals = []
    for records in per_repeat:
        if records:
            avg_values.append(statistics.fmean(r.solution_value for r in records))
            totals.append(records[-1].cumulative_calls)
        else:
            avg_values.append(0.0)
            totals.append(0)
    spread = statistics.stdev if len(per_repeat) > 1 else lambda xs: 0.0
    return Summary(
        algo=algo,
        k=k,
        eps=eps,
        repeats=len(per_repeat),
        mean_avg_value=statistics.fmean(avg_values),
        std_avg_value=spread(avg_values),
        mean_total_calls=statistics.fmean(totals),
        std_total_calls=spread(totals),
    )


def run_experiment(algo: str, fn: SetFunction, stream, k: int, params: AlgoParams,
                   seed: int, repeats: int) -> ExperimentResult:
    if algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algo!r}")
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    per_repeat = [run_repeat(algo, fn, stream, k, params, seed, r) for r in range(repeats)]
    return ExperimentResult(
        algo=algo,
        k=k,
        eps=params.lazy_eps,
        seed=seed,
        records=per_repeat,
        summary=summarize(algo, k, params.lazy_eps, per_repeat),
        blocks=aggregate_blocks(per_repeat),
    )


# -- output files ------------------------------------------------------------


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    return rows[0], rows[1:]


def write_manifest(path, fields: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in fields.items():
            fh.write(f"{key}={value}\n")


def parse_manifest(path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, value = line.partition("=")
            out[key] = value
    return out
