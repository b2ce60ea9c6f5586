"""Set-function value oracles, the graph coverage objective, and call accounting.

Call convention used everywhere (algorithms and baselines alike): one oracle
call is one evaluation of f on one set.  A caller that already holds f(S) pays
a single call for a marginal gain; without that cached value a marginal costs
two calls.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .errors import UnknownElementError

ElementId = int


class Graph:
    """Undirected graph on nodes 0..n-1 with normalized adjacency.

    Normalization: self-loops dropped, parallel edges deduplicated, edges
    symmetrized.  Neighbor lists are sorted tuples, so equal graphs compare
    equal structurally.
    """

    __slots__ = ("node_count", "neighbors")

    def __init__(self, node_count: int, neighbors: Iterable[Iterable[int]]):
        self.node_count = node_count
        self.neighbors = tuple(tuple(sorted(set(ns))) for ns in neighbors)
        if len(self.neighbors) != node_count:
            raise ValueError("adjacency length does not match node_count")

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{node_count - 1}")
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(node_count, adj)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def edge_count(self) -> int:
        return sum(len(ns) for ns in self.neighbors) // 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.node_count == other.node_count
            and self.neighbors == other.neighbors
        )

    def __hash__(self):
        return hash((self.node_count, self.neighbors))


def coverage_value(graph: Graph, items: Iterable[int]) -> int:
    """size of N(Z) union Z computed by plain set union.

    Independent of the bitmask fast path in CoverageFunction; tests cross-check
    the two.
    """
    covered: set[int] = set()
    for v in items:
        if not (0 <= v < graph.node_count):
            raise UnknownElementError(f"node {v} not in graph")
        covered.add(v)
        covered.update(graph.neighbors[v])
    return len(covered)


class Base(NamedTuple):
    """Opaque evaluation state for a fixed base set, carrying its value."""

    handle: object
    value: float


class SetFunction:
    """Monotone submodular set function with an incremental evaluation state.

    The default state is a frozenset plus a full re-evaluation on extension;
    subclasses override for speed.  State handling never changes values, only
    wall-clock cost.
    """

    def value(self, items: Iterable[ElementId]) -> float:
        raise NotImplementedError

    def state(self, items: Iterable[ElementId]) -> Base:
        members = frozenset(items)
        return Base(members, self.value(members))

    def extend(self, base: Base, items: Iterable[ElementId]) -> Base:
        members = base.handle | frozenset(items)
        return Base(members, self.value(members))

    def peek(self, base: Base, e: ElementId) -> float:
        """Value gain of adding e to the base set (no new state kept)."""
        return self.extend(base, (e,)).value - base.value


class ModularFunction(SetFunction):
    """f(S) = sum of fixed per-element weights; used by tests and synthetics."""

    def __init__(self, weights: dict[ElementId, float]):
        self.weights = dict(weights)

    def _weight(self, e: ElementId) -> float:
        try:
            return self.weights[e]
        except KeyError:
            raise UnknownElementError(f"element {e} not in ground set") from None

    def value(self, items: Iterable[ElementId]) -> float:
        return float(sum(self._weight(e) for e in set(items)))

    def extend(self, base: Base, items: Iterable[ElementId]) -> Base:
        members: frozenset = base.handle  # type: ignore[assignment]
        fresh = [e for e in set(items) if e not in members]
        total = base.value + sum(self._weight(e) for e in fresh)
        return Base(members | frozenset(fresh), total)

    def peek(self, base: Base, e: ElementId) -> float:
        if e in base.handle:  # type: ignore[operator]
            return 0.0
        return self._weight(e)


class CoverageFunction(SetFunction):
    """Dominating-set objective f(Z) = size of N(Z) union Z on a fixed graph.

    Per-node closed neighborhoods are precomputed as bitmasks, so evaluating
    a set is a fold of integer ORs and one popcount; extending a state costs
    O(deg) instead of O(|Z| * deg).
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        masks = []
        for v in range(graph.node_count):
            m = 1 << v
            for u in graph.neighbors[v]:
                m |= 1 << u
            masks.append(m)
        self.masks = masks

    def _mask(self, e: ElementId) -> int:
        if not (0 <= e < self.graph.node_count):
            raise UnknownElementError(f"node {e} not in graph")
        return self.masks[e]

    def value(self, items: Iterable[ElementId]) -> float:
        bits = 0
        for e in items:
            bits |= self._mask(e)
        return float(bits.bit_count())

    def state(self, items: Iterable[ElementId]) -> Base:
        bits = 0
        for e in items:
            bits |= self._mask(e)
        return Base(bits, float(bits.bit_count()))

    def extend(self, base: Base, items: Iterable[ElementId]) -> Base:
        bits: int = base.handle  # type: ignore[assignment]
        for e in items:
            bits |= self._mask(e)
        return Base(bits, float(bits.bit_count()))

    def peek(self, base: Base, e: ElementId) -> float:
        bits: int = base.handle  # type: ignore[assignment]
        return float((bits | self._mask(e)).bit_count()) - base.value


class CountingOracle:
    """Wraps a set function and counts evaluations.

    Single-owner under mutation: concurrent structures must each hold their
    own counter (the wrapped function itself is read-only and shareable).
    """

    def __init__(self, fn: SetFunction):
        self.fn = fn
        self.calls = 0

    def evaluate(self, items: Iterable[ElementId]) -> float:
        self.calls += 1
        return self.fn.value(items)

    def base(self, items: Iterable[ElementId]) -> Base:
        """Evaluate f on a base set, returning reusable state. One call."""
        self.calls += 1
        return self.fn.state(items)

    def extend(self, base: Base, items: Iterable[ElementId]) -> Base:
        """Evaluate f on the base set plus items, returning new state. One call."""
        self.calls += 1
        return self.fn.extend(base, items)

    def gain(self, base: Base, e: ElementId) -> float:
        """Marginal gain of e over a base whose value is already paid for. One call."""
        self.calls += 1
        return self.fn.peek(base, e)

    def marginal_gain(
        self,
        e: ElementId,
        items: Iterable[ElementId],
        cached_value: float | None = None,
    ) -> float:
        """f(S + {e}) - f(S); two calls, or one when f(S) is supplied."""
        members = set(items)
        if cached_value is None:
            cached_value = self.evaluate(members)
        members.add(e)
        return self.evaluate(members) - cached_value

    def query_count(self) -> int:
        return self.calls

    def reset_count(self) -> None:
        self.calls = 0
