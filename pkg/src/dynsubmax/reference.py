"""Desk-scale ground truth: exact optimum by enumeration, and lazy greedy."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import InstanceTooLargeError
from .oracle import CountingOracle, ElementId

ENUMERATION_BUDGET = 10_000_000


@dataclass(frozen=True)
class ExactResult:
    value: float
    witness: frozenset


def brute_force_opt(oracle: CountingOracle, live: Iterable[ElementId], k: int) -> ExactResult:
    """Exact max of f over subsets of size <= k, by full enumeration.

    Monotonicity lets us enumerate only subsets of size exactly min(k, n).
    Ties keep the lexicographically first witness.
    """
    items = sorted(live)
    size = min(k, len(items))
    if size == 0:
        return ExactResult(0.0, frozenset())
    if comb(len(items), size) > ENUMERATION_BUDGET:
        raise InstanceTooLargeError(
            f"C({len(items)}, {size}) exceeds the enumeration budget"
        )
    best_value = -1.0
    best_set: tuple = ()
    for subset in combinations(items, size):
        value = oracle.evaluate(subset)
        if value > best_value:
            best_value = value
            best_set = subset
    return ExactResult(best_value, frozenset(best_set))


def greedy(oracle: CountingOracle, live: Iterable[ElementId], k: int) -> tuple[frozenset, float]:
    """k rounds of argmax marginal gain, ties broken by smallest id.

    Lazy evaluation: stale gains are upper bounds under submodularity, so an
    entry is accepted once its refreshed gain still sorts first.  Produces
    exactly the same set as the plain greedy scan.
    """
    items = sorted(set(live))
    if not items or k < 1:
        return frozenset(), 0.0
    base = oracle.base(())
    heap = [(-oracle.gain(base, e), e) for e in items]
    heapq.heapify(heap)
    picked: list[ElementId] = []
    stale_since = {e: len(picked) for _, e in heap}
    while heap and len(picked) < k:
        neg_gain, e = heapq.heappop(heap)
        if stale_since[e] == len(picked):
            picked.append(e)
            base = oracle.extend(base, (e,))
            continue
        fresh = oracle.gain(base, e)
        stale_since[e] = len(picked)
        if not heap or (-fresh, e) <= heap[0]:
            picked.append(e)
            base = oracle.extend(base, (e,))
        else:
            heapq.heappush(heap, (-fresh, e))
    return frozenset(picked), base.value
