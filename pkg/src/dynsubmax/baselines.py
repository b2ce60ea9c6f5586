"""Comparison algorithms: threshold-sieve streaming with restarts, random-k."""

from __future__ import annotations

import math

from .errors import DuplicateElementError, MissingElementError
from .oracle import Base, CountingOracle, ElementId


class _SieveCopy:
    __slots__ = ("guess", "members", "base")

    def __init__(self, guess: float, base: Base):
        self.guess = guess
        self.members: set[ElementId] = set()
        self.base = base


class SieveStreaming:
    """Insertion-only threshold sieve, adapted to deletions by restarts.

    Parallel copies run for geometric guesses of the optimum over
    [max singleton, 2k * max singleton], anchored to the largest live
    singleton so the range follows deletions.  A copy with guess v admits an
    arriving element while it has room and the element's gain covers the
    per-remaining-slot deficit (v/2 - f(S)) / (k - |S|).  Deleting an element
    restarts exactly the copies whose solution contains it, by replaying the
    live set in insertion order.
    """

    def __init__(self, k: int, sieve_eps: float = 0.1):
        self.k = k
        self.sieve_eps = sieve_eps
        self.copies: dict[int, _SieveCopy] = {}
        self.registry: dict[ElementId, float] = {}  # live singletons, insertion order
        self.max_singleton = 0.0

    def _guess_range(self) -> range:
        if self.max_singleton <= 0:
            return range(0)
        ratio = 1.0 + self.sieve_eps
        lo = math.floor(math.log(self.max_singleton, ratio))
        while ratio**lo < self.max_singleton:
            lo += 1
        while ratio ** (lo - 1) >= self.max_singleton:
            lo -= 1
        upper = 2.0 * self.k * self.max_singleton
        hi = math.ceil(math.log(upper, ratio))
        while ratio**hi > upper:
            hi -= 1
        while ratio ** (hi + 1) <= upper:
            hi += 1
        return range(lo, hi + 1)

    def _offer(self, copy: _SieveCopy, e: ElementId, oracle: CountingOracle) -> None:
        room = self.k - len(copy.members)
        if room <= 0:
            return
        extended = oracle.extend(copy.base, (e,))
        gain = extended.value - copy.base.value
        # zero-gain elements never help the objective; do not spend slots on them
        if gain > 0 and gain >= (copy.guess / 2.0 - copy.base.value) / room:
            copy.members.add(e)
            copy.base = extended

    def insert(self, e: ElementId, oracle: CountingOracle) -> None:
        if e in self.registry:
            raise DuplicateElementError(f"element {e} is already live")
        value = oracle.evaluate((e,))
        self.registry[e] = value
        self.max_singleton = max(self.max_singleton, value)
        ratio = 1.0 + self.sieve_eps
        for j in self._guess_range():
            if j not in self.copies:
                self.copies[j] = _SieveCopy(ratio**j, oracle.base(()))
        for j in sorted(self.copies):
            self._offer(self.copies[j], e, oracle)

    def delete(self, e: ElementId, oracle: CountingOracle) -> None:
        if e not in self.registry:
            raise MissingElementError(f"element {e} is not live")
        del self.registry[e]
        self.max_singleton = max(self.registry.values(), default=0.0)
        for j in sorted(self.copies):
            copy = self.copies[j]
            if e in copy.members:
                copy.members = set()
                copy.base = oracle.base(())
                for e2 in self.registry:
                    self._offer(copy, e2, oracle)

    def best(self, oracle: CountingOracle) -> tuple[frozenset, float]:
        best_set: frozenset = frozenset()
        best_value = 0.0
        for j in sorted(self.copies):
            copy = self.copies[j]
            if copy.base.value > best_value:
                best_set, best_value = frozenset(copy.members), copy.base.value
        return best_set, best_value


class RandomK:
    """Maintains a uniformly random subset of k live elements.

    Insert keeps uniformity by replacing a random reservoir member with
    probability k / live-count; deleting a reservoir member draws a uniform
    replacement among the survivors.  Costs no oracle calls.
    """

    def __init__(self, k: int):
        self.k = k
        self.registry: dict[ElementId, None] = {}
        self.reservoir: set[ElementId] = set()

    def insert(self, e: ElementId, rng) -> None:
        if e in self.registry:
            raise DuplicateElementError(f"element {e} is already live")
        self.registry[e] = None
        n = len(self.registry)
        if len(self.reservoir) < self.k:
            self.reservoir.add(e)
        elif rng.random() < self.k / n:
            out = rng.choice(sorted(self.reservoir))
            self.reservoir.discard(out)
            self.reservoir.add(e)

    def delete(self, e: ElementId, rng) -> None:
        if e not in self.registry:
            raise MissingElementError(f"element {e} is not live")
        del self.registry[e]
        if e not in self.reservoir:
            return
        self.reservoir.discard(e)
        survivors = [x for x in self.registry if x not in self.reservoir]
        if survivors:
            self.reservoir.add(rng.choice(survivors))

    def current(self) -> frozenset:
        return frozenset(self.reservoir)
