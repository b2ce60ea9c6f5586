"""Guess ensemble: structure copies across geometric guesses of the optimum.

Each copy runs the dynamic structure for one guess value (1+peel_eps)^j.  An
element is routed to the copies whose guess lies within [f(e), k/peel_eps *
f(e)]: smaller guesses are dominated by the element itself, larger ones gain
almost nothing from it.  Copies are created lazily and retired when no live
element routes to them.  The capacity bound doubles (with a full replay)
whenever the live count reaches it, so no bound on the stream length is
needed up front.
"""

from __future__ import annotations

import math
from typing import Callable

from .dynamic_core import CoreParams, DynamicStructure
from .errors import DuplicateElementError, MissingElementError
from .oracle import CountingOracle, ElementId

StructureFactory = Callable[[float, int], object]


class GuessEnsemble:
    def __init__(
        self,
        k: int,
        lazy_eps: float = 0.0,
        ladder_eps: float = 1.0,
        peel_eps: float = 0.1,
        sample_cap: int | None = None,
        structure_factory: StructureFactory | None = None,
        initial_capacity: int = 2,
    ):
        self.k = k
        self.peel_eps = peel_eps
        self.capacity = initial_capacity
        if structure_factory is None:
            structure_factory = lambda guess, cap: DynamicStructure(
                CoreParams(
                    k=k,
                    opt_guess=guess,
                    lazy_eps=lazy_eps,
                    ladder_eps=ladder_eps,
                    peel_eps=peel_eps,
                    capacity=cap,
                    sample_cap=sample_cap,
                )
            )
        self._factory = structure_factory
        self.copies: dict[int, object] = {}
        self.refs: dict[int, int] = {}
        # live element -> singleton value, in insertion order (replayed on growth)
        self.registry: dict[ElementId, float] = {}

    # -- routing ------------------------------------------------------------

    def guess_value(self, exponent: int) -> float:
        return (1.0 + self.peel_eps) ** exponent

    def window(self, singleton_value: float) -> range:
        """Exponents j with singleton_value <= (1+eps)^j <= (k/eps) * value."""
        if singleton_value <= 0:
            return range(0)
        ratio = 1.0 + self.peel_eps
        lo = math.floor(math.log(singleton_value, ratio))
        while ratio**lo < singleton_value:
            lo += 1
        while ratio ** (lo - 1) >= singleton_value:
            lo -= 1
        upper = singleton_value * self.k / self.peel_eps
        hi = math.ceil(math.log(upper, ratio))
        while ratio**hi > upper:
            hi -= 1
        while ratio ** (hi + 1) <= upper:
            hi += 1
        # degenerate parameter corner: always route to at least one copy
        hi = max(hi, lo)
        return range(lo, hi + 1)

    # -- operations ---------------------------------------------------------

    def insert(self, e: ElementId, oracle: CountingOracle, rng) -> None:
        if e in self.registry:
            raise DuplicateElementError(f"element {e} is already live")
        value = oracle.evaluate((e,))
        self.registry[e] = value
        for j in self.window(value):
            if j not in self.copies:
                self.copies[j] = self._factory(self.guess_value(j), self.capacity)
                self.refs[j] = 0
            self.refs[j] += 1
            self.copies[j].insert(e, oracle, rng)
        if len(self.registry) >= self.capacity:
            self._grow(oracle, rng)

    def delete(self, e: ElementId, oracle: CountingOracle, rng) -> None:
        if e not in self.registry:
            raise MissingElementError(f"element {e} is not live")
        value = self.registry.pop(e)
        for j in self.window(value):
            self.copies[j].delete(e, oracle, rng)
            self.refs[j] -= 1
            if self.refs[j] == 0:
                del self.copies[j]
                del self.refs[j]

    def best(self, oracle: CountingOracle) -> tuple[frozenset, float]:
        """Highest-value solution across copies; ties keep the smallest guess."""
        best_set: frozenset = frozenset()
        best_value = 0.0
        for j in sorted(self.copies):
            members, value = self.copies[j].solution(oracle)
            if value > best_value:
                best_set, best_value = members, value
        return best_set, best_value

    def _grow(self, oracle: CountingOracle, rng) -> None:
        """Double the capacity and rebuild every copy by replaying the registry."""
        self.capacity *= 2
        self.copies = {}
        self.refs = {}
        for e, value in self.registry.items():
            for j in self.window(value):
                if j not in self.copies:
                    self.copies[j] = self._factory(self.guess_value(j), self.capacity)
                    self.refs[j] = 0
                self.refs[j] += 1
                self.copies[j].insert(e, oracle, rng)

    # -- integrity ----------------------------------------------------------

    def check_invariants(self, deep: bool = True) -> bool:
        if len(self.registry) >= self.capacity:
            return False
        expected_refs: dict[int, int] = {}
        for value in self.registry.values():
            for j in self.window(value):
                expected_refs[j] = expected_refs.get(j, 0) + 1
        if expected_refs != self.refs or set(self.copies) != set(self.refs):
            return False
        for e, value in self.registry.items():
            for j in self.window(value):
                if e not in self.copies[j].live:
                    return False
        return all(copy.check_invariants(deep) for copy in self.copies.values())
