"""Fully dynamic structure maintaining a near-half-approximate solution.

One instance works for a fixed guess of the optimum value and a fixed
capacity.  The structure keeps, per level 0..T, a row of candidate buckets
(one per threshold-ladder step), matching solution slots, and an insertion
buffer.  Level l carries a size budget of 2^(T-l): deep levels are rebuilt
often and cheaply, shallow levels rarely.  Insertions stage into all buffers
and trigger a rebuild from the first level whose buffer fills; deletions
trigger a rebuild from a slot's level only once the slot has lost more than a
lazy_eps fraction of the elements it was built with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, DuplicateElementError, MissingElementError
from .oracle import Base, CountingOracle, ElementId
from .peeling import peel


@dataclass(frozen=True)
class CoreParams:
    """Parameters for one structure copy.

    k: cardinality budget (>= 1).
    opt_guess: working guess for the optimum value (> 0); the threshold ladder
        runs from opt_guess down to at most opt_guess / (2k).
    lazy_eps: fraction of a slot that may be deleted before its level is
        rebuilt; 0 rebuilds on the first hit.
    ladder_eps: ratio between consecutive ladder thresholds.
    peel_eps: error parameter of the batch-selection primitive.
    capacity: upper bound on the number of live elements (sets the level count).
    sample_cap: optional cap on mean-estimator samples; None keeps the exact
        Chernoff-derived count.
    """

    k: int
    opt_guess: float
    lazy_eps: float = 0.0
    ladder_eps: float = 1.0
    peel_eps: float = 0.1
    capacity: int = 2
    sample_cap: int | None = None
    levels: int = field(init=False)
    ladder_steps: int = field(init=False)
    taus: tuple = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.opt_guess <= 0:
            raise ConfigError("opt_guess must be positive")
        if not 0.0 <= self.lazy_eps < 1.0:
            raise ConfigError("lazy_eps must lie in [0, 1)")
        if self.ladder_eps <= 0:
            raise ConfigError("ladder_eps must be positive")
        if not 0.0 < self.peel_eps < 1.0:
            raise ConfigError("peel_eps must lie in (0, 1)")
        if self.capacity < 2:
            raise ConfigError("capacity must be >= 2")
        object.__setattr__(self, "levels", (self.capacity - 1).bit_length())
        steps = 1
        while (1.0 + self.ladder_eps) ** steps < 2 * self.k:
            steps += 1
        object.__setattr__(self, "ladder_steps", steps)
        ratio = 1.0 + self.ladder_eps
        object.__setattr__(
            self, "taus", tuple(self.opt_guess * ratio ** (-i) for i in range(steps + 1))
        )


class DynamicStructure:
    """Bucket grid over a threshold ladder; single-owner, externally serialized."""

    def __init__(self, params: CoreParams):
        self.params = params
        T, R = params.levels, params.ladder_steps
        self.live: set[ElementId] = set()
        # index [level][i]; i runs 1..R, slot 0 unused
        self.buckets: list[list[set]] = [[set() for _ in range(R + 1)] for _ in range(T + 1)]
        self.slots: list[list[set]] = [[set() for _ in range(R + 1)] for _ in range(T + 1)]
        self.slot_built_size = [[0] * (R + 1) for _ in range(T + 1)]
        self.slot_deletions = [[0] * (R + 1) for _ in range(T + 1)]
        self.buffers: list[set] = [set() for _ in range(T + 1)]
        self.slot_of: dict[ElementId, tuple[int, int]] = {}
        self._sol_base: Base | None = None
        self._sol_dirty = False

    # -- queries ------------------------------------------------------------

    def solution_size(self) -> int:
        return len(self.slot_of)

    def s_up(self, i: int, level: int) -> set:
        """Union of all slots up to and including slot i of the given level."""
        out: set[ElementId] = set()
        for l in range(level):
            for row in self.slots[l][1:]:
                out |= row
        for row in self.slots[level][1 : i + 1]:
            out |= row
        return out

    def solution(self, oracle: CountingOracle) -> tuple[frozenset, float]:
        """Current solution and its value; one call only when slots lost members."""
        members = frozenset(self.slot_of)
        if not members:
            return members, 0.0
        if self._sol_dirty or self._sol_base is None:
            self._sol_base = oracle.base(members)
            self._sol_dirty = False
        return members, self._sol_base.value

    # -- updates ------------------------------------------------------------

    def insert(self, e: ElementId, oracle: CountingOracle, rng) -> None:
        if e in self.live:
            raise DuplicateElementError(f"element {e} is already live")
        self.live.add(e)
        for buf in self.buffers:
            buf.add(e)
        T = self.params.levels
        for level in range(T + 1):
            if len(self.buffers[level]) >= (1 << (T - level)):
                for l in range(level, T + 1):
                    self._clear_slots(l)
                    self.buffers[l].clear()
                self._rebuild_from(level, oracle, rng)
                return

    def delete(self, e: ElementId, oracle: CountingOracle, rng) -> None:
        if e not in self.live:
            raise MissingElementError(f"element {e} is not live")
        self.live.discard(e)
        for row in self.buckets:
            for bucket in row[1:]:
                bucket.discard(e)
        for buf in self.buffers:
            buf.discard(e)
        loc = self.slot_of.pop(e, None)
        if loc is None:
            return
        i, level = loc
        self.slots[level][i].discard(e)
        self.slot_deletions[level][i] += 1
        self._sol_dirty = True
        p = self.params
        if self.slot_deletions[level][i] > p.lazy_eps * self.slot_built_size[level][i]:
            for l in range(level, p.levels + 1):
                self._clear_slots(l)
            self._rebuild_from(level, oracle, rng)

    # -- construction -------------------------------------------------------

    def _clear_slots(self, level: int) -> None:
        for i, slot in enumerate(self.slots[level]):
            for e in slot:
                self.slot_of.pop(e, None)
            slot.clear()
            self.slot_built_size[level][i] = 0
            self.slot_deletions[level][i] = 0

    def _rebuild_from(self, level: int, oracle: CountingOracle, rng) -> None:
        """Reconstruct levels level..T; caller already emptied their slots."""
        p = self.params
        prefix_members: set[ElementId] = set()
        for l in range(level):
            for row in self.slots[l][1:]:
                prefix_members |= row
        prefix = oracle.base(prefix_members)

        l = level
        while True:
            self.buffers[l].clear()
            if l == 0:
                seed = set(self.live)
            else:
                seed = set(self.buffers[l - 1])
                for bucket in self.buckets[l - 1][1:]:
                    seed |= bucket
            for i in range(1, p.ladder_steps + 1):
                self.buckets[l][i] = set(seed)
                prefix = self._bucket_construct(i, l, oracle, rng, prefix)
            if self.solution_size() >= p.k:
                # Solution is full: drop candidate pools from here down so the
                # per-level size budget holds at rest.
                for l2 in range(l, p.levels + 1):
                    for bucket in self.buckets[l2][1:]:
                        bucket.clear()
                break
            if l == p.levels:
                break
            l += 1

        self._sol_base = prefix
        self._sol_dirty = False

    def _bucket_construct(
        self, i: int, level: int, oracle: CountingOracle, rng, prefix: Base
    ) -> Base:
        """Filter bucket (i, level) and peel batches into its slot until the
        bucket drops under the level budget or the solution fills."""
        p = self.params
        cap = 1 << (p.levels - level)
        lo, hi = p.taus[i], p.taus[i - 1]
        slot = self.slots[level][i]
        while True:
            kept = {e for e in self.buckets[level][i] if lo <= oracle.gain(prefix, e) <= hi}
            self.buckets[level][i] = kept
            if len(kept) < cap or self.solution_size() >= p.k:
                break
            budget = p.k - self.solution_size()
            batch = peel(kept, lo, oracle, prefix, budget, p.peel_eps, rng, p.sample_cap)
            slot.update(batch)
            for e in batch:
                self.slot_of[e] = (i, level)
            prefix = oracle.extend(prefix, batch)
        self.slot_built_size[level][i] = len(slot)
        self.slot_deletions[level][i] = 0
        return prefix

    # -- integrity ----------------------------------------------------------

    def check_invariants(self, deep: bool = True) -> bool:
        """Size and consistency checks meant to hold between operations."""
        p = self.params
        T = p.levels
        if self.solution_size() > p.k:
            return False
        for level in range(T + 1):
            budget = 1 << (T - level)
            if len(self.buffers[level]) > budget:
                return False
            row_total = sum(len(b) for b in self.buckets[level][1:])
            if row_total > (p.ladder_steps + 1) * budget:
                union: set = set()
                for b in self.buckets[level][1:]:
                    union |= b
                if len(union) > (p.ladder_steps + 1) * budget:
                    return False
        slot_total = 0
        for level in range(T + 1):
            for i in range(1, p.ladder_steps + 1):
                slot = self.slots[level][i]
                slot_total += len(slot)
                for e in slot:
                    if self.slot_of.get(e) != (i, level):
                        return False
                    if e not in self.live:
                        return False
        if slot_total != len(self.slot_of):
            return False  # slots overlap or the index is stale
        if deep:
            for level in range(T + 1):
                if not self.buffers[level] <= self.live:
                    return False
                for bucket in self.buckets[level][1:]:
                    if not bucket <= self.live:
                        return False
        return True
