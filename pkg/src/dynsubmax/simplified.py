"""Single-threshold variant used for the benchmark runs.

Keeps one candidate pool per level instead of a threshold ladder: level l
holds elements whose marginal gain over the already-picked prefix is at least
opt_guess / (2k), capped at 2^(T-l) elements after construction.  Insertions
stage into per-level buffers that merge (and trigger a rebuild from that
level) once they catch up with the level's pool size; deletions of picked
elements rebuild from their level once a lazy_eps fraction of the picks made
there is gone.
"""

from __future__ import annotations

from .dynamic_core import CoreParams
from .errors import DuplicateElementError, MissingElementError
from .oracle import Base, CountingOracle, ElementId
from .peeling import peel


class SimplifiedStructure:
    """Same operation surface as DynamicStructure, one bucket per level."""

    def __init__(self, params: CoreParams):
        self.params = params
        self.tau = params.opt_guess / (2.0 * params.k)
        T = params.levels
        self.live: set[ElementId] = set()
        self.pools: list[set] = [set() for _ in range(T + 1)]
        self.picked: list[list[ElementId]] = [[] for _ in range(T + 1)]
        self.built_size = [0] * (T + 1)
        self.deletions = [0] * (T + 1)
        self.buffers: list[set] = [set() for _ in range(T + 1)]
        self.level_of: dict[ElementId, int] = {}
        self._sol_base: Base | None = None
        self._sol_dirty = False

    # -- queries ------------------------------------------------------------

    def solution_size(self) -> int:
        return len(self.level_of)

    def solution(self, oracle: CountingOracle) -> tuple[frozenset, float]:
        members = frozenset(self.level_of)
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
            # merge once the buffer catches up with the pool it is staging for
            if len(self.buffers[level]) >= max(1, len(self.pools[level])):
                # absorb the staged elements into this level's pool; deeper
                # buffers hold subsets of them (they are cleared on every
                # deeper merge), so dropping those loses nothing
                self.pools[level] |= self.buffers[level]
                for l in range(level, T + 1):
                    self.buffers[l].clear()
                self._top_up_from(level, oracle, rng)
                return

    def delete(self, e: ElementId, oracle: CountingOracle, rng) -> None:
        if e not in self.live:
            raise MissingElementError(f"element {e} is not live")
        self.live.discard(e)
        for pool in self.pools:
            pool.discard(e)
        for buf in self.buffers:
            buf.discard(e)
        level = self.level_of.pop(e, None)
        if level is None:
            return
        self.picked[level].remove(e)
        self.deletions[level] += 1
        self._sol_dirty = True
        p = self.params
        if self.deletions[level] > p.lazy_eps * self.built_size[level]:
            for l in range(level, p.levels + 1):
                self._clear_picks(l)
            self._rebuild_from(level, oracle, rng)

    # -- construction -------------------------------------------------------

    def _clear_picks(self, level: int) -> None:
        for e in self.picked[level]:
            self.level_of.pop(e, None)
        self.picked[level] = []
        self.built_size[level] = 0
        self.deletions[level] = 0

    def _construct_level(self, l: int, oracle: CountingOracle, rng, prefix: Base) -> Base:
        """Filter the pool and peel batches until it drops under the level
        budget or the solution fills; truncates the pool on a full solution.

        Both construction paths (merge top-up and deletion rebuild) re-derive
        the level, so the lazy deletion counter starts over here.
        """
        p = self.params
        cap = 1 << (p.levels - l)
        while True:
            self.pools[l] = {
                e for e in self.pools[l] if oracle.gain(prefix, e) >= self.tau
            }
            if len(self.pools[l]) < cap or self.solution_size() >= p.k:
                break
            budget = p.k - self.solution_size()
            batch = peel(self.pools[l], self.tau, oracle, prefix, budget,
                         p.peel_eps, rng, p.sample_cap)
            self.picked[l].extend(batch)
            for e in batch:
                self.level_of[e] = l
            prefix = oracle.extend(prefix, batch)
        self.built_size[l] = len(self.picked[l])
        self.deletions[l] = 0
        if self.solution_size() >= p.k and len(self.pools[l]) > cap:
            # keep the level inside its size budget without wiping the
            # candidate cache (a wiped pool would make the buffer trigger
            # fire on every insert)
            self.pools[l] = set(sorted(self.pools[l])[:cap])
        return prefix

    def _top_up_from(self, level: int, oracle: CountingOracle, rng) -> None:
        """Merge-triggered pass over levels level..T that only adds picks.

        Existing picks stay (each one cleared the threshold against the picks
        present when it was made, which is what the value bound sums), so
        candidates are measured against the full current solution.  The cost
        is proportional to the merged pool, not to the parent level.
        """
        p = self.params
        prefix = oracle.base(set(self.level_of))
        l = level
        while True:
            if l > level:
                self.buffers[l].clear()
                self.pools[l] = self.pools[l - 1] | self.buffers[l - 1]
            prefix = self._construct_level(l, oracle, rng, prefix)
            if self.solution_size() >= p.k or l == p.levels:
                break
            l += 1
        self._sol_base = prefix
        self._sol_dirty = False

    def _rebuild_from(self, level: int, oracle: CountingOracle, rng) -> None:
        """Deletion-triggered reconstruction of levels level..T; the caller
        already dropped their picks.  The entry level reseeds from the level
        above (the live set at level 0)."""
        p = self.params
        prefix_members: set[ElementId] = set()
        for l in range(level):
            prefix_members.update(self.picked[l])
        prefix = oracle.base(prefix_members)

        l = level
        while True:
            self.buffers[l].clear()
            if l == 0:
                self.pools[0] = set(self.live)
            else:
                self.pools[l] = self.pools[l - 1] | self.buffers[l - 1]
            prefix = self._construct_level(l, oracle, rng, prefix)
            if self.solution_size() >= p.k or l == p.levels:
                break
            l += 1

        self._sol_base = prefix
        self._sol_dirty = False

    # -- integrity ----------------------------------------------------------

    def check_invariants(self, deep: bool = True) -> bool:
        p = self.params
        T = p.levels
        if self.solution_size() > p.k:
            return False
        pick_total = 0
        for level in range(T + 1):
            if len(self.pools[level]) > (1 << (T - level)):
                return False
            pick_total += len(self.picked[level])
            for e in self.picked[level]:
                if self.level_of.get(e) != level or e not in self.live:
                    return False
        if pick_total != len(self.level_of):
            return False
        if deep:
            for level in range(T + 1):
                if not self.buffers[level] <= self.live:
                    return False
                if not self.pools[level] <= self.live:
                    return False
        return True
