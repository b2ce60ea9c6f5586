"""Randomized batch selection above a marginal-gain threshold.

peel() grows a candidate batch size geometrically, probing each size with a
Bernoulli mean estimate of the indicator "a random element still gains at
least tau on top of a random batch of that size", and finally draws a
uniformly random subset of the chosen size.  The estimator's sample count is
derived from a Chernoff bound and is deliberately conservative; sample_cap
bounds it for large runs (statistical confidence degrades gracefully, the
selection stays uniform either way).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .oracle import Base, CountingOracle, ElementId


def estimator_plan(eps_hat: float, k: int) -> tuple[float, int]:
    """Failure probability and sample count for one mean estimate."""
    if not 0.0 < eps_hat < 0.5:
        raise ValueError("eps_hat must lie in (0, 0.5)")
    if k < 1:
        raise ValueError("k must be >= 1")
    log_term = max(1.0, math.log(k))
    delta = 2.0 * eps_hat * eps_hat / (k * log_term)
    samples = 16 * math.ceil(math.log(2.0 / delta) / (eps_hat * eps_hat))
    return delta, samples


def estimate_mean(
    draw_batch: Callable[[int], int],
    eps_hat: float,
    k: int,
    sample_cap: int | None = None,
) -> bool:
    """True iff the empirical mean of the Bernoulli source is <= 1 - 1.5*eps_hat.

    draw_batch(m) must return the number of successes among m fresh draws.
    With the uncapped sample count, a true answer implies mean <= 1 - eps_hat
    and a false answer implies mean >= 1 - 2*eps_hat, each with probability at
    least 1 - delta.
    """
    _, samples = estimator_plan(eps_hat, k)
    if sample_cap is not None:
        samples = min(samples, sample_cap)
    successes = draw_batch(samples)
    return successes / samples <= 1.0 - 1.5 * eps_hat


def indicator_source(
    items: Sequence[ElementId],
    s: int,
    tau: float,
    oracle: CountingOracle,
    base: Base,
    rng,
) -> Callable[[int], int]:
    """Sampler for the threshold indicator at batch size s.

    Each draw picks a uniform size-s subset S of items plus a uniform extra
    element x, and reports whether x still gains at least tau on top of
    base + S.  Costs two oracle calls per draw.
    """
    n = len(items)
    if not 1 <= s <= n - 1:
        raise ValueError(f"batch size {s} not drawable from {n} items")

    def draw_batch(m: int) -> int:
        hits = 0
        for _ in range(m):
            picked = rng.sample(items, s + 1)
            with_batch = oracle.extend(base, picked[:s])
            if oracle.gain(with_batch, picked[s]) >= tau:
                hits += 1
        return hits

    return draw_batch


def batch_size_schedule(eps_hat: float, k: int, n: int) -> list[int]:
    """Distinct candidate batch sizes 1, ..., capped at n, growing by 1+eps_hat.

    The schedule is long enough that the last entry is >= min(k, n); repeated
    integer sizes are probed once (the indicator distribution is identical).
    """
    steps = math.ceil(math.log(k) / math.log1p(eps_hat)) if k > 1 else 0
    sizes: list[int] = []
    for i in range(steps + 1):
        s = min(int((1.0 + eps_hat) ** i), n)
        if not sizes or s > sizes[-1]:
            sizes.append(s)
        if s >= n:
            break
    return sizes


def peel(
    candidates,
    tau: float,
    oracle: CountingOracle,
    base: Base,
    k: int,
    peel_eps: float,
    rng,
    sample_cap: int | None = None,
) -> list[ElementId]:
    """Select a uniformly random batch of candidates worth ~tau each on average.

    candidates must be nonempty and should contain only elements whose gain
    over the base set is at least tau (the caller's filter guarantees this).
    Stops growing the batch size at the first size whose mean estimate comes
    back true, or when the size reaches the whole pool; returns min(size, k)
    elements drawn uniformly.  Oracle cost does not depend on len(candidates).
    """
    items = sorted(candidates)
    n = len(items)
    if n == 0:
        raise ValueError("peel requires a nonempty candidate set")
    if k < 1:
        raise ValueError("k must be >= 1")
    eps_hat = peel_eps / 4.0

    chosen = 1
    for s in batch_size_schedule(eps_hat, k, n):
        chosen = s
        if s >= n:
            break  # the whole pool is in play, nothing left to estimate
        if estimate_mean(indicator_source(items, s, tau, oracle, base, rng),
                         eps_hat, k, sample_cap):
            break

    return rng.sample(items, min(chosen, k))
