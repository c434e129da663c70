"""Exact maximin-share computation and approximation-ratio accounting.

An agent's maximin share for chores is the minimum, over all partitions of
the items into n bundles, of the largest bundle cost. That equals the
optimal makespan of scheduling the m item costs on n identical machines.

The solver binary-searches the makespan threshold over the sorted
achievable subset sums (the optimum is always some bundle's sum) and
decides feasibility of each threshold with a depth-first bin packing that
memoizes failed (item index, bin load multiset) states. This search is
deliberately different from the plain label-every-item enumeration used to
cross-check it in the tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from heapq import heapreplace

from .exceptions import InstanceTooLargeError
from .model import Allocation, Instance, bundle_cost

DEFAULT_EXACT_LIMIT = 20
_LIMIT_ENV_VAR = "CHOREFAIR_MAX_EXACT_M"

# Sentinel for cost > 0 against a zero maximin share. Fractions compare
# correctly against it, so max() over mixed reports is well defined.
INFINITE_RATIO = float("inf")


@dataclass(frozen=True)
class MmsValues:
    """Per-agent maximin shares."""

    values: tuple[int, ...]

    def __getitem__(self, agent: int) -> int:
        return self.values[agent - 1]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RatioReport:
    """Per-agent bundle-cost / maximin-share fractions and their maximum."""

    per_agent: tuple
    worst: object

    def to_dict(self) -> dict:
        return {
            "per_agent": [fraction_to_dict(r) for r in self.per_agent],
            "worst": fraction_to_dict(self.worst),
        }


def fraction_to_dict(ratio) -> dict:
    if ratio == INFINITE_RATIO:
        return {"num": 1, "den": 0}
    frac = Fraction(ratio)
    return {"num": frac.numerator, "den": frac.denominator}


def fraction_decimal(frac: Fraction, places: int = 6) -> str:
    """Decimal rendering to fixed places; display only, never compared."""
    from decimal import ROUND_HALF_EVEN, Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = 50
        value = Decimal(frac.numerator) / Decimal(frac.denominator)
        quantum = Decimal(1).scaleb(-places)
        return str(value.quantize(quantum, rounding=ROUND_HALF_EVEN))


def exact_limit() -> int:
    """Current item-count limit for exact search; overridable via environment."""
    raw = os.environ.get(_LIMIT_ENV_VAR)
    if raw is None:
        return DEFAULT_EXACT_LIMIT
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_EXACT_LIMIT


def mms_exact(inst: Instance, agent: int, limit: int | None = None) -> int:
    """Exact maximin share of one agent, via minimum-makespan search."""
    limit = exact_limit() if limit is None else limit
    if inst.m > limit:
        raise InstanceTooLargeError(
            f"m={inst.m} exceeds exact-search limit {limit}"
        )
    return min_makespan(inst.row(agent), inst.n)


def mms_all(inst: Instance, limit: int | None = None) -> MmsValues:
    """Exact maximin share of every agent."""
    return MmsValues(
        tuple(mms_exact(inst, agent, limit) for agent in range(1, inst.n + 1))
    )


def lower_bounds(inst: Instance, agent: int) -> tuple[Fraction, int]:
    """Two certified lower bounds on an agent's maximin share.

    The average bound: some bundle carries at least a 1/n share of the
    total. The item bound: the bundle holding the costliest item carries at
    least that item's cost. Both hold for every partition.
    """
    row = inst.row(agent)
    return Fraction(sum(row), inst.n), max(row)


def ratio_of(inst: Instance, alloc: Allocation, limit: int | None = None) -> RatioReport:
    """Exact per-agent ratios of bundle cost to maximin share.

    A zero maximin share (all-zero cost row) reports ratio 1 for a zero-cost
    bundle and the infinite sentinel for a positive one.
    """
    if alloc.n != inst.n or alloc.m != inst.m:
        raise ValueError(
            f"allocation shape ({alloc.n} bundles, m={alloc.m}) does not match "
            f"instance ({inst.n} agents, m={inst.m})"
        )
    per_agent = []
    for agent in range(1, inst.n + 1):
        cost = bundle_cost(inst, agent, alloc.bundle(agent))
        share = mms_exact(inst, agent, limit)
        if share == 0:
            per_agent.append(Fraction(1) if cost == 0 else INFINITE_RATIO)
        else:
            per_agent.append(Fraction(cost, share))
    return RatioReport(tuple(per_agent), max(per_agent))


def min_makespan(costs, n: int) -> int:
    """Minimum achievable maximum bin load packing ``costs`` into ``n`` bins."""
    if n < 1:
        raise ValueError("need at least one bin")
    items = sorted((c for c in costs if c > 0), reverse=True)
    if not items:
        return 0
    if n == 1:
        return sum(items)
    if n >= len(items):
        return items[0]

    total = sum(items)
    lower = max(items[0], -(-total // n))
    upper = _lpt_makespan(items, n)
    if upper <= lower:
        return lower

    candidates = [s for s in _subset_sums(items, lower, upper) if s >= lower]
    # upper is itself achievable (it is a bin sum of the greedy packing)
    lo, hi = 0, len(candidates) - 1
    best = upper
    while lo <= hi:
        mid = (lo + hi) // 2
        if _can_pack(items, n, candidates[mid]):
            best = candidates[mid]
            hi = mid - 1
        else:
            lo = mid + 1
    return best


def _lpt_makespan(items_desc, n: int) -> int:
    loads = [0] * n
    for c in items_desc:
        heapreplace(loads, loads[0] + c)
    return max(loads)


def _subset_sums(items, lower: int, upper: int) -> list[int]:
    mask = 1
    for c in items:
        mask |= mask << c
    return [s for s in range(lower, upper + 1) if (mask >> s) & 1]


def _can_pack(items_desc, n: int, capacity: int) -> bool:
    """Depth-first feasibility of packing into n bins of the given capacity."""
    total = sum(items_desc)
    if total > n * capacity or items_desc[0] > capacity:
        return False
    failed: set[tuple[int, tuple[int, ...]]] = set()
    loads = [0] * n
    m = len(items_desc)
    suffix = [0] * (m + 1)
    for t in range(m - 1, -1, -1):
        suffix[t] = suffix[t + 1] + items_desc[t]

    def place(t: int) -> bool:
        if t == m:
            return True
        key = (t, tuple(sorted(loads)))
        if key in failed:
            return False
        if sum(capacity - load for load in loads) < suffix[t]:
            failed.add(key)
            return False
        item = items_desc[t]
        tried: set[int] = set()
        for b in range(n):
            load = loads[b]
            if load in tried or load + item > capacity:
                continue
            tried.add(load)
            loads[b] = load + item
            if place(t + 1):
                return True
            loads[b] = load
            if load == 0:
                break  # all empty bins are interchangeable
        failed.add(key)
        return False

    return place(0)
