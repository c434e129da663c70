"""Verification harnesses: manipulation search, worst-case ratio search over
cost grids, and exact lower-bound certificates for small agent counts.

Everything here enumerates deterministically and reports exact fractions,
so a certificate reruns byte for byte.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

from .exceptions import BudgetExceededError, UnknownAlgorithmError
from .ido import execute_picking
from .mechanisms import (
    PickSchedule,
    consecutive_pick,
    default_schedule,
    random_decline_expected_cost,
)
from .mms import min_makespan
from .model import (
    Allocation,
    Instance,
    OrdinalProfile,
    bundle_cost,
    ordinal_of,
)
from .sequences import expand, round_robin_pattern, sesqui_pattern

DEFAULT_BUDGET = 40320  # 8!

PICKING_MECHANISMS = ("round-robin", "sesqui-rr", "consecutive-pick")
MECHANISMS = PICKING_MECHANISMS + ("random-decline",)


@dataclass(frozen=True)
class Manipulation:
    """A report that strictly lowers the manipulator's true (expected) cost."""

    agent: int
    report: tuple[int, ...]
    truthful_cost: object
    manipulated_cost: object


@dataclass(frozen=True)
class Certificate:
    """An exact min-max bound together with how it was obtained."""

    bound: Fraction
    enumerated: int
    wall_time_s: float
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bound": {"num": self.bound.numerator, "den": self.bound.denominator},
            "enumerated": self.enumerated,
            "wall_time_s": self.wall_time_s,
            "witness": self.witness,
        }


def picking_outcome(
    mechanism: str,
    profile: OrdinalProfile,
    schedule: PickSchedule | None = None,
) -> Allocation:
    """Run a picking mechanism on reported rankings.

    For "round-robin" and "sesqui-rr" the pattern is read as a turn order:
    agents take turns in pattern order, each picking her favorite remaining
    item. Asking the mechanism to be truth-robust is exactly asking whether
    this picking game rewards honest rankings.
    """
    n, m = profile.n, profile.m
    if mechanism == "round-robin":
        order = expand(round_robin_pattern(n), m)
    elif mechanism == "sesqui-rr":
        order = expand(sesqui_pattern(n), m)
    elif mechanism == "consecutive-pick":
        return consecutive_pick(profile, schedule or default_schedule(n, m))
    else:
        raise UnknownAlgorithmError(f"unknown picking mechanism {mechanism!r}")
    return execute_picking(profile, list(order))


def manipulation_search(
    inst: Instance,
    mechanism: str,
    agent: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    schedule: PickSchedule | None = None,
) -> Manipulation | None:
    """Look for a report strictly lowering the agent's true (expected) cost.

    Exhaustive over all m! rankings whenever that fits the budget,
    otherwise a seeded sample of `budget` rankings. Returns the best
    improvement found, or None.
    """
    truthful = ordinal_of(inst)
    if mechanism == "random-decline":
        def outcome_cost(profile: OrdinalProfile):
            return random_decline_expected_cost(inst, profile, agent)
    elif mechanism in PICKING_MECHANISMS:
        def outcome_cost(profile: OrdinalProfile):
            alloc = picking_outcome(mechanism, profile, schedule)
            return bundle_cost(inst, agent, alloc.bundle(agent))
    else:
        raise UnknownAlgorithmError(f"unknown mechanism {mechanism!r}")

    baseline = outcome_cost(truthful)
    best: Manipulation | None = None
    for report in _candidate_reports(inst.m, truthful.ranking(agent), budget, seed):
        profile = OrdinalProfile(
            tuple(
                report if k == agent else truthful.ranking(k)
                for k in range(1, inst.n + 1)
            )
        )
        cost = outcome_cost(profile)
        if cost < baseline and (best is None or cost < best.manipulated_cost):
            best = Manipulation(agent, report, baseline, cost)
    return best


def _candidate_reports(m: int, truthful: tuple[int, ...], budget: int, seed: int):
    import math
    import random

    if math.factorial(m) <= budget:
        yield from permutations(range(1, m + 1))
        return
    rng = random.Random(seed)
    base = list(range(1, m + 1))
    yield tuple(truthful)
    for _ in range(budget):
        rng.shuffle(base)
        yield tuple(base)


def worst_ratio_search(
    profile: OrdinalProfile,
    alloc: Allocation,
    grid: tuple[int, ...] = (0, 1, 2, 3),
    budget: int = 2_000_000,
) -> tuple[Fraction, Instance]:
    """Maximize the worst ratio over all grid-valued cost rows consistent
    with the profile, for a fixed allocation.

    Each agent's ratio depends on her row alone, so rows enumerate
    independently: non-increasing level sequences along her ranking. The
    witness instance assigns every agent her own maximizing row.
    """
    n, m = profile.n, profile.m
    levels = tuple(sorted(set(grid), reverse=True))
    rows_per_agent = _multiset_count(m, len(levels))
    if rows_per_agent * n > budget:
        raise BudgetExceededError(
            f"{rows_per_agent} rows per agent exceeds budget {budget}"
        )
    worst = Fraction(0)
    witness_rows: list[tuple[int, ...]] = []
    for agent in range(1, n + 1):
        ranking = profile.ranking(agent)
        bundle = alloc.bundle(agent)
        best_ratio = Fraction(0)
        best_row: tuple[int, ...] | None = None
        for seq in combinations_with_replacement(levels, m):
            row = [0] * m
            for pos, value in enumerate(seq):
                row[ranking[pos] - 1] = value
            cost = sum(row[j - 1] for j in bundle)
            share = min_makespan(seq, n)
            # a zero share means the whole row is zero, hence zero cost
            ratio = Fraction(cost, share) if share else Fraction(1)
            if ratio > best_ratio:
                best_ratio = ratio
                best_row = tuple(row)
        witness_rows.append(best_row or tuple([levels[0]] * m))
        worst = max(worst, best_ratio)
    return worst, Instance(tuple(witness_rows))


def _multiset_count(m: int, levels: int) -> int:
    import math

    return math.comb(m + levels - 1, levels - 1)


def certify_lower_bound_n2() -> Certificate:
    """Exact floor on what any ranking-only rule can guarantee for 2 agents.

    Four items, identical rankings. Whatever bundle pair a rule fixes, an
    adversary may realize the costs as (1,1,1,1) or (3,1,1,1) for either
    agent; the certificate is the minimum over all 16 bundle pairs of the
    worst ratio those two rows can force. It comes out to exactly 4/3.
    """
    start = time.perf_counter()
    rows = ((1, 1, 1, 1), (3, 1, 1, 1))
    shares = [min_makespan(row, 2) for row in rows]
    best: Fraction | None = None
    witness: dict = {}
    count = 0
    for assignment in _assignments(4, 2):
        count += 1
        local = Fraction(0)
        binding = None
        for b in range(2):
            items = [j + 1 for j, owner in enumerate(assignment) if owner == b]
            for row, share in zip(rows, shares):
                ratio = Fraction(sum(row[j - 1] for j in items), share)
                if ratio > local:
                    local = ratio
                    binding = {"bundle": items, "row": list(row)}
        if best is None or local < best:
            best = local
            witness = {
                "allocation": _assignment_bundles(assignment, 2),
                "binding": binding,
                "rows": [list(row) for row in rows],
            }
    return Certificate(best, count, time.perf_counter() - start, witness)


def certify_lower_bound_n3(m: int, budget: int = 2_000_000) -> Certificate:
    """Exact floor for 3 agents at odd m, from four adversarial cost rows.

    The rows, already scaled to integers: (2,2,1,1,0,...), a single heavy
    item over uniform filler, two heavy items over unit filler, and four
    half-weight items over light filler. All are consistent with one shared
    ranking. Enumerates every assignment of the m items to 3 labeled
    bundles and returns the min-max ratio; branches whose partial max
    already reaches the best known bound are skipped, which cannot change
    the exact minimum.
    """
    if m % 2 == 0 or m < 5:
        raise ValueError("m must be odd and at least 5")
    if 3**m > budget:
        raise BudgetExceededError(f"3^{m} assignments exceed budget {budget}")
    start = time.perf_counter()
    rows = adversarial_rows_n3(m)
    shares = [min_makespan(row, 3) for row in rows]

    best_num, best_den = None, None
    best_witness: dict = {}
    sums = [[0] * 4 for _ in range(3)]
    assignment = [0] * m

    def ratio_hits(limit_num: int, limit_den: int, bundle: int) -> bool:
        return any(
            cost * limit_den >= limit_num * share
            for cost, share in zip(sums[bundle], shares)
        )

    def recurse(item: int):
        nonlocal best_num, best_den, best_witness
        if item == m:
            local_num, local_den = 0, 1
            binding = None
            for b in range(3):
                for r in range(4):
                    num, den = sums[b][r], shares[r]
                    if num * local_den > local_num * den:
                        local_num, local_den = num, den
                        binding = (b, r)
            if best_num is None or local_num * best_den < best_num * local_den:
                best_num, best_den = local_num, local_den
                best_witness = {
                    "allocation": _assignment_bundles(tuple(assignment), 3),
                    "binding_row": list(rows[binding[1]]),
                    "rows": [list(row) for row in rows],
                }
            return
        for b in range(3):
            assignment[item] = b
            for r in range(4):
                sums[b][r] += rows[r][item]
            # partial sums only grow, so reaching the incumbent bound on
            # any row already loses
            if best_num is None or not ratio_hits(best_num, best_den, b):
                recurse(item + 1)
            for r in range(4):
                sums[b][r] -= rows[r][item]

    recurse(0)
    bound = Fraction(best_num, best_den)
    return Certificate(bound, 3**m, time.perf_counter() - start, best_witness)


def adversarial_rows_n3(m: int) -> tuple[tuple[int, ...], ...]:
    """The four integer-scaled adversarial rows for the 3-agent certificate."""
    r0 = (2, 2, 1, 1) + (0,) * (m - 4)
    r1 = (m - 1,) + (2,) * (m - 1)
    r2 = (m - 2, m - 2) + (1,) * (m - 2)
    r3 = (m - 3,) * 4 + (2,) * (m - 4)
    return (r0, r1, r2, r3)


def descending_pair_bound_holds(block: tuple[int, ...], x: int) -> bool:
    """Whether positions x and k of a non-increasing block cost at most 2/k
    of the block total (1-indexed x, with 2x >= k).

    The block average weighted by position makes this hold for every valid
    input; the function exists so tests can hammer the inequality directly.
    """
    k = len(block)
    if k < 1 or not 1 <= x <= k:
        raise ValueError("x must index into the block")
    if 2 * x < k:
        raise ValueError("x must be at least k/2")
    if any(block[t] < block[t + 1] for t in range(k - 1)):
        raise ValueError("block must be non-increasing")
    return k * (block[x - 1] + block[k - 1]) <= 2 * sum(block)


def _assignments(m: int, n: int):
    from itertools import product

    return product(range(n), repeat=m)


def _assignment_bundles(assignment: tuple[int, ...], n: int) -> list[list[int]]:
    bundles: list[list[int]] = [[] for _ in range(n)]
    for j, owner in enumerate(assignment, start=1):
        bundles[owner].append(j)
    return bundles
