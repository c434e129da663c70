"""Strategyproof allocation mechanisms.

Two mechanisms live here. ConsecutivePick is serial dictatorship with
multi-unit quotas: given quotas a_1..a_n summing to m, agent n picks her
a_n favorite items first, then agent n-1, down to agent 1. Whatever the
quotas, no agent can gain by misreporting, and the approximation ratio is
bounded by max_i a_i / ceil((a_1+..+a_{i-1}) / n) because the items agent i
leaves behind each cost at least as much as the ones she took.

RandomDecline assigns every item to a uniformly random agent, lets each
agent shed the items she ranked largest (her decline set), and redeals the
shed pool evenly at random. Truth-telling maximizes the total cost shed,
which is exactly what minimizes an agent's expected cost.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import Allocation, Instance, OrdinalProfile
from .ido import execute_picking

# Escalation bound for the quota schedule's growth-rate doubling; reached
# only for m astronomically larger than n.
_MAX_ESCALATIONS = 64


@dataclass(frozen=True)
class PickSchedule:
    """Quotas a_1..a_n; agent n picks first, agent 1 last."""

    quotas: tuple[int, ...]

    def __post_init__(self):
        if not self.quotas:
            raise ValueError("schedule has no agents")
        if any(q < 0 for q in self.quotas):
            raise ValueError("quotas must be nonnegative")
        if self.m >= self.n and any(q < 1 for q in self.quotas):
            raise ValueError("every quota must be at least 1 when m >= n")

    @property
    def n(self) -> int:
        return len(self.quotas)

    @property
    def m(self) -> int:
        return sum(self.quotas)

    def implied_ratio_bound(self) -> Fraction:
        """max_i a_i / ceil(prefix_i / n), reading a bare a_i while prefix < n.

        An agent holding a_i items pays at most a_i times her maximin
        share, and at most a_i / ceil(prefix_i / n) times it once at least
        one full round of cheaper items remains behind her.
        """
        n = self.n
        prefix = 0
        bound = Fraction(0)
        for a in self.quotas:
            blocks = max(1, -(-prefix // n))
            bound = max(bound, Fraction(a, blocks))
            prefix += a
        return bound


@dataclass(frozen=True)
class ScheduleDetail:
    """A quota schedule plus how it was built, for auditing the guarantees."""

    schedule: PickSchedule
    rate: float
    # True where the quota was set purely by the growth cap rather than by
    # running out of items.
    untruncated: tuple[bool, ...]
    mode: str  # "ones-and-twos" | "pinned" | "full" | "escalated"
    escalations: int


@dataclass(frozen=True)
class Infeasible:
    """Returned when a constant-ratio schedule cannot cover all m items."""

    capacity: int


@dataclass(frozen=True)
class RandomOutcome:
    """One RandomDecline run: final allocation, redealt pool, and its seed."""

    allocation: Allocation
    reclaimed: frozenset[int]
    seed: int


def growth_rate(n: int, m: int) -> float:
    """The schedule growth rate, 2 * log2(m / n)."""
    return 2.0 * math.log2(m / n)


def log_schedule(n: int, m: int) -> PickSchedule:
    """Quota schedule whose implied ratio bound is at most 2*log2(m/n) + 2."""
    return log_schedule_detail(n, m).schedule


def default_schedule(n: int, m: int) -> PickSchedule:
    """The logarithmic schedule, or one item per agent when m <= n."""
    if m < n:
        return PickSchedule((1,) * m + (0,) * (n - m))
    if m == n:
        return PickSchedule((1,) * n)
    return log_schedule(n, m)


def log_schedule_detail(n: int, m: int) -> ScheduleDetail:
    """Build the logarithmic-ratio quota schedule, reporting construction facts.

    For m <= 2n every quota is 1 or 2. Beyond that, quotas grow
    geometrically at rate K = 2*log2(m/n): each is at most
    floor(K * ceil(prefix/n)) where prefix counts the items already
    assigned to earlier-indexed (later-picking) agents. The first floor(n/2)
    agents are pinned to quota 2 when the remaining capacity still covers
    m; otherwise all agents grow geometrically. Rate doubling beyond that
    is a last resort for m far outside the 2^(n/2) reach of the rate and
    loses the stated bound.
    """
    if n < 2:
        raise ValueError("need at least two agents")
    if m <= n:
        raise ValueError("m must exceed n; one item each is already exact")

    if m <= 2 * n:
        ones = 2 * n - m
        quotas = (1,) * ones + (2,) * (n - ones)
        sched = PickSchedule(quotas)
        return ScheduleDetail(sched, growth_rate(n, m), (False,) * n, "ones-and-twos", 0)

    rate = growth_rate(n, m)
    pinned = _fill(n, m, rate, pinned_half=True)
    if pinned is not None:
        quotas, untruncated = pinned
        return ScheduleDetail(PickSchedule(quotas), rate, untruncated, "pinned", 0)

    effective = rate
    for escalations in range(_MAX_ESCALATIONS):
        full = _fill(n, m, effective, pinned_half=False)
        if full is not None:
            quotas, untruncated = full
            mode = "full" if escalations == 0 else "escalated"
            return ScheduleDetail(PickSchedule(quotas), effective, untruncated, mode, escalations)
        effective *= 2
    raise ValueError(f"cannot build a schedule for n={n}, m={m}")


def _fill(n: int, m: int, rate: float, pinned_half: bool):
    """Assign quotas under the growth cap; None when capacity falls short of m."""
    quotas = []
    untruncated = []
    prefix = 0
    half = n // 2
    for i in range(1, n + 1):
        if pinned_half and i <= half:
            cap = 2
        else:
            blocks = max(1, -(-prefix // n))
            cap = _capped_quota(rate, blocks, n, m)
        room = m - prefix - (n - i)  # keep one item for each later agent
        quota = min(cap, room)
        quotas.append(quota)
        untruncated.append(cap < room and not (pinned_half and i <= half))
        prefix += quota
    if prefix != m:
        return None
    return tuple(quotas), tuple(untruncated)


def _capped_quota(rate: float, blocks: int, n: int, m: int) -> int:
    """floor(rate * blocks), kept exactly at or below the real-valued cap.

    The floor of a float product can land one too high when rate*blocks
    sits on an integer boundary; near boundaries the comparison is redone
    in exact integer arithmetic (rate = 2*log2(m/n), so the cap condition
    q <= rate*blocks is 2**q * n**(2*blocks) <= m**(2*blocks)).
    """
    approx = rate * blocks
    q = math.floor(approx)
    if abs(approx - round(approx)) < 1e-9:
        while q > 0 and not (2**q) * n ** (2 * blocks) <= m ** (2 * blocks):
            q -= 1
    return q


def constant_ratio_schedule(n: int, m: int, r: int) -> PickSchedule | Infeasible:
    """Quota schedule targeting a constant ratio r, when capacity allows.

    Quotas follow a_i = r * (floor(prefix/n) + 1), which steps up by r each
    time a full round of n items has been assigned: blocks of quota 2r
    after quota r, and so on. If even the untruncated quotas cannot reach
    m, the target ratio is infeasible for this many items and the capacity
    is reported instead.
    """
    if n < 1 or m < 1:
        raise ValueError("need positive n and m")
    if r < 1:
        raise ValueError("target ratio must be a positive integer")
    capacity = constant_ratio_capacity(n, r)
    if capacity < m:
        return Infeasible(capacity)
    quotas = []
    prefix = 0
    floor_quota = 1 if m >= n else 0
    for i in range(1, n + 1):
        cap = r * (prefix // n + 1)
        room = m - prefix - (n - i) * floor_quota
        quota = max(min(cap, room), floor_quota)
        quotas.append(quota)
        prefix += quota
    return PickSchedule(tuple(quotas))


def constant_ratio_capacity(n: int, r: int) -> int:
    """Total items the untruncated constant-ratio quotas can absorb."""
    prefix = 0
    for _ in range(n):
        prefix += r * (prefix // n + 1)
    return prefix


def max_bounded_capacity(n: int, rate: float) -> int:
    """Most items any schedule with implied ratio bound <= rate can cover.

    Greedy is optimal here: the cap floor(rate * max(1, ceil(prefix/n)))
    never decreases as the prefix grows, so maxing every quota maxes every
    prefix.
    """
    prefix = 0
    for _ in range(n):
        blocks = max(1, -(-prefix // n))
        prefix += math.floor(rate * blocks)
    return prefix


def consecutive_pick(profile: OrdinalProfile, schedule: PickSchedule) -> Allocation:
    """Serial dictatorship: agent n takes her a_n favorites, down to agent 1.

    Picking one's cheapest remaining items is the dominant strategy, so the
    execution simply applies it to the reported rankings.
    """
    if schedule.n != profile.n:
        raise ValueError("schedule agent count does not match profile")
    if schedule.m != profile.m:
        raise ValueError(f"schedule must sum to m={profile.m}")
    order = []
    for agent in range(schedule.n, 0, -1):
        order.extend([agent] * schedule.quotas[agent - 1])
    return execute_picking(profile, order)


def decline_set_size(n: int) -> int:
    """Number of items each agent may shed: floor(n * sqrt(log2 n))."""
    if n < 1:
        raise ValueError("need at least one agent")
    return math.floor(n * math.sqrt(math.log2(n)))


def decline_sets(profile: OrdinalProfile) -> tuple[frozenset[int], ...]:
    """Each agent's declared large items: her top-K ranked, K capped at m."""
    k = min(decline_set_size(profile.n), profile.m)
    return tuple(frozenset(r[:k]) for r in profile.rankings)


def random_decline(profile: OrdinalProfile, seed: int) -> RandomOutcome:
    """Random assignment, decline pass, then an even random redeal.

    Phase 1 sends every item to an independently uniform agent. Each agent
    then sheds whatever landed in her decline set; the shed pool is dealt
    back one item per agent in a uniformly random agent order, repeating,
    so part sizes differ by at most one and each item reaches each agent
    with probability exactly 1/n. Identical seeds reproduce the outcome
    bit for bit.
    """
    n, m = profile.n, profile.m
    if n < 2:
        raise ValueError("need at least two agents")
    declared = decline_sets(profile)
    rng = random.Random(seed)
    bundles = [set() for _ in range(n)]
    for item in range(1, m + 1):
        bundles[rng.randrange(n)].add(item)
    reclaimed = []
    for agent in range(n):
        shed = bundles[agent] & declared[agent]
        bundles[agent] -= shed
        reclaimed.extend(sorted(shed))
    reclaimed.sort()
    rng.shuffle(reclaimed)
    agent_order = list(range(n))
    rng.shuffle(agent_order)
    for t, item in enumerate(reclaimed):
        bundles[agent_order[t % n]].add(item)
    alloc = Allocation(tuple(frozenset(b) for b in bundles), m)
    return RandomOutcome(alloc, frozenset(reclaimed), seed)


def random_decline_expected_cost(
    inst: Instance, reported: OrdinalProfile, agent: int
) -> Fraction:
    """Exact expected true cost of one agent under RandomDecline.

    The agent keeps a phase-1 item outside her declared set with
    probability 1/n, and receives each item of the shed pool with
    probability 1/n of its probability of being shed (count of declarers
    over n). Everything reduces to a closed form over the declared sets, so
    no sampling is involved.
    """
    if inst.n != reported.n or inst.m != reported.m:
        raise ValueError("instance and reported profile shapes differ")
    n, m = inst.n, inst.m
    if n < 2:
        raise ValueError("need at least two agents")
    row = inst.row(agent)
    declared = decline_sets(reported)
    mine = declared[agent - 1]
    kept = sum(row[j - 1] for j in range(1, m + 1) if j not in mine)
    shed_weight = 0
    for j in range(1, m + 1):
        count = sum(1 for k in range(n) if j in declared[k])
        shed_weight += row[j - 1] * count
    return Fraction(kept, n) + Fraction(shed_weight, n * n)
