"""Reduction to identical-descending-order (IDO) instances and lifting back.

Any instance maps to an IDO counterpart by sorting each agent's cost row in
non-increasing order; per-agent cost multisets, and therefore maximin
shares, are unchanged. An allocation computed on the counterpart lifts back
through a picking pass that runs positions m, m-1, ..., 1 and lets the
scheduled agent take her favorite unclaimed real item, which can only
lower each agent's cost relative to the counterpart schedule.

``run_ordinal`` chains both steps while accepting only rankings, so code
built on it can never peek at cardinal costs.
"""

from __future__ import annotations

from .exceptions import UnknownAlgorithmError
from .model import Allocation, Instance, IdoInstance, OrdinalProfile, ordinal_of
from .sequences import (
    Pattern,
    expand,
    round_robin_pattern,
    sesqui_pattern,
)

SEQUENCERS = ("sesqui-rr", "round-robin", "pattern")


def to_ido(inst: Instance) -> IdoInstance:
    """Sort every cost row non-increasingly."""
    return IdoInstance(tuple(tuple(sorted(row, reverse=True)) for row in inst.costs))


def lift_allocation(inst: Instance, ido_alloc: Allocation) -> Allocation:
    """Replay an IDO-counterpart allocation on the original instance.

    Position j's holder in ``ido_alloc`` picks in the order j = m..1, each
    time taking her cheapest unclaimed item under her true costs (among
    ties, the one latest in her ranking, which the ranking's index
    tie-break makes unique).
    """
    if ido_alloc.n != inst.n or ido_alloc.m != inst.m:
        raise ValueError("allocation shape does not match instance")
    pickers = [0] * inst.m
    for agent in range(1, inst.n + 1):
        for j in ido_alloc.bundle(agent):
            pickers[j - 1] = agent
    order = [pickers[j - 1] for j in range(inst.m, 0, -1)]
    return execute_picking(ordinal_of(inst), order)


def run_ordinal(
    profile: OrdinalProfile,
    sequencer: str,
    pattern: Pattern | None = None,
) -> Allocation:
    """Full ordinal pipeline: build the sequence, reverse it, execute picks.

    Reads rankings only. The output is invariant under any change of costs
    that preserves every agent's ranking.
    """
    n, m = profile.n, profile.m
    if sequencer == "sesqui-rr":
        pat = sesqui_pattern(n)
    elif sequencer == "round-robin":
        pat = round_robin_pattern(n)
    elif sequencer == "pattern":
        if not pattern:
            raise UnknownAlgorithmError("sequencer 'pattern' requires a pattern")
        if any(not 1 <= a <= n for a in pattern):
            raise UnknownAlgorithmError(f"pattern entries must lie in 1..{n}")
        pat = tuple(pattern)
    else:
        raise UnknownAlgorithmError(f"unknown sequencer {sequencer!r}")
    seq = expand(pat, m)
    order = [seq[j - 1] for j in range(m, 0, -1)]
    return execute_picking(profile, order)


def execute_picking(profile: OrdinalProfile, order) -> Allocation:
    """Agents pick in ``order``, each taking her most-preferred unclaimed item."""
    n, m = profile.n, profile.m
    if len(order) != m:
        raise ValueError(f"picking order must have length {m}")
    taken = [False] * (m + 1)
    # cursor per agent scans her ranking from the cheap end
    cursors = [m - 1] * n
    bundles = [set() for _ in range(n)]
    for agent in order:
        ranking = profile.ranking(agent)
        k = cursors[agent - 1]
        while taken[ranking[k]]:
            k -= 1
        item = ranking[k]
        cursors[agent - 1] = k - 1
        taken[item] = True
        bundles[agent - 1].add(item)
    return Allocation(tuple(frozenset(b) for b in bundles), m)
