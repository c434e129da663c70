"""Independent brute-force oracles used to cross-check the library.

These stay deliberately naive: the labeled-bundle recursion explores all
n^m assignments with no pruning beyond incremental load tracking, so it
shares no code path with the solver it checks.
"""

from __future__ import annotations


def naive_min_makespan(costs, n: int) -> int:
    """Min over all n^m labeled assignments of the max bundle load."""
    items = list(costs)
    m = len(items)
    best = sum(items)
    loads = [0] * n

    def assign(t: int):
        nonlocal best
        if t == m:
            best = min(best, max(loads))
            return
        for b in range(n):
            loads[b] += items[t]
            assign(t + 1)
            loads[b] -= items[t]

    if m == 0:
        return 0
    assign(0)
    return best
