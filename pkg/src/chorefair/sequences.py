"""Periodic allocation sequences and their expansion into item assignments.

A pattern is a finite list of agent indices. Repeating it to length m gives
a picking sequence: position j names the agent who receives item j when
items are processed heaviest first. Patterns are plain values so custom
ones can run through the same harness as the built-ins.
"""

from __future__ import annotations

from .model import Allocation

Pattern = tuple[int, ...]
PickingSequence = tuple[int, ...]

PATTERN_CAP = 4096


def sesqui_pattern(n: int) -> Pattern:
    """Forward pass over all agents, then a reverse pass over the upper half.

    Length is 2n - floor(n/2), roughly one and a half rounds. The agents in
    the upper half take a second, lighter item in reverse order to offset
    the advantage they get in the forward pass.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    return tuple(range(1, n + 1)) + tuple(range(n, n // 2, -1))


def round_robin_pattern(n: int) -> Pattern:
    if n < 1:
        raise ValueError("need at least one agent")
    return tuple(range(1, n + 1))


def expand(pattern: Pattern, m: int) -> PickingSequence:
    """Repeat the pattern until length m; the final replica may be cut short."""
    if not pattern:
        raise ValueError("empty pattern")
    if m < 1:
        raise ValueError("need at least one item")
    k = len(pattern)
    return tuple(pattern[(j - 1) % k] for j in range(1, m + 1))


def allocate_by_sequence(seq: PickingSequence, n: int) -> Allocation:
    """Bundle i collects every position j with seq[j] == i."""
    if any(not 1 <= a <= n for a in seq):
        raise ValueError(f"sequence entries must lie in 1..{n}")
    bundles = [set() for _ in range(n)]
    for j, agent in enumerate(seq, start=1):
        bundles[agent - 1].add(j)
    return Allocation(tuple(frozenset(b) for b in bundles), len(seq))


def parse_pattern(text: str, n: int, cap: int = PATTERN_CAP) -> Pattern:
    """Parse a comma-separated agent list, validating range and length."""
    try:
        entries = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"pattern {text!r} is not a comma-separated integer list")
    if not entries:
        raise ValueError("empty pattern")
    if len(entries) > cap:
        raise ValueError(f"pattern longer than cap {cap}")
    if any(not 1 <= a <= n for a in entries):
        raise ValueError(f"pattern entries must lie in 1..{n}")
    return entries
