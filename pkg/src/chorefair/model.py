"""Core domain types: cost instances, rankings, and allocations.

Costs are nonnegative integers so that every downstream quantity (bundle
costs, maximin shares, approximation ratios) stays exact. Callers holding
decimal data scale it to integers first. Agents and items are 1-indexed in
every public interface.

All types are immutable after construction and safe to share across
threads; every operation in this module is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import InfeasibleAllocationError, InvalidInstanceError


@dataclass(frozen=True)
class Instance:
    """An n-agent, m-item chore instance; ``costs[i][j]`` is agent i+1's cost for item j+1."""

    costs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        violations = _matrix_violations(self.costs)
        if violations:
            raise InvalidInstanceError(violations)

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def m(self) -> int:
        return len(self.costs[0])

    def row(self, agent: int) -> tuple[int, ...]:
        """Agent's full cost vector (agent is 1-indexed)."""
        _check_agent(agent, self.n)
        return self.costs[agent - 1]

    def cost(self, agent: int, item: int) -> int:
        _check_agent(agent, self.n)
        _check_item(item, self.m)
        return self.costs[agent - 1][item - 1]

    def total(self, agent: int) -> int:
        return sum(self.row(agent))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "costs": [list(r) for r in self.costs]}

    @classmethod
    def from_dict(cls, payload: dict) -> "Instance":
        costs = payload.get("costs")
        inst = validate_instance(costs if costs is not None else [])
        for key in ("n", "m"):
            if key in payload and payload[key] != getattr(inst, key):
                raise InvalidInstanceError(
                    [f"declared {key}={payload[key]} does not match costs shape"]
                )
        return inst


class IdoInstance(Instance):
    """An instance whose every cost row is non-increasing (item 1 heaviest)."""

    def __post_init__(self):
        super().__post_init__()
        for i, row in enumerate(self.costs, start=1):
            if any(row[k] < row[k + 1] for k in range(len(row) - 1)):
                raise InvalidInstanceError([f"row {i} is not non-increasing"])


@dataclass(frozen=True)
class OrdinalProfile:
    """Per-agent rankings; ``rankings[i][0]`` is agent i+1's costliest item."""

    rankings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rankings:
            raise InvalidInstanceError(["profile has no agents"])
        m = len(self.rankings[0])
        for i, ranking in enumerate(self.rankings, start=1):
            if sorted(ranking) != list(range(1, m + 1)):
                raise InvalidInstanceError(
                    [f"ranking {i} is not a permutation of 1..{m}"]
                )

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def m(self) -> int:
        return len(self.rankings[0])

    def ranking(self, agent: int) -> tuple[int, ...]:
        _check_agent(agent, self.n)
        return self.rankings[agent - 1]


@dataclass(frozen=True)
class Allocation:
    """A partition of items 1..m into one bundle per agent."""

    bundles: tuple[frozenset[int], ...]
    m: int

    def __post_init__(self):
        seen: set[int] = set()
        for bundle in self.bundles:
            overlap = seen & bundle
            if overlap:
                raise InfeasibleAllocationError(
                    f"items {sorted(overlap)} appear in more than one bundle"
                )
            seen |= bundle
        if seen != set(range(1, self.m + 1)):
            missing = sorted(set(range(1, self.m + 1)) - seen)
            extra = sorted(seen - set(range(1, self.m + 1)))
            parts = []
            if missing:
                parts.append(f"missing items {missing}")
            if extra:
                parts.append(f"unknown items {extra}")
            raise InfeasibleAllocationError(", ".join(parts) or "bad partition")

    @property
    def n(self) -> int:
        return len(self.bundles)

    def bundle(self, agent: int) -> frozenset[int]:
        _check_agent(agent, self.n)
        return self.bundles[agent - 1]

    def to_dict(self) -> dict:
        return {"bundles": [sorted(b) for b in self.bundles]}

    @classmethod
    def from_dict(cls, payload: dict, m: int | None = None) -> "Allocation":
        bundles = tuple(frozenset(b) for b in payload["bundles"])
        if m is None:
            m = sum(len(b) for b in bundles)
        return cls(bundles, m)

    @classmethod
    def from_lists(cls, bundles: Iterable[Iterable[int]], m: int) -> "Allocation":
        return cls(tuple(frozenset(b) for b in bundles), m)


def validate_instance(raw: Sequence[Sequence[int]]) -> Instance:
    """Build an Instance from a raw matrix, reporting every violation at once."""
    violations = _matrix_violations(raw)
    if violations:
        raise InvalidInstanceError(violations)
    return Instance(tuple(tuple(int(c) for c in row) for row in raw))


def _matrix_violations(raw) -> list[str]:
    violations = []
    if not raw:
        return ["empty matrix"]
    if any(len(row) == 0 for row in raw):
        violations.append("empty row")
    widths = {len(row) for row in raw}
    if len(widths) > 1:
        violations.append(f"ragged rows (widths {sorted(widths)})")
    for i, row in enumerate(raw, start=1):
        for j, c in enumerate(row, start=1):
            if isinstance(c, bool) or not isinstance(c, int):
                violations.append(f"non-integer cost at agent {i}, item {j}")
            elif c < 0:
                violations.append(f"negative cost {c} at agent {i}, item {j}")
    return violations


def ordinal_of(inst: Instance) -> OrdinalProfile:
    """Each agent's items sorted by descending cost, ties broken by ascending item index."""
    rankings = []
    for row in inst.costs:
        order = sorted(range(1, inst.m + 1), key=lambda j: (-row[j - 1], j))
        rankings.append(tuple(order))
    return OrdinalProfile(tuple(rankings))


def bundle_cost(inst: Instance, agent: int, bundle: Iterable[int]) -> int:
    """Exact total cost of a bundle for one agent."""
    row = inst.row(agent)
    total = 0
    for item in bundle:
        _check_item(item, inst.m)
        total += row[item - 1]
    return total


def _check_agent(agent: int, n: int) -> None:
    if not 1 <= agent <= n:
        raise IndexError(f"agent {agent} out of range 1..{n}")


def _check_item(item: int, m: int) -> None:
    if not 1 <= item <= m:
        raise IndexError(f"item {item} out of range 1..{m}")
