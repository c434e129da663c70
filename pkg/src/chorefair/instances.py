"""Instance generators and file round-tripping.

Hard-instance generators embed the adversarial cost rows in full
identical-ranking instances and record the integer scale applied to each
row, so ratios reported downstream can be compared against the unit-share
normalization the rows were designed around.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .exceptions import InvalidInstanceError
from .model import Allocation, Instance
from .verify import adversarial_rows_n3


@dataclass(frozen=True)
class ScaledInstance:
    """An instance plus the focal row's integer scale factor."""

    instance: Instance
    focal_agent: int
    scale: int


def hard_pair_n2() -> tuple[Instance, Instance]:
    """The two 2x4 identical-ranking instances behind the 4/3 floor."""
    first = Instance(((3, 1, 1, 1), (1, 1, 1, 1)))
    second = Instance(((1, 1, 1, 1), (1, 1, 1, 1)))
    return first, second


def hard_family_n3(m: int) -> list[ScaledInstance]:
    """Four 3xm identical-ranking instances, one per adversarial row.

    Every agent shares the focal row, keeping rankings identical. Scales:
    2 for the (2,2,1,1,0,..) row, m-1 and m-2 for the single- and
    double-heavy rows, 2(m-3) for the half-weight row.
    """
    if m % 2 == 0 or m < 5:
        raise InvalidInstanceError([f"m={m} must be odd and at least 5"])
    scales = (2, m - 1, m - 2, 2 * (m - 3))
    family = []
    for row, scale in zip(adversarial_rows_n3(m), scales):
        inst = Instance((row, row, row))
        family.append(ScaledInstance(inst, 1, scale))
    return family


def gen_random(
    n: int, m: int, max_cost: int, seed: int, ido: bool = False
) -> Instance:
    """Uniform integer costs in [0, max_cost], reproducible from the seed."""
    if n < 1 or m < 1 or max_cost < 0:
        raise InvalidInstanceError(["n, m must be positive and max_cost nonnegative"])
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        row = [rng.randint(0, max_cost) for _ in range(m)]
        if ido:
            row.sort(reverse=True)
        rows.append(tuple(row))
    return Instance(tuple(rows))


def read_instance(path: str | Path) -> Instance:
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidInstanceError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(payload, dict) or "costs" not in payload:
        raise InvalidInstanceError(["instance file must be an object with 'costs'"])
    return Instance.from_dict(payload)


def write_instance(inst: Instance, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(inst.to_dict(), handle, indent=2)
        handle.write("\n")


def read_allocation(path: str | Path, m: int | None = None) -> Allocation:
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidInstanceError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(payload, dict) or "bundles" not in payload:
        raise InvalidInstanceError(["allocation file must be an object with 'bundles'"])
    return Allocation.from_dict(payload, m)


def write_allocation(alloc: Allocation, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(alloc.to_dict(), handle, indent=2)
        handle.write("\n")


def write_instance_csv(inst: Instance, path: str | Path) -> None:
    """Cost matrix as CSV with header item_1..item_m, one row per agent."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([f"item_{j}" for j in range(1, inst.m + 1)])
        for row in inst.costs:
            writer.writerow(row)
