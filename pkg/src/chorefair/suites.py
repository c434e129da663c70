"""Benchmark suites: deterministic ratio sweeps emitted as rows for CSV.

Every suite is a pure function of its arguments, and rows come back sorted,
so identical invocations produce identical files.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from .instances import gen_random
from .mms import fraction_decimal, min_makespan
from .model import ordinal_of
from .ido import run_ordinal
from .sequences import allocate_by_sequence, expand, round_robin_pattern, sesqui_pattern
from .verify import certify_lower_bound_n2, certify_lower_bound_n3

SUITES = ("grid-n2", "grid-n3", "random-n4plus", "lowerbounds")

_PATTERNS = {"sesqui-rr": sesqui_pattern, "round-robin": round_robin_pattern}


def run_suite(suite: str, seed: int = 0, trials: int = 100) -> list[dict]:
    if suite == "grid-n2":
        rows = _grid_suite(n=2, ms=(4, 5, 6), levels=(0, 1, 2, 3))
    elif suite == "grid-n3":
        rows = _grid_suite(n=3, ms=(5, 6, 7), levels=(0, 1, 2))
    elif suite == "random-n4plus":
        rows = _random_suite(seed=seed, trials=trials)
    elif suite == "lowerbounds":
        rows = _lowerbound_suite()
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return sorted(rows, key=lambda r: (r["instance_id"], r["algorithm"]))


def grid_worst_ratio(n: int, m: int, levels: tuple[int, ...], algorithm: str) -> Fraction:
    """Exact worst ratio of a periodic sequence over every consistent
    descending cost row on the given levels.

    Ratios decompose per agent, so each agent's rows enumerate
    independently; the worst case over full matrices is the max over
    agents.
    """
    alloc = allocate_by_sequence(expand(_PATTERNS[algorithm](n), m), n)
    worst = Fraction(0)
    for agent in range(1, n + 1):
        bundle = sorted(alloc.bundle(agent))
        for row in combinations_with_replacement(sorted(levels, reverse=True), m):
            share = min_makespan(row, n)
            cost = sum(row[j - 1] for j in bundle)
            ratio = Fraction(cost, share) if share else Fraction(1)
            worst = max(worst, ratio)
    return worst


def _grid_suite(n: int, ms: tuple[int, ...], levels: tuple[int, ...]) -> list[dict]:
    rows = []
    for m in ms:
        for algorithm in ("sesqui-rr", "round-robin"):
            worst = grid_worst_ratio(n, m, levels, algorithm)
            rows.append(_row(f"grid-n{n}-m{m}", algorithm, worst))
    return rows


def _random_suite(seed: int, trials: int) -> list[dict]:
    rows = []
    for n in range(4, 9):
        for t in range(trials):
            rng = random.Random(seed * 1_000_003 + n * 1009 + t)
            m = rng.randint(n + 1, 12)
            inst = gen_random(n, m, 9, seed=rng.randrange(2**32))
            alloc = run_ordinal(ordinal_of(inst), "sesqui-rr")
            worst = Fraction(0)
            for agent in range(1, n + 1):
                row = inst.row(agent)
                cost = sum(row[j - 1] for j in alloc.bundle(agent))
                share = min_makespan(row, n)
                ratio = Fraction(cost, share) if share else Fraction(1)
                worst = max(worst, ratio)
            rows.append(_row(f"rand-n{n}-t{t:04d}", "sesqui-rr", worst))
    return rows


def _lowerbound_suite() -> list[dict]:
    rows = [_row("cert-n2", "certify", certify_lower_bound_n2().bound)]
    for m in (9, 11):
        rows.append(_row(f"cert-n3-m{m:02d}", "certify", certify_lower_bound_n3(m).bound))
    return rows


def _row(instance_id: str, algorithm: str, worst: Fraction) -> dict:
    return {
        "instance_id": instance_id,
        "algorithm": algorithm,
        "worst_num": worst.numerator,
        "worst_den": worst.denominator,
        "worst_decimal": fraction_decimal(worst),
    }
