import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chorefair import (
    Allocation,
    BudgetExceededError,
    Instance,
    OrdinalProfile,
    PickSchedule,
    certify_lower_bound_n2,
    certify_lower_bound_n3,
    descending_pair_bound_holds,
    manipulation_search,
    min_makespan,
    ordinal_of,
    picking_outcome,
    run_ordinal,
    worst_ratio_search,
)
from chorefair.instances import gen_random
from chorefair.verify import adversarial_rows_n3


def identical_profile(n, m):
    return OrdinalProfile(tuple(tuple(range(1, m + 1)) for _ in range(n)))


class TestManipulationSearch:
    # agent 1 ranks items 4,3,2,1 from costliest down; agent 2 ranks 3,1,2,4
    EXAMPLE = Instance(((1, 2, 3, 4), (3, 2, 4, 1)))

    def test_round_robin_is_manipulable(self):
        truthful = ordinal_of(self.EXAMPLE)
        honest = picking_outcome("round-robin", truthful)
        assert honest.bundle(1) == {1, 2}
        assert honest.bundle(2) == {3, 4}
        found = manipulation_search(self.EXAMPLE, "round-robin", agent=2)
        assert found is not None
        assert found.manipulated_cost < found.truthful_cost
        # the profitable lie swaps her two cheapest items, moving her from
        # {3,4} to {2,4}
        lied = OrdinalProfile((truthful.ranking(1), found.report))
        assert picking_outcome("round-robin", lied).bundle(2) == {2, 4}

    def test_consecutive_pick_is_not(self):
        rng = random.Random(9)
        for n, m in ((2, 4), (3, 5)):
            for _ in range(3):
                inst = gen_random(n, m, 9, seed=rng.randrange(2**32))
                for agent in range(1, n + 1):
                    assert manipulation_search(inst, "consecutive-pick", agent) is None

    def test_random_decline_is_not(self):
        rng = random.Random(10)
        for n, m in ((2, 4), (3, 5)):
            for _ in range(3):
                inst = gen_random(n, m, 9, seed=rng.randrange(2**32))
                for agent in range(1, n + 1):
                    assert manipulation_search(inst, "random-decline", agent) is None

    def test_report_independent_outcome_finds_nothing(self):
        # with quotas (1,1) agent 1 receives whatever agent 2 leaves, so
        # her own report never changes her bundle
        inst = Instance(((5, 1), (1, 5)))
        result = manipulation_search(
            inst, "consecutive-pick", agent=1, schedule=PickSchedule((1, 1))
        )
        assert result is None

    def test_sampled_search_when_budget_small(self):
        inst = Instance(((1, 2, 3, 4), (3, 2, 4, 1)))
        found = manipulation_search(inst, "round-robin", agent=2, budget=10, seed=3)
        # sampling may or may not hit a profitable lie, but must not crash
        if found is not None:
            assert found.manipulated_cost < found.truthful_cost


class TestWorstRatioSearch:
    def test_sesqui_two_agent_witness(self):
        profile = identical_profile(2, 4)
        alloc = run_ordinal(profile, "sesqui-rr")
        worst, witness = worst_ratio_search(profile, alloc)
        assert worst == Fraction(4, 3)
        assert witness.row(1) == (3, 1, 1, 1)

    def test_singletons_are_exact(self):
        profile = identical_profile(3, 3)
        alloc = Allocation.from_lists([[1], [2], [3]], 3)
        worst, _ = worst_ratio_search(profile, alloc, grid=(0, 1, 2))
        assert worst == 1

    def test_round_robin_two_agents_reaches_three_halves(self):
        profile = identical_profile(2, 4)
        alloc = run_ordinal(profile, "round-robin")
        worst, witness = worst_ratio_search(profile, alloc)
        assert worst == Fraction(3, 2)
        binding = [
            witness.row(agent)
            for agent in (1, 2)
            if _ratio(witness.row(agent), alloc.bundle(agent), 2) == worst
        ]
        assert binding  # some returned row actually attains the maximum

    def test_budget_guard(self):
        profile = identical_profile(2, 10)
        alloc = run_ordinal(profile, "round-robin")
        with pytest.raises(BudgetExceededError):
            worst_ratio_search(profile, alloc, grid=tuple(range(10)), budget=100)

    def test_matches_full_matrix_enumeration_tiny(self):
        # the per-agent decomposition equals brute force over whole matrices
        from chorefair.mms import ratio_of

        profile = identical_profile(2, 3)
        alloc = run_ordinal(profile, "sesqui-rr")
        worst, _ = worst_ratio_search(profile, alloc, grid=(0, 1, 2))
        rows = [
            r
            for r in product((0, 1, 2), repeat=3)
            if r[0] >= r[1] >= r[2]
        ]
        brute = Fraction(0)
        for first in rows:
            for second in rows:
                report = ratio_of(Instance((first, second)), alloc)
                brute = max(brute, report.worst)
        assert brute == worst


def _ratio(row, bundle, n):
    share = min_makespan(row, n)
    cost = sum(row[j - 1] for j in bundle)
    return Fraction(cost, share) if share else Fraction(1)


class TestCertifyTwoAgents:
    def test_bound_is_exactly_four_thirds(self):
        cert = certify_lower_bound_n2()
        assert cert.bound == Fraction(4, 3)
        assert cert.enumerated == 16
        assert cert.wall_time_s < 1.0

    def test_case_split_holds_for_every_allocation(self):
        heavy = (3, 1, 1, 1)
        units = (1, 1, 1, 1)
        heavy_share = min_makespan(heavy, 2)
        units_share = min_makespan(units, 2)
        for assignment in product(range(2), repeat=4):
            top_owner = assignment[0]
            bundle = [j + 1 for j in range(4) if assignment[j] == top_owner]
            if len(bundle) >= 2:
                cost = sum(heavy[j - 1] for j in bundle)
                assert Fraction(cost, heavy_share) >= Fraction(4, 3)
            else:
                other = [j + 1 for j in range(4) if assignment[j] != top_owner]
                cost = sum(units[j - 1] for j in other)
                assert Fraction(cost, units_share) >= Fraction(3, 2)


class TestCertifyThreeAgents:
    def test_matches_plain_enumeration_small(self):
        for m in (5, 7):
            rows = adversarial_rows_n3(m)
            shares = [min_makespan(r, 3) for r in rows]
            best = None
            for assignment in product(range(3), repeat=m):
                local = Fraction(0)
                for b in range(3):
                    items = [j for j in range(m) if assignment[j] == b]
                    for row, share in zip(rows, shares):
                        cost = sum(row[j] for j in items)
                        local = max(local, Fraction(cost, share))
                best = local if best is None else min(best, local)
            assert certify_lower_bound_n3(m).bound == best

    def test_rejects_even_or_tiny_m(self):
        with pytest.raises(ValueError):
            certify_lower_bound_n3(8)
        with pytest.raises(ValueError):
            certify_lower_bound_n3(3)

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            certify_lower_bound_n3(13, budget=1000)

    def test_row_shares_match_closed_forms(self):
        for m in (5, 9, 13):
            r0, r1, r2, r3 = adversarial_rows_n3(m)
            assert min_makespan(r0, 3) == 2
            assert min_makespan(r1, 3) == m - 1
            assert min_makespan(r2, 3) == m - 2
            assert min_makespan(r3, 3) == 2 * (m - 3)

    def test_good_allocations_follow_forced_structure(self):
        # allocations that avoid ratio 3/2 give the first three items to
        # three different agents and pair item 4 with item 3's holder
        m = 7
        rows = adversarial_rows_n3(m)
        shares = [min_makespan(r, 3) for r in rows]
        for assignment in product(range(3), repeat=m):
            local = Fraction(0)
            for b in range(3):
                items = [j for j in range(m) if assignment[j] == b]
                for row, share in zip(rows, shares):
                    local = max(local, Fraction(sum(row[j] for j in items), share))
            if local < Fraction(3, 2):
                assert len({assignment[0], assignment[1], assignment[2]}) == 3
                assert assignment[3] == assignment[2]


class TestDescendingPairBound:
    def test_boundary_pair(self):
        assert descending_pair_bound_holds((5, 3), 1)

    def test_uniform_block(self):
        assert descending_pair_bound_holds((4, 4, 4, 4), 2)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            descending_pair_bound_holds((1, 2), 1)
        with pytest.raises(ValueError):
            descending_pair_bound_holds((3, 2, 1), 1)

    def test_ten_thousand_random_blocks(self):
        rng = random.Random(321)
        for _ in range(10_000):
            k = rng.randint(1, 12)
            block = tuple(sorted((rng.randint(0, 99) for _ in range(k)), reverse=True))
            x = rng.randint((k + 1) // 2, k)
            assert descending_pair_bound_holds(block, x)

    @given(
        st.lists(st.integers(0, 1000), min_size=1, max_size=15).map(
            lambda b: tuple(sorted(b, reverse=True))
        ),
        st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_holds_for_all_valid_positions(self, block, data):
        k = len(block)
        x = data.draw(st.integers((k + 1) // 2, k))
        assert descending_pair_bound_holds(block, x)
