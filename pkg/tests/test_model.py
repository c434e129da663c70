import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chorefair import (
    Allocation,
    IdoInstance,
    InfeasibleAllocationError,
    Instance,
    InvalidInstanceError,
    OrdinalProfile,
    bundle_cost,
    ordinal_of,
    validate_instance,
)

matrices = st.integers(1, 4).flatmap(
    lambda m: st.lists(
        st.lists(st.integers(0, 9), min_size=m, max_size=m), min_size=1, max_size=4
    )
)


class TestValidateInstance:
    def test_accepts_hard_two_agent_matrix(self):
        inst = validate_instance([[3, 1, 1, 1], [1, 1, 1, 1]])
        assert (inst.n, inst.m) == (2, 4)

    def test_accepts_minimal_instance(self):
        inst = validate_instance([[0]])
        assert (inst.n, inst.m) == (1, 1)

    def test_rejects_negative_cost(self):
        with pytest.raises(InvalidInstanceError) as excinfo:
            validate_instance([[1, -2]])
        assert any("negative" in v for v in excinfo.value.violations)

    def test_rejects_empty_matrix(self):
        with pytest.raises(InvalidInstanceError):
            validate_instance([])

    def test_rejects_ragged_rows(self):
        with pytest.raises(InvalidInstanceError) as excinfo:
            validate_instance([[1, 2], [3]])
        assert any("ragged" in v for v in excinfo.value.violations)

    def test_rejects_non_integer(self):
        with pytest.raises(InvalidInstanceError):
            validate_instance([[1.5, 2]])

    def test_reports_all_violations_at_once(self):
        with pytest.raises(InvalidInstanceError) as excinfo:
            validate_instance([[-1, 2], [3]])
        assert len(excinfo.value.violations) >= 2


class TestOrdinalOf:
    def test_sorts_by_descending_cost(self):
        assert ordinal_of(validate_instance([[3, 1, 2]])).rankings == ((1, 3, 2),)

    def test_ties_break_by_item_index(self):
        assert ordinal_of(validate_instance([[1, 1, 1, 1]])).rankings == ((1, 2, 3, 4),)

    def test_hard_instance_is_identically_ranked(self):
        prof = ordinal_of(validate_instance([[3, 1, 1, 1], [1, 1, 1, 1]]))
        assert prof.rankings == ((1, 2, 3, 4), (1, 2, 3, 4))

    @given(matrices)
    @settings(max_examples=150, deadline=None)
    def test_ranking_costs_never_increase(self, rows):
        inst = validate_instance(rows)
        prof = ordinal_of(inst)
        for agent in range(1, inst.n + 1):
            ranked = [inst.cost(agent, j) for j in prof.ranking(agent)]
            assert all(a >= b for a, b in zip(ranked, ranked[1:]))


class TestBundleCost:
    def test_sums_member_costs(self):
        inst = validate_instance([[3, 1, 1, 1]])
        assert bundle_cost(inst, 1, {1, 4}) == 4

    def test_empty_bundle_costs_nothing(self):
        inst = validate_instance([[3, 1, 1, 1], [1, 1, 1, 1]])
        assert bundle_cost(inst, 2, set()) == 0

    def test_three_unit_items(self):
        inst = validate_instance([[3, 1, 1, 1], [1, 1, 1, 1]])
        assert bundle_cost(inst, 2, {2, 3, 4}) == 3

    def test_out_of_range_item(self):
        inst = validate_instance([[1, 2]])
        with pytest.raises(IndexError):
            bundle_cost(inst, 1, {3})

    @given(matrices, st.data())
    @settings(max_examples=150, deadline=None)
    def test_additive_over_disjoint_bundles(self, rows, data):
        inst = validate_instance(rows)
        items = list(range(1, inst.m + 1))
        left = data.draw(st.sets(st.sampled_from(items)))
        right = set(items) - left
        total = bundle_cost(inst, 1, left) + bundle_cost(inst, 1, right)
        assert total == bundle_cost(inst, 1, items)


class TestAllocation:
    def test_partition_enforced(self):
        Allocation.from_lists([[1, 3], [2]], 3)
        with pytest.raises(InfeasibleAllocationError):
            Allocation.from_lists([[1, 2], [2, 3]], 3)
        with pytest.raises(InfeasibleAllocationError):
            Allocation.from_lists([[1], [2]], 3)
        with pytest.raises(InfeasibleAllocationError):
            Allocation.from_lists([[1, 2, 4]], 3)

    def test_round_trips_through_dict(self):
        alloc = Allocation.from_lists([[2], [1, 3]], 3)
        assert Allocation.from_dict(alloc.to_dict(), 3) == alloc


class TestIdoInstance:
    def test_requires_non_increasing_rows(self):
        IdoInstance(((3, 2, 1),))
        with pytest.raises(InvalidInstanceError):
            IdoInstance(((1, 2),))


class TestOrdinalProfile:
    def test_requires_permutations(self):
        with pytest.raises(InvalidInstanceError):
            OrdinalProfile(((1, 1, 2),))

    def test_instance_round_trip(self):
        inst = validate_instance([[5, 0], [2, 2]])
        assert Instance.from_dict(inst.to_dict()) == inst
        with pytest.raises(InvalidInstanceError):
            Instance.from_dict({"n": 3, "costs": [[1, 2]]})
