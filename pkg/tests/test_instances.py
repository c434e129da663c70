import json

import pytest

from chorefair import (
    InfeasibleAllocationError,
    InvalidInstanceError,
    mms_all,
    mms_exact,
    ordinal_of,
)
from chorefair.instances import (
    gen_random,
    hard_family_n3,
    hard_pair_n2,
    read_allocation,
    read_instance,
    write_allocation,
    write_instance,
    write_instance_csv,
)
from chorefair.ido import run_ordinal
from chorefair.mms import ratio_of
from chorefair.model import Allocation


class TestHardPairN2:
    def test_rows(self):
        first, second = hard_pair_n2()
        assert first.costs == ((3, 1, 1, 1), (1, 1, 1, 1))
        assert second.costs == ((1, 1, 1, 1), (1, 1, 1, 1))

    def test_maximin_values(self):
        first, second = hard_pair_n2()
        assert mms_all(first).values == (3, 2)
        assert mms_all(second).values == (2, 2)

    def test_identical_rankings(self):
        for inst in hard_pair_n2():
            prof = ordinal_of(inst)
            assert prof.rankings == ((1, 2, 3, 4),) * 2


class TestHardFamilyN3:
    def test_scaled_rows_at_m5(self):
        family = hard_family_n3(5)
        rows = [si.instance.row(1) for si in family]
        assert rows[0] == (2, 2, 1, 1, 0)
        assert rows[1] == (4, 2, 2, 2, 2)
        assert rows[2] == (3, 3, 1, 1, 1)
        assert rows[3] == (2, 2, 2, 2, 2)

    def test_focal_share_equals_scale(self):
        for m in (5, 7, 9, 11):
            for si in hard_family_n3(m):
                assert mms_exact(si.instance, si.focal_agent) == si.scale

    def test_identical_rankings(self):
        for si in hard_family_n3(7):
            prof = ordinal_of(si.instance)
            assert len(set(prof.rankings)) == 1

    def test_rejects_even_m(self):
        with pytest.raises(InvalidInstanceError):
            hard_family_n3(6)

    def test_sesqui_ratio_reaches_seven_fifths(self):
        # scaled families push the algorithm's worst ratio up to exactly
        # 7/5 at favorable sizes, never beyond
        from fractions import Fraction

        bound = Fraction(7, 5)
        attained = set()
        for m in (5, 7, 9, 11):
            for si in hard_family_n3(m):
                alloc = run_ordinal(ordinal_of(si.instance), "sesqui-rr")
                worst = ratio_of(si.instance, alloc).worst
                assert worst <= bound
                attained.add((m, worst))
        assert any(worst == bound for _, worst in attained)


class TestGenRandom:
    def test_reproducible(self):
        assert gen_random(3, 8, 9, seed=5) == gen_random(3, 8, 9, seed=5)
        assert gen_random(3, 8, 9, seed=5) != gen_random(3, 8, 9, seed=6)

    def test_range(self):
        inst = gen_random(3, 8, 9, seed=1)
        assert all(0 <= c <= 9 for row in inst.costs for c in row)

    def test_ido_flag_sorts_rows(self):
        inst = gen_random(4, 10, 9, seed=2, ido=True)
        for row in inst.costs:
            assert all(a >= b for a, b in zip(row, row[1:]))


class TestFileRoundTrips:
    def test_instance_round_trip(self, tmp_path):
        inst = gen_random(2, 5, 9, seed=3)
        path = tmp_path / "inst.json"
        write_instance(inst, path)
        assert read_instance(path) == inst

    def test_allocation_round_trip(self, tmp_path):
        alloc = Allocation.from_lists([[2, 3], [1]], 3)
        path = tmp_path / "alloc.json"
        write_allocation(alloc, path)
        assert read_allocation(path, 3) == alloc

    def test_ragged_instance_file_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"costs": [[1, 2], [3]]}))
        with pytest.raises(InvalidInstanceError):
            read_instance(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInstanceError):
            read_instance(path)

    def test_non_partition_allocation_rejected(self, tmp_path):
        path = tmp_path / "alloc.json"
        path.write_text(json.dumps({"bundles": [[1], [1, 2]]}))
        with pytest.raises(InfeasibleAllocationError):
            read_allocation(path, 2)

    def test_csv_export(self, tmp_path):
        inst = gen_random(2, 3, 9, seed=4)
        path = tmp_path / "inst.csv"
        write_instance_csv(inst, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "item_1,item_2,item_3"
        assert len(lines) == 3
        assert tuple(int(x) for x in lines[1].split(",")) == inst.row(1)
