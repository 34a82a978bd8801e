from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from todahurwitz.errors import PartitionParseError
from todahurwitz.partitions import (
    CoeffMatrix,
    Partition,
    class_size,
    compositions,
    count_typed_set_partitions,
    enumerate_coeff_matrices,
    enumerate_partitions,
    parse_partition,
    rho,
    sigma,
    typed_set_partitions,
)

# OEIS A000041
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def brute_partitions(d):
    out = set()
    for k in range(1, d + 1):
        for parts in product(range(1, d + 1), repeat=k):
            if sum(parts) == d:
                out.add(tuple(sorted(parts, reverse=True)))
    return out


def brute_matrices(s_total, r_total):
    out = set()
    for m in range(1, s_total + 1):
        for s in product(range(1, s_total + 1), repeat=m):
            if sum(s) != s_total:
                continue
            low = 0 if m == 1 else 1
            for r in product(range(low, r_total + 1), repeat=m):
                if sum(r) == r_total:
                    out.add((s, r))
    return out


def brute_typed(values, s, n):
    out = set()
    for assign in product(range(len(s)), repeat=len(values)):
        sizes = Counter(assign)
        sums = Counter()
        for v, j in zip(values, assign):
            sums[j] += v
        if all(sizes[j] == n[j] and sums[j] == s[j] for j in range(len(s))):
            out.add(assign)
    return out


class TestPartition:
    def test_sorted_on_construction(self):
        assert Partition((1, 3, 2)).parts == (3, 2, 1)

    def test_weight_length(self):
        p = Partition((3, 1, 1))
        assert (p.weight, p.length) == (5, 3)

    def test_rejects_nonpositive(self):
        with pytest.raises(PartitionParseError):
            Partition((2, 0))

    def test_str_roundtrip(self):
        p = Partition((4, 2, 2, 1))
        assert parse_partition(str(p)) == p

    @pytest.mark.parametrize("text,parts", [
        ("[3,2,1]", (3, 2, 1)),
        ("1,3, 2", (3, 2, 1)),
        (" [ 2 ] ", (2,)),
        ("[]", ()),
    ])
    def test_parse(self, text, parts):
        assert parse_partition(text).parts == parts

    @pytest.mark.parametrize("text,token", [
        ("[2,x]", "'x'"),
        ("[2,,1]", "''"),
        ("[2,-1]", "'-1'"),
        ("[0,1]", "'0'"),
        ("[2,1.5]", "'1.5'"),
    ])
    def test_parse_errors_name_token(self, text, token):
        with pytest.raises(PartitionParseError, match=token):
            parse_partition(text)

    def test_parse_unbalanced(self):
        with pytest.raises(PartitionParseError):
            parse_partition("[2,1")

    def test_sigma_rho(self):
        p = Partition((3, 2, 2, 1, 1, 1))
        assert sigma(p) == 2 * 6
        assert rho(p) == 12
        assert sigma(Partition(())) == 1 and rho(Partition(())) == 1


class TestEnumeration:
    def test_reverse_lex_order(self):
        assert [str(p) for p in enumerate_partitions(4)] == ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]

    @pytest.mark.parametrize("d", range(0, 11))
    def test_counts(self, d):
        assert len(enumerate_partitions(d)) == PARTITION_COUNTS[d]

    @pytest.mark.parametrize("d", range(1, 8))
    def test_matches_brute_force(self, d):
        got = [p.parts for p in enumerate_partitions(d)]
        assert len(got) == len(set(got))
        assert set(got) == brute_partitions(d)
        assert got == sorted(got, reverse=True)

    @pytest.mark.parametrize("d", range(1, 8))
    def test_class_sizes_sum_to_factorial(self, d):
        from math import factorial

        assert sum(class_size(p) for p in enumerate_partitions(d)) == factorial(d)

    def test_compositions(self):
        assert compositions(4, 2) == ((1, 3), (2, 2), (3, 1))
        assert compositions(2, 3) == ()


class TestCoeffMatrix:
    def test_example_order(self):
        assert [str(c) for c in enumerate_coeff_matrices(3, 2)] == ["3|2", "1,2|1,1", "2,1|1,1"]

    @pytest.mark.parametrize("s_total,r_total", [(1, 0), (2, 0), (3, 1), (4, 3), (5, 4), (6, 2)])
    def test_matches_brute_force(self, s_total, r_total):
        got = [(c.s, c.r) for c in enumerate_coeff_matrices(s_total, r_total)]
        assert len(got) == len(set(got))
        assert set(got) == brute_matrices(s_total, r_total)

    def test_parse_and_str(self):
        c = CoeffMatrix.parse("(1,2|1,1)")
        assert (c.s, c.r, c.m) == ((1, 2), (1, 1), 2)
        assert str(c) == "1,2|1,1"
        assert c.columns == ((1, 1), (2, 1))

    @pytest.mark.parametrize("text", ["1,2|1", "1,2", "a|1", "2,1|0,1"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            CoeffMatrix.parse(text)

    def test_single_column_allows_zero(self):
        assert CoeffMatrix((3,), (0,)).r == (0,)


class TestTypedSetPartitions:
    def test_equal_values_are_distinct_positions(self):
        got = typed_set_partitions((2, 2), (2, 2), (1, 1))
        assert [t.blocks for t in got] == [((0,), (1,)), ((1,), (0,))]

    def test_empty_when_impossible(self):
        assert typed_set_partitions((2,), (1, 1), (1, 1)) == []
        assert count_typed_set_partitions((2,), (1, 1), (1, 1)) == 0

    @pytest.mark.parametrize("values,s,n", [
        ((2, 1, 1), (2, 2), (1, 2)),
        ((3, 2, 1, 1), (4, 3), (2, 2)),
        ((1, 1, 1, 1), (2, 1, 1), (2, 1, 1)),
        ((2, 2, 1, 1), (3, 3), (2, 2)),
    ])
    def test_matches_brute_force(self, values, s, n):
        got = {t.assignment(len(values)) for t in typed_set_partitions(values, s, n)}
        assert got == brute_typed(values, s, n)
        assert count_typed_set_partitions(values, s, n) == len(got)


small_values = st.lists(st.integers(1, 3), min_size=1, max_size=5)


@settings(max_examples=150, deadline=None)
@given(values=small_values, data=st.data())
def test_typed_count_equals_enumeration(values, data):
    m = data.draw(st.integers(1, min(3, len(values))))
    n = data.draw(st.lists(st.integers(1, len(values)), min_size=m, max_size=m))
    s = data.draw(st.lists(st.integers(1, sum(values)), min_size=m, max_size=m))
    listed = typed_set_partitions(values, s, n)
    assert count_typed_set_partitions(values, s, n) == len(listed)
    for t in listed:
        for j, block in enumerate(t.blocks):
            assert len(block) == n[j]
            assert sum(values[p] for p in block) == s[j]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 9), max_size=8))
def test_partition_invariants(parts):
    p = Partition(tuple(parts))
    assert list(p.parts) == sorted(parts, reverse=True)
    assert p.weight == sum(parts) and p.length == len(parts)
    assert parse_partition(str(p)) == p
    assert sigma(p) >= 1
    assert sum(p.multiplicities().values()) == p.length
