import itertools
import math

import pytest
from hypothesis import given, strategies as st

from chaosdet.multiindex import (
    MultiIndex,
    multiplicity,
    num_occupations,
    occupation_of,
    occupations,
    sub_occupations,
)


def test_multiplicity_values():
    assert multiplicity((2, 0)) == 1
    assert multiplicity((1, 1)) == 2
    assert multiplicity((2, 1)) == 3
    assert multiplicity((1, 1, 1)) == 6
    assert multiplicity((0, 0)) == 1


@given(st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=4))
def test_multiplicity_counts_ordered_tuples(occ):
    # total order capped at 8 so the permutation enumeration stays small
    base = []
    for i, a in enumerate(occ):
        base.extend([i] * a)
    assert multiplicity(occ) == len(set(itertools.permutations(base)))


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=6))
def test_occupations_count_and_validity(dim, order):
    occs = list(occupations(dim, order))
    assert len(occs) == num_occupations(dim, order)
    assert len(set(occs)) == len(occs)
    assert occs == sorted(occs)
    for occ in occs:
        assert len(occ) == dim
        assert sum(occ) == order
        assert all(a >= 0 for a in occ)


def test_num_occupations_examples():
    assert num_occupations(3, 2) == 6
    assert num_occupations(2, 4) == 5


@given(
    st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=4),
    st.integers(min_value=0, max_value=6),
)
def test_sub_occupations_match_brute_force(occ, r):
    got = sorted(sub_occupations(occ, r))
    expected = sorted(
        a
        for a in itertools.product(*(range(x + 1) for x in occ))
        if sum(a) == r
    )
    assert got == expected


class TestMultiIndex:
    def test_fields(self):
        mi = MultiIndex((1, 0, 2))
        assert mi.dim == 3
        assert mi.order == 3
        assert mi.multiplicity() == 3

    def test_from_indices_round_trip(self):
        mi = MultiIndex.from_indices([2, 0, 2], dim=3)
        assert mi.occupations == (1, 0, 2)
        assert mi.indices() == (0, 2, 2)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_rejects_out_of_range_index(self):
        with pytest.raises(ValueError):
            occupation_of([3], dim=3)

    def test_multiplicity_is_integer_factorial_ratio(self):
        mi = MultiIndex((3, 2, 1))
        assert mi.multiplicity() == math.factorial(6) // (6 * 2 * 1)
