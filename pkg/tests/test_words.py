import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlapfree.words import (
    BudgetExceeded,
    complement,
    count_oracle,
    extend_frontier,
    frontier,
    has_overlap,
    has_suffix_overlap,
    oracle_counts,
)

FIRST_SIXTEEN = [1, 2, 4, 6, 10, 14, 20, 24, 30, 36, 44, 48, 60, 60, 62, 72]

words = st.text(alphabet="ab", max_size=24)


@pytest.mark.parametrize("w, expected", [
    ("", False), ("a", False), ("aa", False), ("aaa", True),
    ("abab", False), ("ababa", True), ("baabaa", False), ("baabaab", True),
    ("abbabaab", False),
])
def test_has_overlap(w, expected):
    assert has_overlap(w) is expected


def _ends_with_overlap(w):
    n = len(w)
    return any(all(w[i] == w[i + p] for i in range(n - 2 * p - 1, n - p))
               for p in range(1, (n - 1) // 2 + 1))


@settings(max_examples=300, deadline=None)
@given(words)
def test_suffix_check_matches_definition(w):
    assert has_suffix_overlap(w) == _ends_with_overlap(w)
    if not has_overlap(w[:-1]):
        assert has_suffix_overlap(w) == has_overlap(w)


def test_first_values_match_listing():
    assert list(oracle_counts(15)) == FIRST_SIXTEEN


def test_frontier_against_exhaustive():
    for n in range(0, 13):
        brute = sorted("".join(p) for p in itertools.product("ab", repeat=n)
                       if not has_overlap("".join(p)))
        assert frontier(n) == brute
        assert count_oracle(n) == len(brute)


def test_prefix_closure():
    f10 = set(frontier(10))
    f11 = frontier(11)
    assert all(w[:-1] in f10 for w in f11)
    assert sorted(extend_frontier(f10)) == f11


def test_complement_and_reversal_symmetry():
    for n in (7, 12, 18):
        f = set(frontier(n))
        assert {complement(w) for w in f} == f
        assert {w[::-1] for w in f} == f


def test_counts_are_even_after_zero():
    # complement pairs words up
    assert all(u % 2 == 0 for u in oracle_counts(60)[1:])


def test_budget():
    with pytest.raises(BudgetExceeded):
        count_oracle(10, budget=5)
    with pytest.raises(ValueError):
        count_oracle(-1)


def test_known_values():
    u = oracle_counts(100)
    assert u[100] == 958
