"""Brute-force enumeration of binary overlap-free words.

An overlap is a factor ``x v x v x`` with ``x`` a letter: a factor of length
``2p + 1`` with period ``p``.  Words are plain ``str`` over ``"ab"``.

The frontier is grown one letter at a time.  Since every prefix of an
overlap-free word is overlap-free, an extension can only create an overlap
ending at the new last letter, so only those are rechecked.
"""

from __future__ import annotations

import re
from functools import lru_cache

__all__ = [
    "BudgetExceeded",
    "has_overlap",
    "has_suffix_overlap",
    "extend_frontier",
    "frontier",
    "count_oracle",
    "oracle_counts",
    "complement",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2000

# matched against the reversed word: an overlap ending at the last letter
_SUFFIX_OVERLAP = re.compile(r"(.)(.*?)\1\2\1")


class BudgetExceeded(ValueError):
    pass


def has_overlap(w: str) -> bool:
    """Direct check of the definition, O(n^3) worst case.

    >>> has_overlap("baabaa"), has_overlap("baabaab")
    (False, True)
    """
    n = len(w)
    for p in range(1, (n - 1) // 2 + 1):
        for i in range(0, n - 2 * p):
            if all(w[i + j] == w[i + j + p] for j in range(p + 1)):
                return True
    return False


def has_suffix_overlap(w: str) -> bool:
    """True iff ``w`` has an overlap that ends at its last letter."""
    return _SUFFIX_OVERLAP.match(w[::-1]) is not None


def extend_frontier(words) -> list[str]:
    """All overlap-free one-letter extensions of ``words``, sorted."""
    out = []
    for w in sorted(words):
        for c in "ab":
            u = w + c
            if not has_suffix_overlap(u):
                out.append(u)
    return out


def complement(w: str) -> str:
    return w.translate(str.maketrans("ab", "ba"))


def frontier(n: int) -> list[str]:
    """Sorted list of all overlap-free words of length ``n``."""
    f = [""]
    for _ in range(n):
        f = extend_frontier(f)
    return f


@lru_cache(maxsize=8)
def oracle_counts(n_max: int, budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """``(u_0, ..., u_{n_max})`` by frontier growth."""
    if n_max > budget:
        raise BudgetExceeded(
            f"oracle length {n_max} exceeds budget {budget}; use counting.count_exact")
    # only the reversed words are kept: the new letter goes in front
    counts = [1]
    rev = [""]
    pat = _SUFFIX_OVERLAP
    for _ in range(n_max):
        rev = [c + r for r in rev for c in "ab" if pat.match(c + r) is None]
        counts.append(len(rev))
    return tuple(counts)


def count_oracle(n: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of overlap-free binary words of length ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > budget:
        raise BudgetExceeded(
            f"oracle length {n} exceeds budget {budget}; use counting.count_exact")
    return oracle_counts(n, budget)[n]
