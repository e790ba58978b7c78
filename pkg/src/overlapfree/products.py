"""Enumeration of products ``A_{d_1} ... A_{d_k}`` over a finite matrix family."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .constants import load

__all__ = [
    "default_family",
    "product",
    "product_stack",
    "applied_vectors",
    "product_chunks",
    "lyndon_words",
    "is_lyndon",
]


def default_family() -> tuple[np.ndarray, np.ndarray]:
    return load().A


def product(mats: Sequence[np.ndarray], word: Sequence[int]) -> np.ndarray:
    """``mats[word[0]] @ mats[word[1]] @ ...`` (identity for the empty word)."""
    d = mats[0].shape[0]
    out = np.eye(d)
    for i in word:
        out = out @ mats[i]
    return out


def product_stack(mats: Sequence[np.ndarray], k: int) -> np.ndarray:
    """All ``m**k`` products of length ``k``, shape ``(m**k, d, d)``.

    Index order is lexicographic in ``(d_1, ..., d_k)`` with ``A_0`` first,
    i.e. the index of a word is its base-``m`` value with ``d_1`` most
    significant.
    """
    mats = [np.asarray(a, dtype=float) for a in mats]
    d = mats[0].shape[0]
    out = np.eye(d)[None]
    for _ in range(k):
        out = np.stack([out @ a for a in mats], axis=1).reshape(-1, d, d)
    return out


def applied_vectors(mats: Sequence[np.ndarray], k: int, x: np.ndarray) -> np.ndarray:
    """``A x`` for every ``A`` in the length-``k`` products, as rows ``(m**k, d)``.

    Same index order as :func:`product_stack`.  Built from the right with one
    matrix-vector product per tree edge, never forming the matrices.
    """
    mats = [np.asarray(a, dtype=float) for a in mats]
    Y = np.asarray(x, dtype=float)[None]
    for _ in range(k):
        # new leftmost factor: A_{d_1} (A_{d_2} ... x)
        Y = np.concatenate([Y @ a.T for a in mats])
    return Y


def product_chunks(mats: Sequence[np.ndarray], k: int, chunk: int = 1 << 12):
    """Yield ``(start, stack)`` covering all length-``k`` products in index order.

    Products are formed as ``prefix @ suffix`` from two half-length stacks,
    so peak memory is one chunk plus the two halves.
    """
    mats = [np.asarray(a, dtype=float) for a in mats]
    m = len(mats)
    h = k // 2
    suffix = product_stack(mats, h)
    prefix = product_stack(mats, k - h)
    per = max(1, chunk // len(suffix))
    d = mats[0].shape[0]
    for i in range(0, len(prefix), per):
        blk = prefix[i:i + per, None] @ suffix[None]
        yield i * m ** h, blk.reshape(-1, d, d)


def is_lyndon(word: Sequence[int]) -> bool:
    w = tuple(word)
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(max_len: int, m: int = 2) -> Iterator[tuple[int, ...]]:
    """Lyndon words of length ``1..max_len`` over ``range(m)`` (Duval), in lexicographic order.

    Every product's spectral radius (after taking the ``1/k`` root) equals
    that of some Lyndon word, so these are the cyclic representatives.
    """
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        n = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - n])
        while w and w[-1] == m - 1:
            w.pop()
