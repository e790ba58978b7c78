"""Exact counts u_n in O(log n) and growth statistics of u_n.

``u_n = w^T y_{n-1}`` with ``y_{2m} = F0 y_m``, ``y_{2m+1} = F1 y_m`` for
``m >= 8``.  Single queries use Python integers.  Bulk queries (dyadic scans,
random samples) run the same recurrence on ``int64`` arrays next to a
``float64`` shadow; a row whose shadow gets near ``2**62`` is recomputed
with Python integers, so every returned count is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .constants import load
from .linalg import ExactMatrix, ExactVector, mat_mul, mat_vec
from .words import oracle_counts

__all__ = [
    "DigitWord",
    "GrowthStats",
    "RatioStats",
    "SigmaSample",
    "digits",
    "y_vector",
    "count_exact",
    "count_by_digits",
    "count_many",
    "a_product",
    "a_product_norms",
    "ratio_diagnostic",
    "growth_exponents",
    "dyadic_partial_sums",
    "sigma_empirical",
    "table",
    "table_csv",
    "one_norm_exact",
]

_SAFE = float(2 ** 62)


@dataclass(frozen=True)
class DigitWord:
    """Binary digits ``d_1..d_k`` of ``n - 1``, least significant first."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if not self.digits or self.digits[-1] != 1:
            raise ValueError("leading digit d_k must be 1")

    @property
    def k(self) -> int:
        return len(self.digits)

    @property
    def n(self) -> int:
        return 1 + sum(d << j for j, d in enumerate(self.digits))


def digits(n: int) -> DigitWord:
    """>>> digits(17).digits
    (0, 0, 0, 0, 1)
    """
    if n < 2:
        raise ValueError("digits(n) needs n >= 2")
    m = n - 1
    return DigitWord(tuple((m >> j) & 1 for j in range(m.bit_length())))


def y_vector(m: int) -> ExactVector:
    """Cassaigne's vector ``y_m`` (F coordinate order)."""
    d = load()
    if m < 3:
        raise ValueError("y_m is defined for m >= 3")
    if m <= 15:
        return d.y[m]
    L = m.bit_length()
    y = d.y[m >> (L - 4)]
    for j in range(L - 5, -1, -1):
        y = mat_vec(d.F[(m >> j) & 1], y)
    return y


def count_exact(n: int) -> int:
    """Number of overlap-free binary words of length ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < 16:
        return oracle_counts(15)[n]
    return load().w.dot(y_vector(n - 1))


def count_by_digits(n: int) -> int:
    """``w^T F_{d_1} ... F_{d_{k-4}} y_m`` evaluated right to left (n >= 16)."""
    if n < 16:
        raise ValueError("the digit form needs n >= 16")
    d = load()
    dw = digits(n).digits
    k = len(dw)
    m = dw[k - 4] + 2 * dw[k - 3] + 4 * dw[k - 2] + 8 * dw[k - 1]
    y = d.y[m]
    for j in range(k - 5, -1, -1):
        y = mat_vec(d.F[dw[j]], y)
    return d.w.dot(y)


def a_product(n: int) -> ExactMatrix:
    """``A(n) = A_{d_1} ... A_{d_k}`` for the digits of ``n - 1``."""
    d = load()
    dw = digits(n).digits
    out = ExactMatrix.identity(20)
    for dj in dw:
        out = mat_mul(out, (d.A0, d.A1)[dj])
    return out


# ---------------------------------------------------------------------------
# batched exact evaluation

def _int_arrays():
    d = load()
    F = [f.to_array(np.int64) for f in d.F]
    A = [a.to_array(np.int64) for a in (d.A0, d.A1)]
    Y = np.array([d.y[m].entries for m in range(8, 16)], dtype=np.int64)
    return F, A, Y, d.w.to_array(np.int64)


def _y_batch(ms: np.ndarray):
    """``(int64 Y, float Y, ok mask)`` for ``m >= 8``; rows with ``ok=False`` may have overflowed."""
    F, _, Y0, _ = _int_arrays()
    Ff = [f.astype(float) for f in F]
    ms = np.asarray(ms, dtype=np.int64)
    if ms.size and ms.min() < 8:
        raise ValueError("batched y needs m >= 8")
    L = np.array([int(m).bit_length() for m in ms], dtype=np.int64)
    top = ms >> (L - 4)
    Y = Y0[top - 8].copy()
    Yf = Y.astype(float)
    for j in range(int(L.max(initial=4)) - 5, -1, -1):
        live = L - 5 >= j
        bit = ((ms >> j) & 1).astype(bool)
        for b in (0, 1):
            sel = live & (bit == bool(b))
            if sel.any():
                Y[sel] = Y[sel] @ F[b].T
                Yf[sel] = Yf[sel] @ Ff[b].T
    ok = Yf.max(axis=1, initial=0.0) < _SAFE
    return Y, Yf, ok


def count_many(ns) -> list[int]:
    """Exact ``u_n`` for many ``n`` at once."""
    ns = [int(n) for n in ns]
    out = [0] * len(ns)
    # batch only what int64 can index; the rest goes through Python ints
    big = [i for i, n in enumerate(ns) if 16 <= n < 2 ** 62]
    for i, n in enumerate(ns):
        if not 16 <= n < 2 ** 62:
            out[i] = count_exact(n)
    if big:
        _, _, _, w = _int_arrays()
        Y, Yf, ok = _y_batch(np.array([ns[i] - 1 for i in big]))
        ok &= (Yf @ w.astype(float)) < _SAFE
        vals = Y @ w
        for j, i in enumerate(big):
            out[i] = int(vals[j]) if ok[j] else count_exact(ns[i])
    return out


def a_product_norms(ns) -> list[int]:
    """Exact ``||A(n)||_1`` for many ``n`` (max column sum of a nonnegative product)."""
    ns = [int(n) for n in ns]
    if any(n < 2 for n in ns):
        raise ValueError("A(n) needs n >= 2")
    if any(n >= 2 ** 62 for n in ns):
        return [one_norm_exact(a_product(n)) for n in ns]
    ns = np.asarray(ns, dtype=np.int64)
    _, A, _, _ = _int_arrays()
    Af = [a.astype(float) for a in A]
    ms = ns - 1
    L = np.array([int(m).bit_length() for m in ms])
    R = np.ones((len(ns), 20), dtype=np.int64)
    Rf = np.ones((len(ns), 20))
    # row vector 1^T A_{d_1} ... A_{d_k}, applied left to right
    for j in range(int(L.max(initial=1))):
        live = L > j
        bit = ((ms >> j) & 1).astype(bool)
        for b in (0, 1):
            sel = live & (bit == bool(b))
            if sel.any():
                R[sel] = R[sel] @ A[b]
                Rf[sel] = Rf[sel] @ Af[b]
    ok = Rf.max(axis=1) < _SAFE
    out = []
    for i, n in enumerate(ns):
        if ok[i]:
            out.append(int(R[i].max()))
        else:
            out.append(one_norm_exact(a_product(int(n))))
    return out


@dataclass
class RatioStats:
    count: int
    min: float
    max: float
    argmin: int
    argmax: int
    histogram: list = field(default_factory=list)
    bin_edges: list = field(default_factory=list)
    cap: float = 0.0

    @property
    def spread(self) -> float:
        return self.max / self.min

    @property
    def within_cap(self) -> bool:
        return self.spread <= self.cap


def ratio_diagnostic(sample, cap: float = 50.0, bins: int = 20) -> RatioStats:
    """Statistics of ``u_n / ||A(n)||_1`` over the sample (all ``n >= 16``)."""
    sample = [int(n) for n in sample]
    if any(n < 16 for n in sample):
        raise ValueError("ratio diagnostic needs n >= 16")
    u = count_many(sample)
    a = a_product_norms(sample)
    r = np.array([ui / ai for ui, ai in zip(u, a)])
    hist, edges = np.histogram(r, bins=bins)
    i0, i1 = int(np.argmin(r)), int(np.argmax(r))
    return RatioStats(len(r), float(r[i0]), float(r[i1]), sample[i0], sample[i1],
                      hist.tolist(), edges.tolist(), cap)


# ---------------------------------------------------------------------------
# dyadic scans

@dataclass
class GrowthStats:
    """Per block ``2^(k-1) < n <= 2^k``: extremes of ``log u_n / log n``."""

    k: list = field(default_factory=list)
    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    argmin: list = field(default_factory=list)
    argmax: list = field(default_factory=list)
    partial: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["k", "alpha_k", "beta_k"])
        for k, a, b in zip(self.k, self.alpha, self.beta):
            wr.writerow([k, f"{a:.12g}", f"{b:.12g}"])
        return buf.getvalue()


CHUNK = 1 << 16
FULL_SCAN_LIMIT = 22


def _walk(k_max: int, visit) -> None:
    """Call ``visit(k, n_array, u_array)`` covering every ``16 < n <= 2^k_max`` once.

    Depth-first over the recurrence tree, batched in chunks of at most
    ``CHUNK`` vectors so memory stays bounded.
    """
    F, _, Y0, w = _int_arrays()
    Ft = [f.T.copy() for f in F]

    def rec(Y, M, k):
        # rows of Y are y_m with bit_length(m) == k, i.e. n = m + 1 in block k
        visit(k, M + 1, Y @ w)
        if k == k_max:
            return
        kids = [(Y @ Ft[0], 2 * M), (Y @ Ft[1], 2 * M + 1)]
        if 2 * len(Y) <= CHUNK:
            rec(np.concatenate([kids[0][0], kids[1][0]]),
                np.concatenate([kids[0][1], kids[1][1]]), k + 1)
        else:
            for Yc, Mc in kids:
                rec(Yc, Mc, k + 1)

    if k_max > 40:
        raise ValueError("dyadic scans beyond k=40 would overflow int64")
    rec(Y0, np.arange(8, 16, dtype=np.int64), 4)


def growth_exponents(k_max: int) -> GrowthStats:
    """Exact ``alpha_k`` and ``beta_k`` for ``1 <= k <= k_max`` by full scan.

    The scan stops at ``k = FULL_SCAN_LIMIT``; a larger request returns the
    blocks up to the limit with ``partial = True``.
    """
    partial = k_max > FULL_SCAN_LIMIT
    k_max = min(k_max, FULL_SCAN_LIMIT)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    lo = {}
    hi = {}
    small = oracle_counts(16)

    def upd(k, n, v):
        if k not in lo or v < lo[k][0]:
            lo[k] = (v, n)
        if k not in hi or v > hi[k][0]:
            hi[k] = (v, n)

    for n in range(2, min(16, 2 ** k_max) + 1):
        k = (n - 1).bit_length()
        u = small[n] if n <= 16 else count_exact(n)
        upd(k, n, math.log(u) / math.log(n))

    def visit(k, N, U):
        if k > k_max:
            return
        keep = N > 16
        if not keep.any():
            return
        N, U = N[keep], U[keep]
        v = np.log(U.astype(float)) / np.log(N.astype(float))
        i0, i1 = int(np.argmin(v)), int(np.argmax(v))
        upd(k, int(N[i0]), float(v[i0]))
        upd(k, int(N[i1]), float(v[i1]))

    if k_max >= 5:
        _walk(k_max, visit)
    gs = GrowthStats(partial=partial)
    for k in sorted(lo):
        gs.k.append(k)
        gs.alpha.append(lo[k][0])
        gs.beta.append(hi[k][0])
        gs.argmin.append(lo[k][1])
        gs.argmax.append(hi[k][1])
    return gs


def dyadic_partial_sums(k_max: int) -> dict[int, int]:
    """``{k: sum_{j < 2^k + 1} u_j}`` for ``4 <= k <= k_max`` (exact)."""
    block = {}

    def visit(k, N, U):
        block[k] = block.get(k, 0) + int(U.sum())

    _walk(k_max, visit)
    total = sum(oracle_counts(16)[:17])            # u_0 .. u_16
    out = {4: total}
    for k in range(5, k_max + 1):
        total += block[k]
        out[k] = total
    return out


@dataclass
class SigmaSample:
    k: int
    samples: int
    seed: int
    mean: float
    std: float
    within: dict


def sigma_empirical(k: int, samples: int, seed: int = 0, center: float = 1.305,
                    eps=(0.05, 0.02)) -> SigmaSample:
    """Distribution of ``log u_n / log n`` for ``n`` uniform on ``(2^(k-1), 2^k]``."""
    if k < 8:
        raise ValueError("sigma_empirical needs k >= 8")
    if k > 62:
        raise ValueError("k too large for int64 sampling")
    rng = np.random.default_rng(seed)
    ns = rng.integers(2 ** (k - 1) + 1, 2 ** k + 1, size=samples, dtype=np.int64)
    u = count_many(ns.tolist())
    v = np.array([math.log(ui) / math.log(int(n)) for ui, n in zip(u, ns)])
    within = {float(e): float(np.mean(np.abs(v - center) <= e)) for e in eps}
    return SigmaSample(k, samples, seed, float(v.mean()), float(v.std()), within)


def table(a: int, b: int) -> list[tuple[int, int]]:
    """``[(n, u_n) for a <= n <= b]``."""
    return list(zip(range(a, b + 1), count_many(range(a, b + 1))))


def table_csv(a: int, b: int) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "u_n"])
    for n, u in table(a, b):
        wr.writerow([n, str(u)])
    return buf.getvalue()


def one_norm_exact(m: ExactMatrix) -> int:
    return max(sum(m[i, j] for i in range(m.rows)) for j in range(m.cols))
