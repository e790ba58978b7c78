"""Upper growth rate: bounds on the joint spectral radius of ``(A_0, A_1)``.

Lower bounds come from spectral radii of individual products (one word per
cyclic class).  Upper bounds come from norms of all products of a fixed
length, either searched with branch and bound or checked against a stored
ellipsoidal norm.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constants import load
from .linalg import (
    NotPositiveDefiniteError,
    as_real,
    dominant_eigenvalue_batch,
    ellipsoid_transform,
    is_negative_definite,
)
from .products import lyndon_words, default_family, product, product_chunks
from .report import BoundsReport

__all__ = [
    "JsrBounds",
    "EllipsoidCert",
    "jsr_lower",
    "jsr_upper_norm",
    "branch_and_bound_max",
    "verify_ellipsoid_certificate",
    "stored_certificate",
    "beta_bounds",
    "NORMS",
]

# relative inflation applied to float norms before they are used as bounds
ROUND_UP = {"one": 1e-12, "two": 1e-10, "ellipsoid": 1e-10}
BETA_WINDOW = (1.3322, 1.3326)


def _one(stack: np.ndarray) -> np.ndarray:
    return np.abs(stack).sum(axis=-2).max(axis=-1)


def _two(stack: np.ndarray) -> np.ndarray:
    return np.linalg.norm(stack, ord=2, axis=(-2, -1))


NORMS: dict[str, Callable[[np.ndarray], np.ndarray]] = {"one": _one, "two": _two}


@dataclass
class JsrBounds:
    lower: float
    upper: float
    lower_witness: tuple
    methods: dict = field(default_factory=dict)
    depth: int = 0


@dataclass(frozen=True)
class EllipsoidCert:
    """``A^T P A - c^(2k) P`` negative definite for every ``A`` of length ``k``."""

    P: np.ndarray
    c: float = 2.5186
    k: int = 14

    def __post_init__(self):
        p = as_real(self.P)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"P must be square, got {p.shape}")
        if not np.allclose(p, p.T, rtol=1e-12, atol=0):
            raise NotPositiveDefiniteError("P is not symmetric")
        if self.k < 1:
            raise ValueError("k must be positive")

    def to_json(self) -> str:
        return json.dumps({"type": "ellipsoid", "k": self.k, "c": self.c,
                           "P": [[float(x) for x in r] for r in as_real(self.P)]})

    @classmethod
    def from_json(cls, text: str) -> "EllipsoidCert":
        d = json.loads(text)
        if d.get("type") != "ellipsoid":
            raise ValueError(f"not an ellipsoid certificate: type={d.get('type')!r}")
        return cls(np.array(d["P"], dtype=float), float(d["c"]), int(d["k"]))


def stored_certificate() -> EllipsoidCert:
    return EllipsoidCert(np.array(load().P_cert), 2.5186, 14)


def _family(mats):
    if mats is None:
        return default_family()
    return tuple(as_real(a) for a in mats)


def jsr_lower(depth: int, mats=None) -> tuple[float, tuple[int, ...]]:
    """Best ``rho(A_w)^(1/|w|)`` over Lyndon words ``w`` with ``|w| <= depth``.

    Uses the lower end of each Perron enclosure, so the value is a certified
    lower bound on the joint spectral radius (up to float rounding in the
    products themselves).
    """
    if not 1 <= depth <= 16:
        raise ValueError("depth must be in 1..16")
    mats = _family(mats)
    words = list(lyndon_words(depth, len(mats)))
    best, arg = -1.0, None
    for k in range(1, depth + 1):
        ws = [w for w in words if len(w) == k]
        if not ws:
            continue
        stack = np.array([product(mats, w) for w in ws])
        lo, _, _, _ = dominant_eigenvalue_batch(stack)
        vals = lo ** (1.0 / k)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), ws[i]
    return best, tuple(arg)


def branch_and_bound_max(mats, k: int, norm: Callable, tail_bounds=None,
                         prune: bool = True, chunk: int = 1 << 13) -> float:
    """``max ||A_w||`` over words of length ``k`` by depth-first branch and bound.

    ``tail_bounds[j]`` must bound ``||A_q||`` for every word ``q`` of length
    ``j``; a prefix ``p`` of length ``j`` is dropped once
    ``||p|| * tail_bounds[k - j]`` cannot beat the incumbent.  Without
    ``tail_bounds`` the one-step bound ``U**j`` is used.  The returned value
    does not depend on the visiting order.
    """
    mats = [as_real(a) for a in mats]
    d = mats[0].shape[0]
    if tail_bounds is None:
        u = float(max(norm(a[None])[0] for a in mats))
        tail_bounds = [u ** j for j in range(k + 1)]

    # seed the incumbent with a greedy descent
    cur = np.eye(d)
    for _ in range(k):
        cand = np.array([cur @ a for a in mats])
        cur = cand[int(np.argmax(norm(cand)))]
    incumbent = float(norm(cur[None])[0])

    def visit(stack: np.ndarray, j: int):
        nonlocal incumbent
        nxt = np.concatenate([stack @ a for a in mats])
        j += 1
        nv = norm(nxt)
        if j == k:
            incumbent = max(incumbent, float(nv.max()))
            return
        if prune:
            keep = nv * tail_bounds[k - j] > incumbent
            nxt = nxt[keep]
        for i in range(0, len(nxt), chunk):
            visit(nxt[i:i + chunk], j)

    if k == 0:
        return 1.0
    visit(np.eye(d)[None], 0)
    return incumbent


def jsr_upper_norm(depth: int, norm: str = "one", P=None, mats=None,
                   prune: bool = True, return_levels: bool = False):
    """``min_k (max_{|w|=k} ||A_w||)^(1/k)`` for ``k = 1..depth``.

    ``norm`` is ``"one"``, ``"two"`` or ``"ellipsoid"`` (the latter needs a
    positive definite ``P`` and is evaluated as the spectral norm of the
    conjugated family ``T A T^-1``).  Each level maximum is inflated by a
    small relative amount so the result is an upper bound.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mats = list(_family(mats))
    if norm == "ellipsoid":
        if P is None:
            P = load().P_cert
        t, ti = ellipsoid_transform(P)
        mats = [t @ a @ ti for a in mats]
        fn = _two
    elif norm in NORMS:
        fn = NORMS[norm]
    else:
        raise ValueError(f"unknown norm {norm!r}")
    infl = 1.0 + ROUND_UP[norm]
    levels = [1.0]
    best = math.inf
    for k in range(1, depth + 1):
        mk = branch_and_bound_max(mats, k, fn, tail_bounds=levels, prune=prune) * infl
        levels.append(mk)
        best = min(best, mk ** (1.0 / k))
    if return_levels:
        return best, levels
    return best


def _chunk_check(t, ti, stack):
    b = t @ stack @ ti
    s = np.linalg.norm(b, ord=2, axis=(-2, -1))
    return float(s.max()), int(np.argmax(s))


def verify_ellipsoid_certificate(cert: EllipsoidCert, mats=None, threads: int = 1,
                                 chunk: int = 1 << 12) -> dict:
    """Check ``A^T P A - c^(2k) P < 0`` for all ``2^k`` products of length ``k``.

    With ``P = L L^T`` and ``T = L^T`` the condition is
    ``||T A T^-1||_2 < c^k``, so the smallest working constant is
    ``achieved_c = max ||A||_P^(1/k)`` (what a bisection on ``c`` converges
    to).  The worst product is then rechecked with a Cholesky test at the
    claimed ``c``.  ``worst_margin`` is ``1 - (achieved_c / c)^(2k)``,
    positive when the claim holds with room to spare.
    """
    mats = _family(mats)
    t, ti = ellipsoid_transform(cert.P)
    k = cert.k
    t0 = time.perf_counter()
    chunks = product_chunks(mats, k, chunk)
    worst, worst_idx = 0.0, 0

    def job(item):
        start, stack = item
        s, i = _chunk_check(t, ti, stack)
        return s, start + i

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(job, chunks))
    else:
        results = [job(c) for c in chunks]
    for s, i in results:
        if s > worst:
            worst, worst_idx = s, i
    worst *= 1.0 + ROUND_UP["ellipsoid"]
    achieved = worst ** (1.0 / k)

    m = len(mats)
    digits = []
    idx = worst_idx
    for _ in range(k):
        idx, r = divmod(idx, m)
        digits.append(r)
    word = tuple(reversed(digits))
    a = product(mats, word)
    p = as_real(cert.P)
    lmi = a.T @ p @ a - cert.c ** (2 * k) * p
    chol_ok = is_negative_definite(lmi / cert.c ** (2 * k), margin=0.0)
    verified = achieved <= cert.c and chol_ok
    return {
        "verified": bool(verified),
        "achieved_c": achieved,
        "claimed_c": cert.c,
        "within_tolerance": achieved <= cert.c * 1.001,
        "worst_margin": 1.0 - (achieved / cert.c) ** (2 * k),
        "worst_word": "".join(map(str, word)),
        "products": m ** k,
        "seconds": time.perf_counter() - t0,
    }


def beta_bounds(cert: EllipsoidCert | None | bool = True, threads: int = 1) -> BoundsReport:
    """Enclosure of the upper growth exponent ``beta = log2 rho_hat``.

    ``cert=True`` uses the stored certificate, ``None``/``False`` falls back to
    the depth-1 column-sum bound.
    """
    t0 = time.perf_counter()
    lo, witness = jsr_lower(2)
    flags = []
    extras = {"lower_witness": "".join(map(str, witness))}
    if cert is True:
        cert = stored_certificate()
    if cert:
        res = verify_ellipsoid_certificate(cert, threads=threads)
        hi = cert.c if res["verified"] else res["achieved_c"]
        if not res["verified"]:
            flags.append("certificate-failed:using-achieved-c")
        method = {"lower": "spectral radius of A0A1", "upper": "ellipsoid certificate"}
        depth = {"lower": 2, "upper": cert.k}
        extras["certificate"] = res
    else:
        hi = jsr_upper_norm(1, "one")
        method = {"lower": "spectral radius of A0A1", "upper": "one-norm, length 1"}
        depth = {"lower": 2, "upper": 1}
    rep = BoundsReport.from_radii("beta", lo, hi, method=method, depth=depth,
                                  wall_time=time.perf_counter() - t0, flags=flags,
                                  extras=extras)
    # gap to the value conjectured to be exact: log2 sqrt(rho(A0 A1))
    rep.extras["conjecture_gap"] = rep.upper - rep.lower
    if not rep.contains(BETA_WINDOW[0], BETA_WINDOW[1], tol=2e-4):
        rep.flags.append("outside-reference-window")
    return rep
