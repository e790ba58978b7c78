"""Typical growth rate: bounds on the Lyapunov exponent of ``(A_0, A_1)``.

Three upper bounds of increasing quality are available: the 1-radius
``rho_1 = rho(A_0 + A_1) / 2``, geometric means of norms ``r_k`` over all
products of one length, and the convex program for ``m_k`` (solved here by
projected gradient and certified through its duality gap).  The lower bound
takes maximal per-product ratios ``r_i`` for a fixed nonnegative ``x``.

Every sum over ``2^k`` logarithms is done chunk by chunk and combined with
:func:`math.fsum`, so the result does not depend on how the work is split.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import (
    as_real,
    dominant_eigenvalue,
    perron_left_vector,
    project_simplex,
)
from .lsr import cone_ratios
from .products import applied_vectors, default_family, product_chunks

__all__ = [
    "Rho1",
    "LyapCert",
    "MkResult",
    "SigmaBounds",
    "BudgetExceeded",
    "rho1",
    "partial_sum_check",
    "rk_estimate",
    "mk_objective",
    "mk_upper",
    "lyapunov_lower",
    "sigma_bounds",
]

_LN2 = math.log(2.0)
SIGMA_WINDOW = (1.3005, 1.3098)
_EPS = np.finfo(float).eps


class BudgetExceeded(ValueError):
    pass


def _family(mats):
    if mats is None:
        return default_family()
    return tuple(as_real(a) for a in mats)


@dataclass(frozen=True)
class Rho1:
    value: float
    lower: float
    upper: float

    @property
    def eta(self) -> float:
        return 1.0 + math.log2(self.value)

    @property
    def log2(self) -> float:
        return math.log2(self.value)


def rho1(mats=None) -> Rho1:
    """Average of the family's Perron root, ``rho(sum A_i) / m``."""
    mats = _family(mats)
    e = dominant_eigenvalue(sum(mats) / len(mats))
    return Rho1(e.value, e.lower, e.upper)


def partial_sum_check(k_min: int = 10, k_max: int = 20) -> dict[int, float]:
    """``sum_{j <= n} u_j / n^eta`` at ``n = 2^k``; bounded if ``eta`` is right."""
    from .counting import dyadic_partial_sums
    eta = rho1().eta
    sums = dyadic_partial_sums(k_max)
    return {k: sums[k] / 2.0 ** (k * eta) for k in range(k_min, k_max + 1)}


# ---------------------------------------------------------------------------
# r_k


def _norms(stack: np.ndarray, norm: str) -> np.ndarray:
    if norm == "one":
        return np.abs(stack).sum(axis=-2).max(axis=-1)
    if norm == "inf":
        return np.abs(stack).sum(axis=-1).max(axis=-1)
    if norm == "two":
        return np.linalg.norm(stack, ord=2, axis=(-2, -1))
    if norm == "frobenius":
        return np.sqrt((stack * stack).sum(axis=(-2, -1)))
    raise ValueError(f"unknown norm {norm!r}")


def rk_estimate(k: int, norm: str = "one", mats=None, threads: int = 1,
                budget: int = 22) -> float:
    """``(prod ||A_w||)^(1/(k 2^k))`` over all words of length ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > budget:
        raise BudgetExceeded(f"k={k} exceeds budget {budget}")
    mats = _family(mats)
    m = len(mats)

    def part(item):
        _, stack = item
        return math.fsum(np.log(_norms(stack, norm)))

    chunks = product_chunks(mats, k)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            logs = list(ex.map(part, chunks))
    else:
        logs = [part(c) for c in chunks]
    return math.exp(math.fsum(logs) / (k * m ** k))


# ---------------------------------------------------------------------------
# m_k program


@dataclass
class MkResult:
    k: int
    sigma_upper: float       # certified: estimate + duality gap
    sigma_estimate: float    # -f(x) at the returned x
    gap: float
    m_k_root: float          # 2**sigma_estimate, estimate of m_k^(1/k)
    x_opt: np.ndarray
    iterations: int
    converged: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["x_opt"] = [float(v) for v in self.x_opt]
        return d


def _mk_data(k: int, mats):
    mats = _family(mats)
    v, _ = perron_left_vector(sum(mats) / len(mats))
    C = applied_vectors([a.T for a in mats], k, v)
    return v, C


def mk_objective(x, C: np.ndarray, k: int) -> float:
    """``-(1/(k N ln 2)) sum ln (x, c_i)``; ``+inf`` outside the domain."""
    z = C @ as_real(x)
    if np.any(z <= 0):
        return math.inf
    return -math.fsum(np.log(z)) / (k * len(C) * _LN2)


def mk_upper(k: int, tol: float = 1e-9, mats=None, max_iter: int = 100_000) -> MkResult:
    """Upper bound on ``sigma`` from ``m_k`` under the norm ``|x| = (x, v_*)``.

    Minimises ``f(x) = -(1/(k 2^k ln 2)) sum ln(x, c_i)`` with
    ``c_i = A_{d_1}^T ... A_{d_k}^T v_*`` over ``{x >= 0, (x, v_*) = 1}``.
    ``-min f = (1/k) log2 m_k`` bounds ``sigma`` from above.  Since ``f`` is
    convex, ``f(x) - min f <= g.x - min_j g_j / v_j`` (linearising at ``x``
    and minimising over the vertices ``e_j / v_j``), so
    ``sigma_upper = -f(x) + gap`` is valid for whatever ``x`` is returned.
    """
    if not 1 <= k <= 14:
        raise ValueError("k must be in 1..14")
    v, C = _mk_data(k, mats)
    scale = 1.0 / (k * len(C) * _LN2)

    def fg(x):
        z = C @ x
        if np.any(z <= 0):
            return math.inf, None
        return -math.fsum(np.log(z)) * scale, -(C.T @ (1.0 / z)) * scale

    x = np.ones_like(v) / v.sum()
    f, g = fg(x)
    step = 1.0
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        # Armijo backtracking along the projection arc
        while True:
            xn = project_simplex(x - step * g, v)
            fn, gn = fg(xn)
            if fn <= f + (g @ (xn - x)) + 0.5 / step * float((xn - x) @ (xn - x)):
                break
            step *= 0.5
            if step < 1e-300:
                break
        if gn is None:
            break
        rel = abs(f - fn) / max(abs(f), 1e-300)
        x, f, g = xn, fn, gn
        step *= 2.0
        if rel < tol:
            converged = True
            break
    gap = max(0.0, float(g @ x - np.min(g / v)))
    est = -f
    # bound the rounding in f itself as well
    upper = est + gap + 64 * _EPS * abs(est)
    return MkResult(k, upper, est, gap, 2.0 ** est, x, it, converged)


# ---------------------------------------------------------------------------
# lower bound


@dataclass
class LyapCert:
    x: np.ndarray
    s: int
    t: int
    log_sum: float          # sum of ln r_i over the 2^t products
    count: int
    zeros: int = 0

    @property
    def rho_lower(self) -> float:
        if self.zeros:
            return 0.0
        return math.exp(self.log_sum / (self.t * self.count))

    @property
    def sigma_lower(self) -> float:
        return math.log2(self.rho_lower) if self.rho_lower > 0 else -math.inf


def lyapunov_lower(x, s: int = 8, t: int = 16, mats=None, threads: int = 1) -> LyapCert:
    """Lower bound on the Lyapunov exponent from a fixed nonnegative ``x``.

    For each product ``A_i`` of length ``t`` the largest ``r_i`` with
    ``B(A_i x - r_i x) >= 0`` for all ``B`` of length ``s`` is used; the
    bound is the geometric mean of the ``r_i`` taken to the power ``1/t``.
    """
    if not 0 <= s <= t <= 16:
        raise ValueError("need 0 <= s <= t <= 16")
    mats = _family(mats)
    x = as_real(x)
    if np.any(x < 0) or not np.any(x > 0):
        raise ValueError("x must be nonnegative and nonzero")
    r = cone_ratios(x, s, t, mats, threads)
    if np.all(np.isinf(r)):
        raise ValueError("Bx = 0 for every B: the family has a common zero column")
    # the float quotient may round up; push each ratio down by a few ulps
    r = r * (1.0 - 4 * _EPS)
    zeros = int(np.sum(r <= 0))
    logs = np.log(np.where(r > 0, r, 1.0))
    return LyapCert(x / x.sum(), s, t, math.fsum(logs), len(r), zeros)


# ---------------------------------------------------------------------------
# summary


@dataclass
class SigmaBounds:
    rho1: float
    eta: float
    lower: float
    upper: float
    r_k: dict = field(default_factory=dict)
    m_k: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["r_k"] = {str(k): v for k, v in self.r_k.items()}
        d["m_k"] = {str(k): v for k, v in self.m_k.items()}
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def sigma_bounds(k: int = 12, x=None, s: int = 8, t: int = 16, rk_lengths=(8, 12, 16),
                 nest: bool = True, threads: int = 1) -> SigmaBounds:
    """Enclosure of ``sigma = log2 rho_bar`` with the supporting constants."""
    from .constants import load
    t0 = time.perf_counter()
    r1 = rho1()
    if x is None:
        x = np.array(load().x_cert, dtype=float)
    low = lyapunov_lower(x, s, t, threads=threads)
    mk = mk_upper(k)
    rks = {kk: rk_estimate(kk, threads=threads) for kk in rk_lengths}
    upper = min([mk.sigma_upper, r1.log2] + [math.log2(v) for v in rks.values()])
    out = SigmaBounds(r1.value, r1.eta, low.sigma_lower, upper, rks,
                      {k: 2.0 ** mk.sigma_upper}, [],
                      {"s": s, "t": t, "k": k, "mk_gap": mk.gap,
                       "mk_estimate": mk.sigma_estimate})
    if not out.lower <= out.upper:
        out.flags.append("empty-enclosure")
    if out.lower < SIGMA_WINDOW[0] - 1e-4 or out.upper > SIGMA_WINDOW[1] + 1e-3:
        out.flags.append("outside-reference-window")
    if not mk.sigma_upper < r1.log2:
        out.flags.append("m_k-not-below-rho1")
    if nest:
        from .jsr import beta_bounds
        from .lsr import alpha_bounds
        a = alpha_bounds()
        b = beta_bounds()
        out.extras["alpha_lower"] = a.lower
        out.extras["beta_upper"] = b.upper
        if not a.lower < out.lower:
            out.flags.append("alpha-not-below-sigma")
        if not out.upper < b.upper:
            out.flags.append("sigma-not-below-beta")
    out.extras["wall_time"] = time.perf_counter() - t0
    return out
