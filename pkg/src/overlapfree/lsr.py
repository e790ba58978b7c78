"""Lower growth rate: bounds on the lower spectral radius of ``(A_0, A_1)``.

Upper bounds are spectral radii of single products.  Lower bounds are
certificates: a nonnegative ``x`` with ``B(Ax - r x) >= 0`` for every ``B``
of length ``s`` and ``A`` of length ``t`` forces every long product to grow
at least like ``r^(1/t)`` per factor.

All ``2^t`` vectors ``Ax`` are generated from the right, one matrix-vector
product per tree edge, and each of the ``2^s`` matrices ``B`` is applied to
the whole batch at once.
"""

from __future__ import annotations

import json
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import (
    NotPositiveDefiniteError,
    as_real,
    dominant_eigenvalue_batch,
    one_norm,
    project_simplex,
)
from .products import applied_vectors, lyndon_words, default_family, product, product_stack
from .report import BoundsReport

__all__ = [
    "ConeCert",
    "SdpCert",
    "PreconditionError",
    "lsr_upper",
    "cone_evaluate",
    "cone_ratios",
    "verify_cone_certificate",
    "search_cone_certificate",
    "verify_sdp_certificate",
    "stored_cone_certificate",
    "alpha_bounds",
    "common_zero_columns",
]

ALPHA_WINDOW = (1.2690, 1.2736)
FLOAT_TOL = 1e-9
_EXACT_LIMIT = 2.0 ** 53
_EPS = np.finfo(float).eps


class PreconditionError(ValueError):
    """The family has a common zero column, so cone certificates say nothing."""


def common_zero_columns(mats) -> list[int]:
    s = sum(np.abs(as_real(a)) for a in mats)
    return [int(j) for j in np.nonzero(s.sum(axis=0) == 0)[0]]


def _family(mats):
    if mats is None:
        return default_family()
    return tuple(as_real(a) for a in mats)


def _decode(idx: int, k: int, m: int = 2) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        idx, r = divmod(idx, m)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class ConeCert:
    """``x >= 0`` with ``B(Ax - r x) >= 0`` for ``|B| = s``, ``|A| = t``, ``r = r_base^t``.

    ``r_base`` is kept as a :class:`~fractions.Fraction`; floats and strings
    are read as the decimal they print as, so ``2.41`` means ``241/100``.
    """

    x: tuple
    r_base: Fraction
    s: int
    t: int

    def __post_init__(self):
        x = tuple(self.x)
        if any(v < 0 for v in x):
            raise ValueError("x must be nonnegative")
        if not any(x):
            raise ValueError("x must be nonzero")
        object.__setattr__(self, "x", x)
        rb = self.r_base
        if not isinstance(rb, Fraction):
            rb = Fraction(str(rb))
        if rb < 0:
            raise ValueError("r must be nonnegative")
        object.__setattr__(self, "r_base", rb)
        if not 0 <= self.s <= self.t:
            raise ValueError(f"need 0 <= s <= t, got s={self.s}, t={self.t}")

    @property
    def r(self) -> Fraction:
        return self.r_base ** self.t

    @property
    def integral(self) -> bool:
        return all(float(v).is_integer() for v in self.x)

    def x_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.x])

    def normalized(self) -> np.ndarray:
        x = self.x_array()
        return x / x.sum()

    def to_json(self) -> str:
        xs = [int(v) if float(v).is_integer() else float(v) for v in self.x]
        return json.dumps({"type": "cone", "x": xs, "r_base": str(self.r_base),
                           "r_base_float": float(self.r_base), "t": self.t, "s": self.s})

    @classmethod
    def from_json(cls, text: str) -> "ConeCert":
        d = json.loads(text)
        if d.get("type") != "cone":
            raise ValueError(f"not a cone certificate: type={d.get('type')!r}")
        return cls(tuple(d["x"]), Fraction(d["r_base"]), int(d["s"]), int(d["t"]))


def stored_cone_certificate() -> ConeCert:
    from .constants import load
    return ConeCert(load().x_cert, Fraction(241, 100), 6, 16)


@dataclass(frozen=True)
class SdpCert:
    """``B^T (A^T S A - r S) B >= 0`` (semidefinite) for ``|B| = s``, ``|A| = t``."""

    S: np.ndarray
    r: float
    s: int
    t: int

    def __post_init__(self):
        S = as_real(self.S)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or not np.allclose(S, S.T):
            raise NotPositiveDefiniteError("S must be symmetric")
        if not 0 <= self.s <= self.t:
            raise ValueError("need 0 <= s <= t")
        if self.r < 0:
            raise ValueError("r must be nonnegative")


# ---------------------------------------------------------------------------
# product-based upper bound


def lsr_upper(depth: int, mats=None, return_runner_up: bool = False):
    """Smallest ``rho(A_w)^(1/|w|)`` over Lyndon words with ``|w| <= depth``.

    Each spectral radius is taken from the upper end of its enclosure.
    Returns ``(value, witness)``; with ``return_runner_up`` also the best
    value over the remaining words (Lyndon words are primitive, so none of
    them is a power or rotation of the witness).
    """
    if not 1 <= depth <= 14:
        raise ValueError("depth must be in 1..14")
    mats = _family(mats)
    words = list(lyndon_words(depth, len(mats)))
    vals = np.empty(len(words))
    for k in range(1, depth + 1):
        sel = [i for i, w in enumerate(words) if len(w) == k]
        if not sel:
            continue
        stk = np.array([product(mats, words[i]) for i in sel])
        _, hi, _, _ = dominant_eigenvalue_batch(stk)
        vals[sel] = hi ** (1.0 / k)
    i = int(np.argmin(vals))
    best, witness = float(vals[i]), words[i]
    if not return_runner_up:
        return best, witness
    rest = np.delete(vals, i)
    return best, witness, float(rest.min()) if rest.size else math.inf


# ---------------------------------------------------------------------------
# cone certificates


def cone_evaluate(mats, x: np.ndarray, s: int, t: int, visit, threads: int = 1) -> None:
    """Call ``visit(b_index, BY, Bx)`` for every ``B`` of length ``s``.

    ``BY`` has one row ``B A x`` per ``A`` of length ``t`` (index order of
    :func:`products.product_stack`) and ``Bx`` is ``B x``.  With ``threads``
    > 1 the calls run concurrently, so ``visit`` must be thread safe.
    """
    Y = applied_vectors(mats, t, x)
    Bs = product_stack(mats, s)
    BX = Bs @ x

    def one(b):
        visit(b, Y @ Bs[b].T, BX[b])

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            list(ex.map(one, range(len(Bs))))
    else:
        for b in range(len(Bs)):
            one(b)


def cone_ratios(x, s: int, t: int, mats=None, threads: int = 1) -> np.ndarray:
    """Largest ``r_A`` with ``B(Ax - r_A x) >= 0`` for all ``B``, per ``A``.

    Coordinates where ``Bx = 0`` impose nothing (``BAx >= 0`` holds anyway
    by nonnegativity).  Returns an array of length ``2^t``.
    """
    mats = _family(mats)
    x = as_real(x)
    out = np.full(2 ** t, np.inf)
    parts = []

    def visit(b, BY, bx):
        pos = bx > 0
        if pos.any():
            parts.append((BY[:, pos] / bx[pos]).min(axis=1))

    cone_evaluate(mats, x, s, t, visit, threads)
    for p in parts:
        np.minimum(out, p, out=out)
    return out


def _exact_ok(by, bx, num, den) -> bool:
    return all(den * int(a) >= num * int(b) for a, b in zip(by, bx))


def verify_cone_certificate(cert: ConeCert, mats=None, threads: int = 1,
                            tol: float = FLOAT_TOL) -> dict:
    """Check ``B(Ax - r x) >= 0`` over all ``B`` of length ``s``, ``A`` of length ``t``.

    For integral ``x`` every ``BAx`` and ``Bx`` is an integer.  As long as
    those stay below ``2^53`` the float products are exact, so each
    inequality is decided in floats whenever it clears the rounding error of
    ``r * Bx`` and in exact rational arithmetic otherwise.  Non-integral
    ``x`` is checked against ``-tol * ||B||_1 * ||Ax||_1``.
    """
    mats = _family(mats)
    zc = common_zero_columns(mats)
    if zc:
        raise PreconditionError(f"common zero column(s) {zc}; suppress them first")
    x = cert.x_array()
    if x.shape[0] != mats[0].shape[0]:
        raise ValueError(f"x has dimension {x.shape[0]}, matrices {mats[0].shape[0]}")
    t0 = time.perf_counter()
    r_exact = cert.r
    r = float(r_exact)
    exact = cert.integral and all(float(v).is_integer() for a in mats for v in a.ravel())
    if exact:
        bmax = max(float(np.abs(B).sum(axis=1).max()) for B in product_stack(mats, cert.s))
        ymax = float(np.abs(applied_vectors(mats, cert.t, x)).max())
        exact = bmax * max(ymax, float(x.max())) < _EXACT_LIMIT
    num, den = r_exact.numerator, r_exact.denominator
    bnorms = np.abs(product_stack(mats, cert.s)).sum(axis=1).max(axis=1)

    state = {"ok": True, "worst": math.inf, "undecided": 0, "where": None}
    lock = threading.Lock()

    def visit(b, BY, bx):
        with lock:
            _check(b, BY, bx)

    def _check(b, BY, bx):
        rb = r * bx
        diff = BY - rb
        scale = np.abs(BY) + np.abs(rb)
        # entries with r Bx = 0 hold trivially and are left out of the margin
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(rb > 0, diff / scale, np.inf)
        i = np.unravel_index(np.argmin(rel), rel.shape)
        if rel[i] < state["worst"]:
            state["worst"], state["where"] = float(rel[i]), (b, int(i[0]), int(i[1]))
        if exact:
            err = 4 * _EPS * np.abs(rb)
            bad = diff < -err
            unsure = (np.abs(diff) <= err) & (rb != 0)
            if bad.any():
                state["ok"] = False
            elif unsure.any():
                rows, cols = np.nonzero(unsure)
                state["undecided"] += len(rows)
                if not _exact_ok(BY[rows, cols], np.broadcast_to(bx, BY.shape)[rows, cols],
                                 num, den):
                    state["ok"] = False
        else:
            floor = -tol * bnorms[b] * np.abs(BY).sum(axis=1, keepdims=True)
            if np.any(diff < floor):
                state["ok"] = False

    cone_evaluate(mats, x, cert.s, cert.t, visit, threads)
    out = {
        "verified": state["ok"],
        "mode": "exact" if exact else "float",
        "implied_alpha": math.log2(float(cert.r_base)) if state["ok"] and cert.r_base > 0 else None,
        "implied_rho": float(cert.r_base) if state["ok"] else None,
        "r": r,
        "r_base": float(cert.r_base),
        "worst_relative_margin": state["worst"],
        "exact_fallbacks": state["undecided"],
        "seconds": time.perf_counter() - t0,
    }
    if state["where"] is not None and math.isfinite(state["worst"]):
        b, a, j = state["where"]
        out["worst_at"] = {"B": "".join(map(str, _decode(b, cert.s, len(mats)))),
                           "A": "".join(map(str, _decode(a, cert.t, len(mats)))),
                           "coord": j}
    return out


def _rows_for(mats, r: float, s: int, t: int, triples) -> np.ndarray:
    """Constraint rows ``e_j^T (B A - r B)`` for ``(b, a, j)`` index triples."""
    m = len(mats)
    rows = []
    for b, a, j in triples:
        B = product(mats, _decode(b, s, m))
        A = product(mats, _decode(a, t, m))
        rows.append((B @ A - r * B)[j])
    return np.array(rows)


def search_cone_certificate(r_base, s: int, t: int, budget: int = 50, mats=None,
                            x0=None, add_per_round: int = 200, sweeps: int = 200,
                            margin: float = 1e-6, threads: int = 1):
    """Look for a :class:`ConeCert` at ``r = r_base^t`` by constraint generation.

    Each round solves the current relaxation (the active rows plus the
    simplex) by cyclic projection onto violated half-spaces followed by
    projection onto the simplex, then scans every constraint and adds the
    ``add_per_round`` most violated rows.  Returns a certificate that has
    passed :func:`verify_cone_certificate`, or ``None`` once ``budget``
    rounds are spent (which proves nothing about feasibility).
    """
    if not 0 <= s <= t <= 16:
        raise ValueError("need 0 <= s <= t <= 16")
    mats = _family(mats)
    d = mats[0].shape[0]
    x = np.full(d, 1.0 / d) if x0 is None else project_simplex(as_real(x0) / np.sum(x0))
    r = float(Fraction(str(r_base)) ** t)
    active = np.zeros((0, d))
    seen = set()
    for _ in range(budget):
        if x0 is not None and _ == 0:
            cand = ConeCert(tuple(as_real(x0)), r_base, s, t)
        else:
            cand = ConeCert(tuple(float(v) for v in x), r_base, s, t)
        if verify_cone_certificate(cand, mats, threads)["verified"]:
            return cand
        # scan: most violated (relative) constraints
        found = []

        def visit(b, BY, bx):
            diff = BY - r * bx
            scale = np.abs(BY) + r * np.abs(bx) + 1e-300
            rel = diff / scale
            flat = np.argsort(rel, axis=None)[:add_per_round]
            for f in flat:
                a, j = np.unravel_index(f, rel.shape)
                if rel[a, j] < margin:
                    found.append((float(rel[a, j]), b, int(a), int(j)))

        cone_evaluate(mats, x, s, t, visit)
        found.sort()
        new = [(b, a, j) for _, b, a, j in found if (b, a, j) not in seen][:add_per_round]
        if not new:
            break
        seen.update(new)
        rows = _rows_for(mats, r, s, t, new)
        nrm = np.linalg.norm(rows, axis=1)
        rows = rows[nrm > 0] / nrm[nrm > 0, None]
        active = np.vstack([active, rows])
        for _sweep in range(sweeps):
            moved = False
            for a in active[np.argsort(active @ x)]:
                v = a @ x
                if v < margin:
                    x = x + (margin - v) * a
                    moved = True
            x = project_simplex(x)
            if not moved or np.all(active @ x >= 0):
                break
    return None


# ---------------------------------------------------------------------------
# semidefinite certificates


def verify_sdp_certificate(cert: SdpCert, mats=None, tol: float = 1e-10) -> dict:
    """Check ``B^T (A^T S A - r S) B`` is positive semidefinite for all pairs.

    Smallest eigenvalues are compared against ``-tol`` times the size of
    the two terms.  ``implied_bound = r^(1/(2t))`` bounds the lower spectral
    radius from below when verified.
    """
    S = as_real(cert.S)
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("S is not positive definite") from exc
    mats = _family(mats)
    As = product_stack(mats, cert.t)
    Bs = product_stack(mats, cert.s)
    core = np.transpose(As, (0, 2, 1)) @ S @ As - cert.r * S
    worst = math.inf
    ok = True
    for B in Bs:
        M = B.T @ core @ B
        M = 0.5 * (M + np.transpose(M, (0, 2, 1)))
        lam = np.linalg.eigvalsh(M)[:, 0]
        scale = one_norm(B) ** 2 * (np.abs(As).sum(axis=1).max(axis=1) ** 2 + cert.r) \
            * np.abs(S).sum(axis=0).max()
        rel = lam / scale
        worst = min(worst, float(rel.min()))
        if np.any(rel < -tol):
            ok = False
    bound = cert.r ** (1.0 / (2 * cert.t)) if cert.t else None
    return {"verified": ok, "implied_bound": bound if ok else None,
            "worst_relative_eigenvalue": worst}


# ---------------------------------------------------------------------------
# summary


def alpha_bounds(cert: ConeCert | bool | None = True, depth: int = 11,
                 threads: int = 1) -> BoundsReport:
    """Enclosure of ``alpha = log2 rho_check`` from a cone certificate and products."""
    t0 = time.perf_counter()
    hi, witness = lsr_upper(depth)
    flags, extras = [], {"upper_witness": "".join(map(str, witness))}
    if cert is True:
        cert = stored_cone_certificate()
    if cert:
        res = verify_cone_certificate(cert, threads=threads)
        extras["certificate"] = res
        if res["verified"]:
            lo = float(cert.r_base)
        else:
            lo = 0.0
            flags.append("certificate-failed")
        method = {"lower": "cone certificate", "upper": "spectral radius of products"}
        dep = {"lower": {"s": cert.s, "t": cert.t}, "upper": depth}
    else:
        lo = 0.0
        flags.append("no-lower-certificate")
        method = {"lower": None, "upper": "spectral radius of products"}
        dep = {"upper": depth}
    rep = BoundsReport.from_radii("alpha", lo, hi, method=method, depth=dep,
                                  wall_time=time.perf_counter() - t0, flags=flags,
                                  extras=extras)
    if not rep.contains(ALPHA_WINDOW[0], ALPHA_WINDOW[1], tol=2e-4):
        rep.flags.append("outside-reference-window")
    return rep
