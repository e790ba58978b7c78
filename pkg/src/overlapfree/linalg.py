"""Dense kernels shared by the counting and spectral modules.

Two worlds live here.  :class:`ExactMatrix` / :class:`ExactVector` hold
arbitrary-precision integers and are used wherever a count must be exact.
Spectral work is done on plain ``float64`` numpy arrays; the helpers below
return Collatz-Wielandt enclosures rather than bare eigenvalue estimates so
that callers can pick the certified direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "NotPositiveDefiniteError",
    "ReducibleError",
    "ExactMatrix",
    "ExactVector",
    "SpectralEnclosure",
    "mat_mul",
    "mat_vec",
    "as_real",
    "dominant_eigenvalue",
    "dominant_eigenvalue_batch",
    "perron_left_vector",
    "is_irreducible",
    "one_norm",
    "ellipsoid_norm",
    "ellipsoid_transform",
    "is_negative_definite",
    "project_simplex",
]

DEFAULT_EIG_TOL = 1e-10
DEFAULT_MARGIN = 1e-6
_SUPPORT_CUT = 1e-13


class DimensionError(ValueError):
    """Raised when operand shapes do not conform."""


class NotPositiveDefiniteError(ValueError):
    """Raised when a matrix that must be positive definite is not."""


class ReducibleError(ArithmeticError):
    """Raised when a Perron iterate fails to become strictly positive."""


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "ExactMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def block(cls, grid: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a block matrix from a grid of conforming blocks."""
        out = []
        for brow in grid:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise DimensionError("block row heights differ")
            for i in range(h):
                out.append([x for b in brow for x in b.row(i)])
        return cls.from_rows(out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.row(i)[c0:c1] for i in range(r0, r1))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [self[i, j] for i in range(self.rows)] for j in range(self.cols)
        )

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.rows, self.cols,
                           tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return mat_mul(self, other)
        if isinstance(other, ExactVector):
            return mat_vec(self, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_array(self, dtype=np.float64) -> np.ndarray:
        return np.array(self.entries, dtype=dtype).reshape(self.rows, self.cols)


@dataclass(frozen=True)
class ExactVector:
    entries: tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> "ExactVector":
        return cls(tuple(int(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def dot(self, other: "ExactVector") -> int:
        if self.dim != other.dim:
            raise DimensionError(f"dot of dims {self.dim} and {other.dim}")
        return sum(a * b for a, b in zip(self.entries, other.entries))

    def head(self, n: int) -> "ExactVector":
        return ExactVector(self.entries[:n])

    def to_array(self, dtype=np.float64) -> np.ndarray:
        return np.array(self.entries, dtype=dtype)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bcols = [b.entries[j::b.cols] for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        out.extend(sum(x * y for x, y in zip(r, c)) for c in bcols)
    return ExactMatrix(a.rows, b.cols, tuple(out))


def mat_vec(a: ExactMatrix, v: ExactVector) -> ExactVector:
    if a.cols != v.dim:
        raise DimensionError(f"cannot apply {a.shape} matrix to dim {v.dim}")
    e = v.entries
    return ExactVector(tuple(sum(x * y for x, y in zip(a.row(i), e))
                             for i in range(a.rows)))


def as_real(a) -> np.ndarray:
    """Convert to a finite float64 array, rejecting NaN/Inf."""
    if isinstance(a, (ExactMatrix, ExactVector)):
        a = a.to_array()
    arr = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("real matrix/vector entries must be finite")
    return arr


@dataclass(frozen=True)
class SpectralEnclosure:
    """Certified interval ``[lower, upper]`` containing a Perron root."""

    lower: float
    upper: float
    iterations: int
    converged: bool = True

    @property
    def value(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def root(self, k: int) -> "SpectralEnclosure":
        """Enclosure of ``rho**(1/k)``."""
        return SpectralEnclosure(self.lower ** (1.0 / k), self.upper ** (1.0 / k),
                                 self.iterations, self.converged)


def _check_square_nonneg(a: np.ndarray) -> None:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"square matrix required, got shape {a.shape}")
    if np.any(a < 0):
        raise ValueError("matrix must be entrywise nonnegative")


def dominant_eigenvalue_batch(mats, tol: float = DEFAULT_EIG_TOL,
                              max_iter: int = 10_000, check_every: int = 16):
    """Vectorised :func:`dominant_eigenvalue` over a stack ``(N, d, d)``.

    Returns ``(lower, upper, iterations, converged)`` arrays.  Each matrix is
    iterated with the shift ``A + sI`` from the all-ones vector, where ``s``
    is a power of two near the largest entry (so scaling ``A`` by two scales
    every iterate ratio by exactly two).  Collatz-Wielandt ratios of ``A``
    itself are read off the iterate.  The enclosure kept for each matrix is
    the narrowest one seen, so a reducible input still gets a valid (if
    wide) interval.
    """
    a = as_real(mats)
    if a.ndim == 2:
        a = a[None]
    _check_square_nonneg(a)
    n, d, _ = a.shape
    amax = a.reshape(n, -1).max(axis=1)
    shift = np.where(amax > 0, np.exp2(np.floor(np.log2(np.where(amax > 0, amax, 1.0)))), 1.0)
    v = np.ones((n, d))
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    iters = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    it = 0
    while active.size and it < max_iter:
        av = np.einsum("nij,nj->ni", a[active], v[active])
        it += 1
        if it % check_every == 1 or check_every == 1:
            vv = v[active]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = av / vv
            pos = np.all(vv > 0, axis=1)
            hi = np.where(pos, ratio.max(axis=1, initial=-np.inf), np.inf)
            # A v' >= mu v' for any nonnegative v' != 0 gives rho >= mu, so
            # negligible coordinates are dropped before taking the minimum
            keep = vv >= _SUPPORT_CUT * vv.max(axis=1, keepdims=True)
            vt = np.where(keep, vv, 0.0)
            avt = np.einsum("nij,nj->ni", a[active], vt)
            with np.errstate(divide="ignore", invalid="ignore"):
                lo = np.where(keep, avt / vt, np.inf).min(axis=1)
            lo = np.where(np.isfinite(lo), lo, 0.0)
            idx = active
            lower[idx] = np.maximum(lower[idx], lo)
            upper[idx] = np.minimum(upper[idx], hi)
            iters[idx] = it
            done = upper[idx] - lower[idx] <= tol * upper[idx]
            # an all-zero matrix: rho = 0 exactly
            done |= upper[idx] == 0
            active = active[~done]
            if not active.size:
                break
            av = av[~done]
        nv = av + shift[active, None] * v[active]
        nv /= nv.max(axis=1, keepdims=True)
        v[active] = nv
    converged = upper - lower <= tol * upper
    converged |= upper == 0
    lower = np.minimum(lower, upper)
    return lower, upper, iters, converged


def dominant_eigenvalue(a, tol: float = DEFAULT_EIG_TOL,
                        max_iter: int = 10_000) -> SpectralEnclosure:
    """Perron root enclosure of a nonnegative square matrix.

    >>> dominant_eigenvalue(np.eye(3)).upper
    1.0
    """
    lo, hi, it, ok = dominant_eigenvalue_batch(np.asarray(as_real(a))[None], tol, max_iter)
    return SpectralEnclosure(float(lo[0]), float(hi[0]), int(it[0]), bool(ok[0]))


def is_irreducible(a) -> bool:
    """Boolean reachability test: ``(I + A)^(d-1)`` has no zero entry."""
    r = (as_real(a) != 0) | np.eye(a.shape[0], dtype=bool)
    for _ in range(max(1, int(np.ceil(np.log2(max(a.shape[0] - 1, 1))))) + 1):
        r = (r.astype(np.int64) @ r.astype(np.int64)) > 0
    return bool(r.all())


def perron_left_vector(a, tol: float = DEFAULT_EIG_TOL, max_iter: int = 10_000):
    """Left Perron vector ``v`` of ``a`` (``a.T @ v = rho v``), ``sum(v) = 1``.

    Returns ``(v, rho)``.  Raises :class:`ReducibleError` if the iterate does
    not become strictly positive.
    """
    at = as_real(a).T
    _check_square_nonneg(at)
    d = at.shape[0]
    shifted = at + np.eye(d)
    v = np.full(d, 1.0 / d)
    rho = 0.0
    for _ in range(max_iter):
        w = shifted @ v
        w /= w.sum()
        rho = float((at @ w).sum())
        if np.abs(at @ w - rho * w).sum() <= tol * max(rho, 1.0) and np.all(w > 0):
            v = w
            break
        v = w
    if not np.all(v > 0) or not is_irreducible(at):
        raise ReducibleError("matrix is reducible; its Perron vector need not be positive")
    return v, rho


def one_norm(a) -> float:
    """Induced 1-norm: maximum absolute column sum."""
    arr = as_real(a)
    return float(np.abs(arr).sum(axis=-2).max(axis=-1))


def _cholesky(p: np.ndarray) -> np.ndarray:
    p = as_real(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionError("P must be square")
    if not np.allclose(p, p.T, rtol=1e-12, atol=0):
        raise NotPositiveDefiniteError("P is not symmetric")
    try:
        return np.linalg.cholesky(0.5 * (p + p.T))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("P is not positive definite") from exc


def ellipsoid_transform(p):
    """Return ``(T, T_inv)`` with ``|x|_P = |T x|_2`` (``T = L^T``, ``P = L L^T``).

    Conjugating by ``T`` turns ``||A||_P`` into the spectral norm of
    ``T A T_inv``, and products conjugate factor by factor.
    """
    L = _cholesky(p)
    t = L.T
    return t, np.linalg.inv(t)


def ellipsoid_norm(a, p) -> float:
    """Norm of ``a`` induced by ``|x|_P = sqrt(x^T P x)``; ``||A||_P^2 = rho(P^-1 A^T P A)``."""
    t, ti = ellipsoid_transform(p)
    return float(np.linalg.norm(t @ as_real(a) @ ti, 2))


def is_negative_definite(m, margin: float = DEFAULT_MARGIN) -> bool:
    """True iff ``m + margin * ||m||_1 * I`` is negative definite (Cholesky test)."""
    m = as_real(m)
    m = 0.5 * (m + m.T)
    shift = margin * one_norm(m)
    try:
        np.linalg.cholesky(-m - shift * np.eye(m.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True


def project_simplex(y, w=None) -> np.ndarray:
    """Euclidean projection of ``y`` onto ``{x >= 0, (w, x) = 1}`` (``w > 0``).

    The solution is ``max(y - tau * w, 0)``; ``tau`` is located among the
    breakpoints ``y_i / w_i`` after one sort.
    """
    y = as_real(y)
    w = np.ones_like(y) if w is None else as_real(w)
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    order = np.argsort(-(y / w))
    ys, ws = y[order], w[order]
    # with the first j coordinates active: tau_j = (sum w y - 1) / sum w^2
    num = np.cumsum(ws * ys) - 1.0
    den = np.cumsum(ws * ws)
    tau = num / den
    ok = ys - tau * ws > 0
    j = np.nonzero(ok)[0][-1]
    return np.maximum(y - tau[j] * w, 0.0)
