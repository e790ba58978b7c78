"""Numerical data for the overlap-free counting matrices, and its self-checks.

The blocks D1, B1, C1 (10x10), B2, C2 (10x5) and C4 (5x5) are assembled into
the 30x30 matrices F0, F1 and the 20x20 matrices A0, A1 with::

    F0 = | C1  0   C2  0  |     F1 = | D1  B1  0   B2 |     A0 = | C1  0  |
         | D1  B1  0   B2 |          | 0   C1  0   C2 |          | D1  B1 |
         | 0   0   C4  0  |          | 0   0   0   0  |
         | 0   0   0   0  |          | 0   0   0   C4 |     A1 = | D1  B1 |
                                                                 | 0   C1 |

The initial vectors y3..y15 are stored in block layout, with the
coordinates grouped (10, 5, 10, 5) instead of F's (10, 10, 5, 5) grouping, so
:func:`load` permutes them into F's coordinate order.  Both the transcription
and that permutation are checked against brute-force counts in the tests.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .linalg import ExactMatrix, ExactVector, mat_mul

__all__ = [
    "EmbeddedData",
    "ConeParams",
    "Report",
    "ValidationError",
    "load",
    "validate_structure",
    "validate_cone",
    "validate_zm_in_S",
    "in_exempt_set",
    "dump",
    "DATA_SHA256",
    "ZP",
    "ZQ",
]

_D1 = """
0 0 0 0 0 0 0 1 2 1
0 0 1 1 0 1 1 0 0 0
0 0 0 0 0 0 0 1 1 0
0 0 0 0 0 0 0 0 0 0
1 2 0 0 1 0 0 0 0 0
0 0 1 0 0 1 0 0 0 0
0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 1 0 0
0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
"""

_B1 = """
0 0 0 0 0 0 0 1 2 1
0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 1 1 0 0 0
0 0 1 1 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
0 0 0 0 1 0 0 0 0 0
0 1 0 0 0 0 0 0 0 0
1 0 0 0 0 0 0 0 0 0
"""

_C1 = """
0 0 0 0 0 0 0 2 4 2
0 0 1 1 0 1 1 0 0 0
0 0 0 0 0 1 1 1 1 0
0 0 1 1 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
0 1 0 0 1 0 0 0 0 0
1 1 0 0 0 0 0 0 0 0
0 0 0 0 0 2 0 0 0 0
0 0 1 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0
"""

_B2 = """
0 0 0 0 0
0 0 0 0 0
0 0 0 1 1
0 1 1 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
1 0 0 0 0
0 0 0 0 0
"""

_C2 = """
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 2 0
0 1 0 0 0
0 0 0 0 0
"""

_C4 = """
0 1 1 1 1
0 0 0 1 1
0 1 1 0 0
1 0 0 0 0
1 0 0 0 0
"""

_P1 = """
 31.3   7.5   2.3   3.3  -0.4  -0.3   0.3   0.4   3.7   0.3
  7.5  57.7    10   6.3  18.4    35  16.3  -5.8  13.8     5
  2.3    10  59.9  11.3   0.4  29.2   4.2  10.1   8.2   0.8
  3.3   6.3  11.3  48.5   4.6  13.5  10.8     2   6.9     1
 -0.4  18.4   0.4   4.6  36.4  23.5  22.6   4.4   8.9  -1.2
 -0.3    35  29.2  13.5  23.5 105.9  38.4   9.5  33.7   6.1
  0.3  16.3   4.2  10.8  22.6  38.4    59   2.7  17.4   9.2
  0.4  -5.8  10.1     2   4.4   9.5   2.7  38.6  14.8  -1.7
  3.7  13.8   8.2   6.9   8.9  33.7  17.4  14.8  57.5   8.6
  0.3     5   0.8     1  -1.2   6.1   9.2  -1.7   8.6  42.3
"""

_P2 = """
-10.4  -1.7 -18.1  -0.4  -5.8  -5.1  -4.9  -0.8  -2.7  -0.9
-11.1 -22.4  -8.2 -14.7  -9.9 -30.3 -16.7 -11.3 -16.9  -6.6
 -2.2 -16.4 -15.8    -5  -8.5  -7.2  -5.4 -18.5  -3.5  -3.4
 -0.2 -13.6  -5.2    -9 -10.7 -14.6  -9.2  -1.6 -11.3  -1.1
 -4.6   -17   -13  -9.1  -0.6 -11.2 -23.9    -7 -12.1   0.3
 -5.9 -26.4 -27.4 -17.4   -31 -37.6   -28  -4.4 -27.3  -7.4
 -1.4 -19.3 -11.6 -10.8 -22.3 -17.9 -11.7 -11.3   -12  -9.8
 -6.3   2.1   1.7  -3.4   3.2  -7.6   0.2  -5.2  -3.1  -1.4
 -7.4 -15.9  -4.7  -6.7 -12.2 -17.3 -11.6  -5.3  -6.8  -1.6
  1.3  -5.7  -3.6  -3.2  -0.4  -6.1    -9  -1.4  -6.9   0.4
"""

_P4 = """
 29.1   8.3  -1.6   4.8  -1.3  -4.4   0.6   1.7   7.5   1.1
  8.3  47.3  13.6   2.8  11.7  19.8  17.4   0.6    10   3.7
 -1.6  13.6  46.6  10.4   6.5  24.9  11.8   6.5  12.5   1.4
  4.8   2.8  10.4  47.6   5.1     8   7.6   5.1   3.7   1.8
 -1.3  11.7   6.5   5.1  32.8  19.5  19.4   7.6   6.7  -0.2
 -4.4  19.8  24.9     8  19.5  64.8  16.2  11.4  13.8   6.8
  0.6  17.4  11.8   7.6  19.4  16.2  56.7   7.6  12.2   6.5
  1.7   0.6   6.5   5.1   7.6  11.4   7.6  38.7  11.2    -1
  7.5    10  12.5   3.7   6.7  13.8  12.2  11.2  55.6   4.2
  1.1   3.7   1.4   1.8  -0.2   6.8   6.5    -1   4.2  43.8
"""

_Y_PRINTED = {
    3: (2, 0, 2, 0, 2, 0, 0, 0, 0, 2, 0, 2, 2, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    4: (0, 2, 2, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 2, 2, 2, 0, 2, 0, 2, 0, 0, 0, 0, 0),
    5: (2, 2, 0, 2, 2, 2, 0, 2, 0, 2, 0, 0, 0, 0, 0, 4, 2, 0, 2, 0, 2, 2, 0, 2, 0, 0, 2, 0, 0, 0),
    6: (4, 2, 0, 2, 0, 2, 2, 0, 2, 0, 0, 2, 0, 0, 0, 4, 2, 2, 2, 4, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0),
    7: (4, 2, 2, 2, 4, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 4, 4, 4, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 2),
    8: (4, 4, 4, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 2, 6, 4, 4, 2, 4, 2, 0, 4, 2, 2, 0, 0, 0, 0, 0),
    9: (6, 4, 4, 2, 4, 2, 0, 4, 2, 2, 0, 0, 0, 0, 0, 8, 4, 4, 2, 0, 4, 4, 4, 0, 0, 0, 0, 0, 0, 0),
    10: (8, 4, 4, 2, 0, 4, 4, 4, 0, 0, 0, 0, 0, 0, 0, 8, 4, 6, 4, 8, 2, 0, 4, 2, 4, 0, 0, 0, 0, 0),
    11: (8, 4, 6, 4, 8, 2, 0, 4, 2, 4, 0, 0, 0, 0, 0, 8, 6, 6, 2, 0, 2, 6, 4, 2, 0, 2, 0, 2, 2, 0),
    12: (8, 6, 6, 2, 0, 2, 6, 4, 2, 0, 2, 0, 2, 2, 0, 10, 6, 4, 4, 8, 2, 0, 4, 2, 4, 0, 0, 0, 0, 0),
    13: (10, 6, 4, 4, 8, 2, 0, 4, 2, 4, 0, 0, 0, 0, 0, 12, 6, 4, 4, 0, 6, 6, 4, 2, 0, 0, 0, 0, 0, 0),
    14: (12, 6, 4, 4, 0, 6, 6, 4, 2, 0, 0, 0, 0, 0, 0, 10, 6, 8, 6, 12, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0),
    15: (10, 6, 8, 6, 12, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 8, 10, 6, 6, 0, 4, 8, 4, 4, 0, 2, 2, 0, 0, 0),
}

_X_CERT = (153, 0, 60, 0, 50, 56, 99, 0, 58, 1, 157, 81, 0, 113, 0, 72, 0, 99, 0, 0)

# block layout (10, 5, 10, 5) -> F order (10, 10, 5, 5)
Y_PERMUTATION = tuple(range(10)) + tuple(range(15, 25)) + tuple(range(10, 15)) + tuple(range(25, 30))

W = (1, 2, 2, 2, 1, 2, 2, 1, 2, 1) + (0,) * 20

# 1-based coordinates allowed to vanish in the sets P and Q
ZP = (5, 10, 17)
ZQ = (7, 15, 20)


def _int_block(text: str) -> ExactMatrix:
    return ExactMatrix.from_rows([int(x) for x in line.split()]
                                 for line in text.strip().splitlines())


def _real_block(text: str) -> np.ndarray:
    return np.array([[float(x) for x in line.split()]
                     for line in text.strip().splitlines()])


def _canonical_payload() -> bytes:
    raw = {
        "D1": _D1, "B1": _B1, "C1": _C1, "B2": _B2, "C2": _C2, "C4": _C4,
        "P1": _P1, "P2": _P2, "P4": _P4,
        "y": {str(k): list(v) for k, v in sorted(_Y_PRINTED.items())},
        "w": list(W), "x": list(_X_CERT),
    }
    norm = {k: (" ".join(v.split()) if isinstance(v, str) else v) for k, v in raw.items()}
    return json.dumps(norm, sort_keys=True).encode()


DATA_SHA256 = "e775108f2c7005546c5a5c3560c3d0be2a927ae13f8c2862b946107135fe9566"


def data_checksum() -> str:
    return hashlib.sha256(_canonical_payload()).hexdigest()


@dataclass(frozen=True)
class EmbeddedData:
    D1: ExactMatrix
    B1: ExactMatrix
    C1: ExactMatrix
    B2: ExactMatrix
    C2: ExactMatrix
    C4: ExactMatrix
    F0: ExactMatrix
    F1: ExactMatrix
    A0: ExactMatrix
    A1: ExactMatrix
    w: ExactVector
    y: dict = field(repr=False)          # m -> ExactVector (F order), 3 <= m <= 15
    P_cert: np.ndarray = field(repr=False)
    x_cert: tuple = ()

    @cached_property
    def A(self) -> tuple[np.ndarray, np.ndarray]:
        """Float copies ``(A0, A1)`` for spectral work (read-only)."""
        out = []
        for m in (self.A0, self.A1):
            arr = m.to_array()
            arr.flags.writeable = False
            out.append(arr)
        return tuple(out)

    @property
    def F(self) -> tuple[ExactMatrix, ExactMatrix]:
        return (self.F0, self.F1)


def assemble(D1, B1, C1, B2, C2, C4) -> dict:
    Z = ExactMatrix.zeros
    F0 = ExactMatrix.block([
        [C1, Z(10, 10), C2, Z(10, 5)],
        [D1, B1, Z(10, 5), B2],
        [Z(5, 10), Z(5, 10), C4, Z(5, 5)],
        [Z(5, 10), Z(5, 10), Z(5, 5), Z(5, 5)],
    ])
    F1 = ExactMatrix.block([
        [D1, B1, Z(10, 5), B2],
        [Z(10, 10), C1, Z(10, 5), C2],
        [Z(5, 10), Z(5, 10), Z(5, 5), Z(5, 5)],
        [Z(5, 10), Z(5, 10), Z(5, 5), C4],
    ])
    A0 = ExactMatrix.block([[C1, Z(10, 10)], [D1, B1]])
    A1 = ExactMatrix.block([[D1, B1], [Z(10, 10), C1]])
    return dict(F0=F0, F1=F1, A0=A0, A1=A1)


@lru_cache(maxsize=None)
def load() -> EmbeddedData:
    digest = data_checksum()
    if digest != DATA_SHA256:
        raise RuntimeError(f"embedded data checksum mismatch: {digest}")
    blocks = {name: _int_block(text) for name, text in
              [("D1", _D1), ("B1", _B1), ("C1", _C1), ("B2", _B2), ("C2", _C2), ("C4", _C4)]}
    mats = assemble(**blocks)
    p1, p2, p4 = _real_block(_P1), _real_block(_P2), _real_block(_P4)
    P = np.block([[p1, p2], [p2.T, p4]])
    P.flags.writeable = False
    y = {m: ExactVector(tuple(v[i] for i in Y_PERMUTATION)) for m, v in _Y_PRINTED.items()}
    d = EmbeddedData(**blocks, **mats, w=ExactVector(W), y=y, P_cert=P, x_cert=_X_CERT)
    validate_structure(d)
    return d


# ---------------------------------------------------------------------------
# validation

@dataclass
class Report:
    name: str
    passed: bool = True
    details: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        self.details.append(msg)

    def raise_if_failed(self) -> "Report":
        if not self.passed:
            raise ValidationError(self)
        return self

    def as_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, "details": list(self.details)}


class ValidationError(Exception):
    def __init__(self, report: Report):
        super().__init__(f"{report.name} failed: " + "; ".join(report.details))
        self.report = report


def _check(name: str, reports: list, ok: bool, msg: str = "") -> None:
    r = Report(name)
    if not ok:
        r.fail(msg or name)
    reports.append(r)


def validate_structure(d: EmbeddedData, strict: bool = True) -> list[Report]:
    """Structural checks: R0 R1 = 0, (A0+A1)^5 > 0, no common zero column, block embedding."""
    reports: list[Report] = []
    R0 = d.F0.submatrix(20, 30, 20, 30)
    R1 = d.F1.submatrix(20, 30, 20, 30)
    _check("R0R1=0", reports, mat_mul(R0, R1).is_zero(), "R0 R1 has a nonzero entry")

    S = d.A0 + d.A1
    S5 = S
    for _ in range(4):
        S5 = mat_mul(S5, S)
    zeros = [(i + 1, j + 1) for i in range(20) for j in range(20) if S5[i, j] == 0]
    _check("(A0+A1)^5>0", reports, not zeros, f"zero entries at {zeros[:5]}")

    common = [j + 1 for j in range(20)
              if all(d.A0[i, j] == 0 for i in range(20)) and all(d.A1[i, j] == 0 for i in range(20))]
    _check("no-common-zero-column", reports, not common, f"common zero columns {common}")

    emb = (d.F0.submatrix(0, 20, 0, 20) == d.A0 and d.F1.submatrix(0, 20, 0, 20) == d.A1)
    _check("block-embedding", reports, emb, "upper-left 20x20 blocks of F0/F1 differ from A0/A1")

    neg = [name for name in ("D1", "B1", "C1", "B2", "C2", "C4", "F0", "F1", "A0", "A1")
           if any(x < 0 for x in getattr(d, name).entries)]
    _check("nonnegative", reports, not neg, f"negative entries in {neg}")

    if strict:
        for r in reports:
            r.raise_if_failed()
    return reports


def in_exempt_set(z, exempt) -> tuple[bool, int | None]:
    """Membership in P (exempt=ZP) or Q (exempt=ZQ); returns (ok, first bad 1-based coordinate)."""
    for i, zi in enumerate(z, start=1):
        if zi < 0 or (zi == 0 and i not in exempt):
            return False, i
    return True, None


@dataclass(frozen=True)
class ConeParams:
    eps: Fraction | float = Fraction(1, 4)

    def _vec(self, exempt):
        return tuple(-self.eps if i in exempt else 1 for i in range(1, 21))

    @property
    def p(self) -> tuple:
        return self._vec(ZP)

    @property
    def q(self) -> tuple:
        return self._vec(ZQ)


def _apply(m: ExactMatrix, v) -> list:
    return [sum(m[i, j] * v[j] for j in range(m.cols)) for i in range(m.rows)]


def validate_cone(c: ConeParams, d: EmbeddedData) -> Report:
    """Check A0 p, A0 q in P and A1 p, A1 q in Q (exact rational arithmetic)."""
    if c.eps < 0:
        raise ValueError("eps must be nonnegative")
    rep = Report(f"cone eps={c.eps}")
    for mname, vname, target, exempt in [("A0", "p", "P", ZP), ("A0", "q", "P", ZP),
                                         ("A1", "p", "Q", ZQ), ("A1", "q", "Q", ZQ)]:
        z = _apply(getattr(d, mname), getattr(c, vname))
        ok, bad = in_exempt_set(z, exempt)
        if not ok:
            rep.fail(f"{mname}{vname} not in {target}: coordinate {bad} = {z[bad - 1]}")
    return rep


def validate_zm_in_S(d: EmbeddedData, m_range=range(64, 128), strict: bool = True) -> Report:
    """Check that z_m (first 20 entries of y_m) lies in P or Q for each m."""
    from .counting import y_vector

    rep = Report("z_m in S")
    for m in m_range:
        z = y_vector(m).entries[:20]
        okp, badp = in_exempt_set(z, ZP)
        okq, badq = in_exempt_set(z, ZQ)
        if not (okp or okq):
            zeros = [i for i, zi in enumerate(z, start=1) if zi == 0]
            rep.fail(f"m={m}: zero coordinates {zeros} (P fails at {badp}, Q fails at {badq})")
    if strict:
        rep.raise_if_failed()
    return rep


def dump(d: EmbeddedData | None = None) -> dict:
    """All embedded data as JSON-ready values (integers as decimal strings)."""
    d = d or load()
    s = lambda m: [[str(x) for x in r] for r in m.to_rows()]  # noqa: E731
    return {
        "checksum": DATA_SHA256,
        "blocks": {k: s(getattr(d, k)) for k in ("D1", "B1", "C1", "B2", "C2", "C4")},
        "F0": s(d.F0), "F1": s(d.F1), "A0": s(d.A0), "A1": s(d.A1),
        "w": [str(x) for x in d.w.entries],
        "y": {str(m): [str(x) for x in v.entries] for m, v in sorted(d.y.items())},
        "P_cert": [[repr(float(x)) for x in r] for r in d.P_cert],
        "x_cert": [str(x) for x in d.x_cert],
    }
