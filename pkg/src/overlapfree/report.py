from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field


@dataclass
class BoundsReport:
    """Enclosure of one growth exponent and of the spectral quantity behind it.

    ``lower``/``upper`` bound the exponent (alpha, beta or sigma);
    ``radius_lower``/``radius_upper`` bound the matching radius, with
    exponent = log2(radius).
    """

    quantity: str
    lower: float
    upper: float
    radius_lower: float
    radius_upper: float
    method: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    wall_time: float = 0.0
    flags: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_radii(cls, quantity: str, rlo: float, rhi: float, **kw) -> "BoundsReport":
        lo = math.log2(rlo) if rlo > 0 else -math.inf
        hi = math.log2(rhi) if rhi > 0 else -math.inf
        return cls(quantity, lo, hi, rlo, rhi, **kw)

    def contains(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        """True if ``[lower, upper]`` lies within ``[lo - tol, hi + tol]``."""
        return self.lower >= lo - tol and self.upper <= hi + tol

    def as_dict(self) -> dict:
        d = asdict(self)
        for k in ("lower", "upper", "radius_lower", "radius_upper"):
            if math.isinf(d[k]):
                d[k] = None if d[k] < 0 else "inf"
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)
