"""Ratio reports: the empirical stand-in for two-sided estimates.

A two-sided estimate ``LHS ~ RHS`` is accepted on a finite grid when the
ratios stay inside a band (max/min) of bounded width and show no
divergence trend over the top of the grid.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

#: Maximal max/min ratio accepted for a two-sided estimate.
BAND_WIDTH = 50.0

#: Number of trailing grid points inspected by the divergence test.
TREND_POINTS = 5

#: Last-to-first growth that turns a monotone run into a divergence.
TREND_GROWTH = 4.0


def is_divergent(values, points=TREND_POINTS, growth=TREND_GROWTH):
    """Monotone over the last ``points`` values, with last/first of that window above ``growth``.

    ``values`` are positive and ordered toward the boundary.  Both growth and
    decay count as divergence of the ratio (use ``monotone_growth`` for a
    one-sided test).
    """
    v = np.asarray(values, dtype=float)
    if v.size < points or np.any(~np.isfinite(v)) or np.any(v <= 0):
        return False
    tail = v[-points:]
    d = np.diff(tail)
    if np.all(d > 0):
        return tail[-1] / tail[0] > growth
    if np.all(d < 0):
        return tail[0] / tail[-1] > growth
    return False


def monotone_growth(values, points=TREND_POINTS, growth=TREND_GROWTH):
    """One-sided version of :func:`is_divergent`: only growth counts."""
    v = np.asarray(values, dtype=float)
    if v.size < points or np.any(~np.isfinite(v)) or np.any(v <= 0):
        return False
    tail = v[-points:]
    return bool(np.all(np.diff(tail) > 0) and tail[-1] / tail[0] > growth)


@dataclass
class RatioRow:
    param: object
    lhs: float
    rhs: float
    ratio: float
    extra: dict = field(default_factory=dict)


@dataclass
class RatioReport:
    """Grid of ``(parameter, LHS, RHS, ratio)`` rows with a band summary."""

    name: str
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def add(self, param, lhs, rhs, **extra):
        lhs, rhs = float(lhs), float(rhs)
        if rhs == 0.0:
            ratio = float("nan")
        else:
            ratio = lhs / rhs
        self.rows.append(RatioRow(param, lhs, rhs, ratio, dict(extra)))

    @property
    def ratios(self):
        return np.array([r.ratio for r in self.rows if not r.extra.get("degenerate")])

    @property
    def min_ratio(self):
        r = self.ratios
        return float(np.nanmin(r)) if r.size else float("nan")

    @property
    def max_ratio(self):
        r = self.ratios
        return float(np.nanmax(r)) if r.size else float("nan")

    @property
    def band(self):
        lo = self.min_ratio
        return self.max_ratio / lo if lo > 0 else float("inf")

    def divergent(self):
        return is_divergent(self.ratios)

    def upper_bounded(self):
        """Ratios do not grow without bound toward the end of the grid."""
        r = self.ratios
        return bool(r.size and np.all(np.isfinite(r)) and not monotone_growth(r))

    def two_sided(self, width=BAND_WIDTH):
        r = self.ratios
        return bool(r.size and np.all(np.isfinite(r)) and np.all(r > 0)
                    and self.band <= width and not self.divergent())

    def summary(self):
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "band": self.band if self.rows else float("nan"),
            "divergent": bool(self.divergent()),
            "two_sided": self.two_sided(),
            "upper_bounded": self.upper_bounded(),
            "rows": len(self.rows),
        }

    def to_dict(self):
        return {
            "name": self.name,
            "rows": [asdict(r) for r in self.rows],
            "summary": self.summary(),
            "meta": dict(self.meta),
            "flags": list(self.flags),
        }
