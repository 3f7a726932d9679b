"""Numerical checks: suspension volumes and Monte Carlo invariance of the section measures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import DomainError
from .geodesic import GPoint, GRegion, g_return_time, g_step_arrays, g_step_inverse, mu_measure
from .horocycle import (ROWS, Region, WPoint, classify, nu_measure, return_time_value, step_arrays,
                        step_inverse)

STATED_HOROCYCLE_VOLUME = 4 * math.pi**2 / 3
LIOUVILLE_VOLUME = 2 * math.pi**2 / 3
GEODESIC_VOLUME = math.pi**2 / 3


def _horocycle_inner(g: float, e: int, epsrel: float) -> float:
    """Integral over r > g of |s_h| r^-2, with r = g cosh w and breaks at row boundaries."""
    def f(w):
        r = g * math.cosh(w)
        return -return_time_value(g, r, e, exact=False) * g * math.sinh(w) / (r * r)

    breaks = sorted(math.acosh(b / g) for b in (1 - g, 1 + g, g * (1 + g)) if b > g)
    total, lo = 0.0, 0.0
    for hi in breaks + [60.0]:  # cosh(60) ~ 6e25, the tail is negligible
        total += integrate.quad(f, lo, hi, limit=200, epsrel=epsrel, epsabs=1e-13)[0]
        lo = hi
    return total


def horocycle_suspension_volume(epsrel: float = 1e-9, per_sheet: bool = False):
    """Integral of |s_h| against nu over both sheets of the section."""
    parts = {}
    for e in (1, -1):
        low = integrate.quad(lambda g: _horocycle_inner(g, e, epsrel), 0, 1,
                             points=[0.5], limit=200, epsrel=epsrel, epsabs=1e-12)[0]
        # gamma > 1 through gamma = 1/x
        high = integrate.quad(lambda x: _horocycle_inner(1 / x, e, epsrel) / (x * x), 0, 1,
                              limit=200, epsrel=epsrel, epsabs=1e-12)[0]
        parts[e] = (low, high)
    total = sum(a + b for a, b in parts.values())
    return (total, parts) if per_sheet else total


def _half_line(f, epsrel: float) -> float:
    """Integral of f over (0, oo), the tail through x -> 1/x."""
    kw = dict(limit=200, epsrel=epsrel, epsabs=1e-13)
    return (integrate.quad(f, 0, 1, **kw)[0]
            + integrate.quad(lambda x: f(1 / x) / (x * x), 0, 1, **kw)[0])


def geodesic_suspension_volume(epsrel: float = 1e-10) -> float:
    """Integral of rho_g against mu over the positive quadrant."""
    def inner(g):
        return _half_line(lambda h: g_return_time(GPoint(g, h)) / (g + h) ** 2, epsrel)

    return _half_line(inner, epsrel)


def _rat(rng, lo, hi, den=97):
    """Random rational in (lo, hi) with denominator <= den * den(lo)."""
    lo = Fraction(lo)
    span = Fraction(hi) - lo
    k = int(rng.integers(1, den))
    return lo + span * Fraction(k, den)


def random_section_points(n: int, rng=None) -> list[WPoint]:
    """Exact points cycling through every row of the section map, ties included."""
    rng = np.random.default_rng(rng)
    makers = {}

    def g_below(lo=0, hi=1):
        return _rat(rng, lo, hi)

    def g_above():
        return 1 + _rat(rng, 0, 4)

    half = Fraction(1, 2)
    makers["+1:gamma>1"] = lambda: (g := g_above(), g + _rat(rng, 0, 10), 1)
    makers["+1:gamma=1"] = lambda: (1, 1 + _rat(rng, 0, 10), 1)
    makers["+1:gamma<1,r>1-gamma"] = lambda: (
        g := g_below(), max(g, 1 - g) + _rat(rng, 0, 10), 1)
    makers["+1:gamma<1,r=1-gamma"] = lambda: (g := g_below(0, half), 1 - g, 1)
    makers["+1:gamma<1,r<1-gamma"] = lambda: (g := g_below(0, half), _rat(rng, g, 1 - g), 1)
    makers["-1:r>gamma(1+gamma)"] = lambda: (
        g := (g_below() if rng.random() < 0.5 else g_above()), g * (1 + g) + _rat(rng, 0, 10), -1)
    makers["-1:r=gamma(1+gamma)"] = lambda: (
        g := (g_below() if rng.random() < 0.5 else g_above()), g * (1 + g), -1)
    makers["-1:gamma>1,1+gamma<r<gamma(1+gamma)"] = lambda: (
        g := g_above(), _rat(rng, 1 + g, g * (1 + g)), -1)
    makers["-1:gamma>1,r=1+gamma"] = lambda: (g := g_above(), 1 + g, -1)
    makers["-1:r<min(1+gamma,gamma(1+gamma))"] = lambda: (
        g := (g_below() if rng.random() < 0.5 else g_above()),
        _rat(rng, g, min(1 + g, g * (1 + g))), -1)
    makers["0:gamma=r>1"] = lambda: (g := g_above(), g, 0)
    makers["0:gamma=r=1"] = lambda: (1, 1, 0)
    makers["0:1/2<gamma=r<1"] = lambda: (g := g_below(half, 1), g, 0)
    makers["0:gamma=r=1/2"] = lambda: (half, half, 0)
    makers["0:gamma=r<1/2"] = lambda: (g := g_below(0, half), g, 0)
    rows = [row.value for row in ROWS]
    out = []
    for i in range(n):
        row = rows[i % len(rows)]
        p = WPoint(*makers[row]())
        if classify(p).value != row:
            raise AssertionError(f"sampler for {row} produced {p}")
        out.append(p)
    return out


# --- Monte Carlo invariance --------------------------------------------------

@dataclass(frozen=True)
class MCResult:
    target: float
    estimate: float
    stderr: float

    @property
    def z(self) -> float:
        return (self.estimate - self.target) / self.stderr if self.stderr else math.inf

    @property
    def ok(self) -> bool:
        return abs(self.z) < 3


def _log_box(points, pad=0.05):
    lg = np.log(np.asarray(points, float))
    lo, hi = lg.min(axis=0), lg.max(axis=0)
    span = np.maximum(hi - lo, 1e-3)
    return lo - pad * span - 1e-3, hi + pad * span + 1e-3


def _grid(x0, x1, y0, y1, n):
    t = np.clip(np.linspace(0, 1, n), 1e-9, 1 - 1e-9)
    xs, ys = x0 + (x1 - x0) * t, y0 + (y1 - y0) * t
    return [(x, y) for x in xs for y in ys]


def horocycle_preimage_boxes(A: Region, n: int = 42) -> dict:
    """Log-space bounding boxes, per source sheet, of the preimage of A."""
    pts = {}
    for e in A.eps & {1, -1}:
        for g, r in _grid(float(A.g0), float(A.g1), float(A.r0), float(A.r1), n):
            if r <= g:
                continue
            try:
                q = step_inverse(WPoint(g, r, e))
            except DomainError:
                continue
            pts.setdefault(q.eps, []).append((q.gamma, q.r))
    return {e: _log_box(v) for e, v in pts.items() if e != 0}


def horocycle_invariance_mc(A: Region, n_samples: int = 10**6, rng=None) -> MCResult:
    """Estimate nu(P^-1 A) by sampling boxes around the preimage and mapping forward."""
    rng = np.random.default_rng(rng)
    boxes = horocycle_preimage_boxes(A)
    est, var = 0.0, 0.0
    m = n_samples // max(1, len(boxes))
    for e, (lo, hi) in boxes.items():
        u = lo + (hi - lo) * rng.random((m, 2))
        g, r = np.exp(u[:, 0]), np.exp(u[:, 1])
        ok = r > g
        g, r = g[ok], r[ok]
        g2, r2, e2 = step_arrays(g, r, np.full(g.shape, e))
        hit = (np.isin(e2, list(A.eps)) & (g2 > float(A.g0)) & (g2 < float(A.g1))
               & (r2 > float(A.r0)) & (r2 < float(A.r1)))
        # density r^-2 times the Jacobian g*r of the log coordinates
        w = np.zeros(m)
        w[np.flatnonzero(ok)[hit]] = (g / r)[hit]
        w *= np.prod(hi - lo)
        est += w.mean()
        var += w.var(ddof=1) / m
    return MCResult(nu_measure(A), est, math.sqrt(var))


def random_horocycle_regions(n: int, rng=None) -> list[Region]:
    """Boxes with two-decimal corners, on one sheet, not straddling gamma = 1."""
    rng = np.random.default_rng(rng)
    out = []
    while len(out) < n:
        e = int(rng.choice([1, -1]))
        if rng.random() < 0.5:
            g0 = rng.uniform(0.05, 0.8)
            g1 = min(g0 + rng.uniform(0.05, 0.4), 0.95)
        else:
            g0 = rng.uniform(1.05, 3.0)
            g1 = g0 + rng.uniform(0.1, 1.0)
        r0 = g1 + rng.uniform(0.0, 2.0)
        r1 = r0 + rng.uniform(0.2, 3.0)
        c = [round(x, 2) for x in (g0, g1, r0, r1)]
        if c[0] < c[1] and c[2] < c[3]:
            out.append(Region(*c, eps=frozenset({e})))
    return out


def geodesic_preimage_box(A: GRegion, n: int = 42):
    pts = [g_step_inverse(GPoint(g, h)) for g, h in _grid(A.g0, A.g1, A.e0, A.e1, n)]
    return _log_box([(p.gamma, p.eta) for p in pts])


def geodesic_invariance_mc(A: GRegion, n_samples: int = 10**6, rng=None) -> MCResult:
    rng = np.random.default_rng(rng)
    lo, hi = geodesic_preimage_box(A)
    u = lo + (hi - lo) * rng.random((n_samples, 2))
    g, h = np.exp(u[:, 0]), np.exp(u[:, 1])
    g2, h2 = g_step_arrays(g, h)
    hit = (g2 > A.g0) & (g2 < A.g1) & (h2 > A.e0) & (h2 < A.e1)
    w = np.where(hit, g * h / (g + h) ** 2, 0.0) * np.prod(hi - lo)
    return MCResult(mu_measure(A), w.mean(), w.std(ddof=1) / math.sqrt(n_samples))


def random_geodesic_regions(n: int, rng=None) -> list[GRegion]:
    """Boxes with two-decimal corners whose eta-range avoids 1."""
    rng = np.random.default_rng(rng)
    out = []
    while len(out) < n:
        g0 = rng.uniform(0.05, 3.0)
        g1 = g0 + rng.uniform(0.1, 1.5)
        if rng.random() < 0.5:
            e0 = rng.uniform(0.05, 0.7)
            e1 = min(e0 + rng.uniform(0.05, 0.5), 0.95)
        else:
            e0 = rng.uniform(1.05, 3.0)
            e1 = e0 + rng.uniform(0.1, 2.0)
        c = [round(x, 2) for x in (g0, g1, e0, e1)]
        if c[0] < c[1] and c[2] < c[3]:
            out.append(GRegion(*c))
    return out
