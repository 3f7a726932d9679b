"""Poincaré section map for the geodesic flow, in endpoint coordinates (gamma, eta)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .exact import INFINITY, L, R, is_exact
from .horocycle import PslMatrix


@dataclass(frozen=True)
class GPoint:
    """Geodesic with forward endpoint gamma > 0 and backward endpoint -eta < 0."""

    gamma: object
    eta: object

    def __post_init__(self):
        for name in ("gamma", "eta"):
            v = getattr(self, name)
            v = Fraction(v) if is_exact(v) else float(v)
            if not v > 0:
                raise DomainError(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, v)


class _Cusp:
    """Sentinel image (0, oo): the geodesic runs straight into the cusp."""

    gamma = Fraction(0)
    eta = INFINITY

    def __repr__(self):
        return "CUSP"


CUSP = _Cusp()


@dataclass(frozen=True)
class GStep:
    image: object  # GPoint or CUSP
    rho: float | None

    @property
    def absorbed(self) -> bool:
        return self.image is CUSP


def g_step(p: GPoint) -> GStep:
    g, h = p.gamma, p.eta
    if g > 1:
        return GStep(GPoint(g - 1, h + 1), g_return_time(p))
    if g < 1:
        return GStep(GPoint(g / (1 - g), h / (1 + h)), g_return_time(p))
    return GStep(CUSP, None)


def g_step_inverse(p: GPoint) -> GPoint:
    """Preimage under g_step; eta > 1 came from gamma > 1, eta < 1 from gamma < 1."""
    g, h = p.gamma, p.eta
    if h > 1:
        return GPoint(g + 1, h - 1)
    if h < 1:
        return GPoint(g / (1 + g), h / (1 - h))
    raise DomainError("eta = 1 has no preimage")


def g_step_arrays(g, h):
    """Vectorized float g_step away from gamma = 1."""
    g, h = np.asarray(g, float), np.asarray(h, float)
    hi = g > 1
    with np.errstate(divide="ignore"):
        return np.where(hi, g - 1, g / (1 - g)), np.where(hi, h + 1, h / (1 + h))


def g_matrix(p: GPoint):
    """The modular matrix carrying the next crossing back to the section."""
    if p.gamma == 1:
        raise DomainError("no return at gamma = 1")
    return R.inv() if p.gamma > 1 else L.inv()


def g_return_time(p: GPoint) -> float:
    g, h = float(p.gamma), float(p.eta)
    if p.gamma > 1:
        return 0.5 * math.log((1 + 1 / h) / (1 - 1 / g))
    if p.gamma < 1:
        return 0.5 * math.log((1 + h) / (1 - g))
    raise DomainError("no return at gamma = 1")


def g_orbit(p: GPoint, max_steps: int = 10**6) -> list:
    """Orbit until absorption in the cusp (rational gamma) or max_steps."""
    out = [p]
    while len(out) <= max_steps and out[-1] is not CUSP:
        out.append(g_step(out[-1]).image)
    return out


def g_lift(p: GPoint) -> PslMatrix:
    g, h = float(p.gamma), float(p.eta)
    s = math.sqrt(g + h)
    a, b = (h / g) ** 0.25, (g / h) ** 0.25
    return PslMatrix(a * g / s, -b * h / s, a / s, b / s)


def geodesic_flow_point(p: GPoint, t: float) -> complex:
    """Base point after flowing the section point of p for time t."""
    m = g_lift(p)
    e = math.exp(t / 2)
    return (m.a * e * 1j + m.b / e) / (m.c * e * 1j + m.d / e)


def g_return_time_matrix(p: GPoint) -> float:
    """Return time from lift(p)^-1 Gamma^-1 lift(image) = diag(e^(t/2), e^(-t/2))."""
    img = g_step(p).image
    m = (g_lift(p).inv() @ PslMatrix.from_mat2z(g_matrix(p).inv()) @ g_lift(img)).normalized()
    if max(abs(m.b), abs(m.c)) > 1e-9 * max(1.0, m.norm()):
        raise DomainError(f"not diagonal: {m.as_tuple()}")
    return 2 * math.log(m.a)


def g_chart(p: GPoint, tau: float) -> tuple[float, float, float]:
    """Coordinates of the point at time tau from the top of the geodesic."""
    g, h = float(p.gamma), float(p.eta)
    ep, em = math.exp(tau), math.exp(-tau)
    return (g * ep - h * em) / (ep + em), (g + h) / (ep + em), -2 * math.atan(ep)


@dataclass(frozen=True)
class GRegion:
    """Open box g0<gamma<g1, e0<eta<e1."""

    g0: float
    g1: float
    e0: float
    e1: float

    def contains(self, g, h) -> bool:
        return self.g0 < g < self.g1 and self.e0 < h < self.e1


def mu_measure(region: GRegion) -> float:
    """Integral of (gamma+eta)^-2 over the box; infinite if it touches the origin."""
    s, t, u, v = (float(x) for x in (region.g0, region.g1, region.e0, region.e1))
    if not (0 <= s < t and 0 <= u < v):
        raise DomainError(f"{region} is not a box in the positive quadrant")
    if s + u == 0:
        return math.inf
    if math.isinf(t) and math.isinf(v):
        return math.inf
    if math.isinf(t):
        return math.log((s + v) / (s + u))
    if math.isinf(v):
        return math.log((t + u) / (s + u))
    return math.log((t + u) * (s + v) / ((s + u) * (t + v)))
