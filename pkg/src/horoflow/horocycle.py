"""Poincaré section map for the horocycle flow on the modular surface.

A point (gamma, r, eps) of the section describes the horocycle of radius r
tangent to the real axis at gamma, crossing the imaginary axis in its upper
(eps=+1), lower (eps=-1) or tangent (eps=0) point, after reduction to the
standard fundamental domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import AmbiguityError, DomainError, EmptyRegion, NonUnipotentError
from .exact import (FLOAT_TOL, I, L, Mat2Z, R, S, deformation_factor, is_exact,
                    mobius_apply)

BOUNDARY_TOL = FLOAT_TOL
UNIPOTENT_TOL = 1e-9
CROSSING_TOL = 1e-9

_Rinv = R.inv()
_Linv = L.inv()
SR_INV = S @ _Rinv
SR_INV2 = S @ _Rinv @ _Rinv


class Row(Enum):
    """Branches of the section map, named by sheet and defining condition."""

    P_SHIFT = "+1:gamma>1"
    P_ONE = "+1:gamma=1"
    P_CROSS = "+1:gamma<1,r>1-gamma"
    P_TANGENT = "+1:gamma<1,r=1-gamma"
    P_LEFT = "+1:gamma<1,r<1-gamma"
    M_LEFT = "-1:r>gamma(1+gamma)"
    M_LEFT_TANGENT = "-1:r=gamma(1+gamma)"
    M_RIGHT = "-1:gamma>1,1+gamma<r<gamma(1+gamma)"
    M_RIGHT_TANGENT = "-1:gamma>1,r=1+gamma"
    M_STAY = "-1:r<min(1+gamma,gamma(1+gamma))"
    Z_SHIFT = "0:gamma=r>1"
    Z_ONE = "0:gamma=r=1"
    Z_CROSS = "0:1/2<gamma=r<1"
    Z_HALF = "0:gamma=r=1/2"
    Z_LEFT = "0:gamma=r<1/2"

    @property
    def eps(self) -> int:
        return _ROW_DATA[self][0]

    @property
    def matrix(self) -> Mat2Z:
        return _ROW_DATA[self][1]

    @property
    def image_eps(self) -> int:
        return _ROW_DATA[self][2]

    @property
    def word_action(self) -> str:
        return _ROW_DATA[self][3]


# row -> (source eps, matrix, image eps, effect on the coding of gamma)
_ROW_DATA = {
    Row.P_SHIFT: (1, _Rinv, 1, "shift"),
    Row.P_ONE: (1, SR_INV2, -1, "identity"),
    Row.P_CROSS: (1, SR_INV, -1, "R+shift"),
    Row.P_TANGENT: (1, SR_INV, 0, "R+shift"),
    Row.P_LEFT: (1, _Linv, 1, "shift"),
    Row.M_LEFT: (-1, L, -1, "prepend L"),
    Row.M_LEFT_TANGENT: (-1, L, 0, "prepend L"),
    Row.M_RIGHT: (-1, R, -1, "prepend R"),
    Row.M_RIGHT_TANGENT: (-1, R, 0, "prepend R"),
    Row.M_STAY: (-1, I, 1, "identity"),
    Row.Z_SHIFT: (0, _Rinv, 1, "shift"),
    Row.Z_ONE: (0, SR_INV2, 0, "identity"),
    Row.Z_CROSS: (0, SR_INV, -1, "R+shift"),
    Row.Z_HALF: (0, SR_INV, 0, "R+shift"),
    Row.Z_LEFT: (0, _Linv, 1, "shift"),
}
ROWS = list(Row)


def apply_word_action(action: str, w: str) -> str:
    """Transform a coding word the way a row transforms the coding of gamma."""
    if action == "shift":
        return w[1:]
    if action == "prepend L":
        return "L" + w
    if action == "prepend R":
        return "R" + w
    if action == "R+shift":
        return "R" + w[1:]
    if action == "identity":
        return w
    raise ValueError(action)


class _Cmp:
    """Three-way comparison; in float mode near-ties count as ties and are flagged."""

    __slots__ = ("exact", "boundary")

    def __init__(self, exact: bool):
        self.exact = exact
        self.boundary = False

    def __call__(self, x, y) -> int:
        if not self.exact and abs(x - y) <= BOUNDARY_TOL * max(1.0, abs(x), abs(y)):
            self.boundary = True
            return 0
        return int(x > y) - int(x < y)


@dataclass(frozen=True)
class WPoint:
    """Section coordinates (gamma, r, eps) with r >= gamma and eps=0 iff r=gamma.

    Exact mode when both coordinates are rational, float mode otherwise.
    """

    gamma: object
    r: object
    eps: int

    def __post_init__(self):
        g, r, e = self.gamma, self.r, self.eps
        if e not in (-1, 0, 1):
            raise DomainError(f"eps must be -1, 0 or 1, got {e!r}")
        object.__setattr__(self, "eps", int(e))
        if is_exact(g) and is_exact(r):
            g, r = Fraction(g), Fraction(r)
            tie = r == g
        else:
            g, r = float(g), float(r)
            tie = abs(r - g) <= BOUNDARY_TOL * max(1.0, g)
            if e == 0 and tie:
                r = g
        if not g > 0:
            raise DomainError(f"gamma must be positive, got {g}")
        if e == 0 and not tie:
            raise DomainError(f"eps=0 requires r == gamma, got r={r}, gamma={g}")
        if e != 0 and not r > g:
            raise DomainError(f"eps={e} requires r > gamma, got r={r}, gamma={g}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "r", r)

    @property
    def exact(self) -> bool:
        return isinstance(self.gamma, Fraction)

    def to_float(self) -> "WPoint":
        return WPoint(float(self.gamma), float(self.r), self.eps)

    def __iter__(self):
        return iter((self.gamma, self.r, self.eps))


@dataclass(frozen=True)
class HoroStep:
    branch: Row
    matrix: Mat2Z
    image: WPoint
    word_action: str
    boundary: bool = False  # float mode only: a trichotomy was decided within tolerance


def _classify(g, r, e, cmp: _Cmp) -> Row:
    if e == 1:
        c = cmp(g, 1)
        if c > 0:
            return Row.P_SHIFT
        if c == 0:
            return Row.P_ONE
        return {1: Row.P_CROSS, 0: Row.P_TANGENT, -1: Row.P_LEFT}[cmp(r, 1 - g)]
    if e == -1:
        c = cmp(r, g * (1 + g))
        if c > 0:
            return Row.M_LEFT
        if c == 0:
            return Row.M_LEFT_TANGENT
        if cmp(g, 1) > 0:
            c = cmp(r, 1 + g)
            if c > 0:
                return Row.M_RIGHT
            if c == 0:
                return Row.M_RIGHT_TANGENT
        return Row.M_STAY
    c = cmp(g, 1)
    if c > 0:
        return Row.Z_SHIFT
    if c == 0:
        return Row.Z_ONE
    half = Fraction(1, 2) if cmp.exact else 0.5
    return {1: Row.Z_CROSS, 0: Row.Z_HALF, -1: Row.Z_LEFT}[cmp(g, half)]


def classify(p: WPoint) -> Row:
    return _classify(p.gamma, p.r, p.eps, _Cmp(p.exact))


def _apply_row(row: Row, g, r):
    m = row.matrix
    g2 = mobius_apply(m, g)
    if row.image_eps == 0:
        return g2, g2
    return g2, deformation_factor(m, g) * r


def _step_core(g, r, e, exact: bool):
    cmp = _Cmp(exact)
    row = _classify(g, r, e, cmp)
    g2, r2 = _apply_row(row, g, r)
    return row, g2, r2, cmp.boundary


def step(p: WPoint) -> HoroStep:
    """One application of the section map."""
    row, g2, r2, flag = _step_core(p.gamma, p.r, p.eps, p.exact)
    return HoroStep(row, row.matrix, WPoint(g2, r2, row.image_eps), row.word_action, flag)


def step_inverse(p: WPoint) -> WPoint:
    """Preimage under the section map, found by inverting every row."""
    found = []
    for row in ROWS:
        if row.image_eps != p.eps:
            continue
        minv = row.matrix.inv()
        if minv.c * p.gamma + minv.d == 0:
            continue
        g = mobius_apply(minv, p.gamma)
        if not g > 0:
            continue
        r = g if row.eps == 0 else deformation_factor(minv, p.gamma) * p.r
        try:
            cand = WPoint(g, r, row.eps)
        except DomainError:
            continue
        if classify(cand) is not row:
            continue
        img = step(cand).image
        if p.exact:
            ok = img == p
        else:
            ok = (math.isclose(img.gamma, p.gamma, rel_tol=1e-9)
                  and math.isclose(img.r, p.r, rel_tol=1e-9))
        if ok:
            found.append(cand)
    if not found:
        raise DomainError(f"no preimage found for {p}")
    if len(found) > 1 and p.exact:
        raise AmbiguityError(f"{p} has preimages {found}")
    return found[0]


def uv_delta(p: WPoint) -> tuple[float, float, int]:
    """u = -eps*sqrt(r^2-gamma^2)/gamma, v = eps*r/gamma, delta = [eps == 0]."""
    g, r, e = float(p.gamma), float(p.r), p.eps
    if e == 0:
        return 0.0, 0.0, 1
    return -e * math.sqrt(r * r - g * g) / g, e * r / g, 0


def _uv_sums(g, r, e):
    """(u, u+v, u-v, delta), with u+v = eps*gamma/(r + sqrt(r^2-gamma^2)) to avoid cancellation."""
    if e == 0:
        return 0.0, 0.0, 0.0, 1
    g, r = float(g), float(r)
    root = math.sqrt((r - g) * (r + g))
    return -e * root / g, e * g / (r + root), -e * (root + r) / g, 0


def return_time_value(g, r, e, exact: bool | None = None) -> float:
    """Return time of (g, r, e) from the closed-form table; see return_time."""
    if exact is None:
        exact = is_exact(g) and is_exact(r)
    row, g2, r2, _ = _step_core(g, r, e, exact)
    u, up, um, d = _uv_sums(g, r, e)
    u2, up2, um2, d2 = _uv_sums(g2, r2, row.image_eps)
    cmp = _Cmp(exact)
    if e >= 0:
        lower = cmp(r, 1 - g) < 0
        middle = False
    else:
        lower = cmp(r, min(1 + g, g * (1 + g))) < 0
        middle = not lower and cmp(r, 1 + g) >= 0 and cmp(r, g * (1 + g)) < 0
    if e < 0 and lower:
        return u2 - u
    if lower or middle:
        return um2 - um + (d2 + d)
    return up2 - up - (d2 + d)


def return_time(p: WPoint) -> float:
    """Time (negative) the horocycle flow takes from p back to the section."""
    return return_time_value(p.gamma, p.r, p.eps, p.exact)


@dataclass(frozen=True)
class PslMatrix:
    """Real 2x2 matrix of determinant one, up to sign."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_mat2z(cls, m: Mat2Z) -> "PslMatrix":
        return cls(*(float(x) for x in m))

    def __matmul__(self, o: "PslMatrix") -> "PslMatrix":
        return PslMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self) -> "PslMatrix":
        return PslMatrix(self.d, -self.b, -self.c, self.a)

    def normalized(self) -> "PslMatrix":
        """Representative with nonnegative leading entry."""
        if self.a < 0 or (self.a == 0 and self.c < 0):
            return PslMatrix(-self.a, -self.b, -self.c, -self.d)
        return self

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def norm(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


def lift(p: WPoint) -> PslMatrix:
    """The group element of the section point, acting on the base frame at i."""
    g, r, e = float(p.gamma), float(p.r), p.eps
    s = math.sqrt((r - g) * (r + g)) if e else 0.0
    k = math.sqrt(2 * r)
    return PslMatrix(g / k, -(r + e * s) / k, 1 / k, (r - e * s) / (g * k))


def return_time_matrix(p: WPoint) -> float:
    """Return time read off lift(p)^-1 Gamma^-1 lift(image), which must be (1 s; 0 1)."""
    st = step(p)
    m = (lift(p).inv() @ PslMatrix.from_mat2z(st.matrix.inv()) @ lift(st.image)).normalized()
    scale = max(1.0, lift(p).norm() * max(abs(x) for x in st.matrix) * lift(st.image).norm())
    if max(abs(m.a - 1), abs(m.d - 1), abs(m.c)) > UNIPOTENT_TOL * scale:
        raise NonUnipotentError(f"{p} -> {st.image} via {st.branch}: {m.as_tuple()}")
    return m.b


def chart_to_upper_half_plane(p: WPoint, xi: float) -> tuple[float, float, float]:
    """Position and angle at parameter xi along the horocycle of p (xi=0 is its top)."""
    g, r = float(p.gamma), float(p.r)
    den = xi * xi + 1
    theta = -math.pi if xi == 0 else -2 * math.atan(1 / xi)
    return g - 2 * r * xi / den, 2 * r / den, theta


def section_xi(p: WPoint) -> float:
    """Chart parameter at which the horocycle of p meets the imaginary axis."""
    u, v, _ = uv_delta(p)
    if p.eps == 0:
        return 1.0
    return u + v if p.eps > 0 else u - v


@dataclass(frozen=True)
class SuspensionPoint:
    base: WPoint
    xi: float

    def __post_init__(self):
        s = return_time(self.base)
        if not s - CROSSING_TOL <= self.xi <= CROSSING_TOL:
            raise DomainError(f"xi={self.xi} outside [{s}, 0]")


def suspension_step(sp: SuspensionPoint, dt: float, max_crossings: int = 10**6) -> SuspensionPoint:
    """Flow for time dt; crossing the roof applies step, crossing 0 upward applies step_inverse."""
    base, xi = sp.base, sp.xi + dt
    for _ in range(max_crossings):
        s = return_time(base)
        if xi <= s + CROSSING_TOL:
            xi -= s
            base = step(base).image
        elif xi > CROSSING_TOL:
            base = step_inverse(base)
            xi += return_time(base)
        else:
            break
    else:
        raise DomainError("too many section crossings")
    if abs(xi) <= CROSSING_TOL:
        xi = 0.0
    return SuspensionPoint(base, xi)


# --- invariant measure -------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Open box g0<gamma<g1, r0<r<r1 on the sheets listed in eps."""

    g0: object
    g1: object
    r0: object
    r1: object
    eps: frozenset = frozenset({1})

    def __post_init__(self):
        object.__setattr__(self, "eps", frozenset(int(e) for e in self.eps))
        if not (self.g0 < self.g1 and self.r0 < self.r1):
            raise EmptyRegion("degenerate box")

    def contains(self, g, r, e) -> bool:
        return e in self.eps and self.g0 < g < self.g1 and self.r0 < r < self.r1


def nu_rectangle(s, t, u, v) -> float:
    """nu of s<gamma<t, u<r<v on one sheet, for t <= u."""
    return (t - s) * (1 / u - 1 / v)


def nu_trapezoid(s, u, v) -> float:
    """nu of u<r<v, s<gamma<r on one sheet, for s <= u."""
    return math.log(v / u) - s * (1 / u - 1 / v)


def nu_sheet(g0, g1, r0, r1) -> float:
    """Integral of r^-2 over {g0<gamma<g1, r0<r<r1, r>gamma}."""
    g0, g1, r0, r1 = (float(x) for x in (g0, g1, r0, r1))
    total = 0.0
    a, b = g0, min(g1, r0)
    if b > a:
        if r0 <= 0:
            return math.inf
        total += (b - a) * (1 / r0 - 1 / r1)
    a, b = max(g0, r0), min(g1, r1)
    if b > a:
        if a <= 0:
            return math.inf
        total += math.log(b / a) - (b - a) / r1
    return total


def nu_measure(region: Region) -> float:
    """nu of a region; the eps=0 sheet is a null set."""
    if region.g0 >= region.r1 or region.g1 <= 0 or region.r1 <= 0:
        raise EmptyRegion(f"{region} misses the section")
    sheets = len(region.eps & {1, -1})
    if not sheets:
        if 0 in region.eps:
            return 0.0
        raise EmptyRegion("no sheet selected")
    return sheets * nu_sheet(region.g0, region.g1, region.r0, region.r1)


# --- vectorized float map, used for sampling -----------------------------------

def classify_arrays(g, r, e) -> np.ndarray:
    """Row index into ROWS for each point; ties are exact float equalities."""
    g, r, e = np.asarray(g, float), np.asarray(r, float), np.asarray(e)
    ggp = g * (1 + g)
    conds = [
        (e == 1) & (g > 1), (e == 1) & (g == 1),
        (e == 1) & (g < 1) & (r > 1 - g), (e == 1) & (g < 1) & (r == 1 - g),
        (e == 1) & (g < 1) & (r < 1 - g),
        (e == -1) & (r > ggp), (e == -1) & (r == ggp),
        (e == -1) & (r < ggp) & (g > 1) & (r > 1 + g),
        (e == -1) & (r < ggp) & (g > 1) & (r == 1 + g),
        (e == -1) & (r < ggp),
        (e == 0) & (g > 1), (e == 0) & (g == 1),
        (e == 0) & (g < 1) & (g > 0.5), (e == 0) & (g == 0.5), (e == 0) & (g < 0.5),
    ]
    return np.select(conds, np.arange(len(ROWS)), default=-1)


def step_arrays(g, r, e):
    """Vectorized float version of step; returns (gamma', r', eps')."""
    g, r, e = np.asarray(g, float), np.asarray(r, float), np.asarray(e, int)
    codes = classify_arrays(g, r, e)
    if (codes < 0).any():
        raise DomainError("points outside the section")
    g2, r2, e2 = np.empty_like(g), np.empty_like(r), np.empty_like(e)
    for i, row in enumerate(ROWS):
        m = codes == i
        if not m.any():
            continue
        a, b, c, d = row.matrix
        den = c * g[m] + d
        g2[m] = (a * g[m] + b) / den
        r2[m] = g2[m] if row.image_eps == 0 else r[m] / den**2
        e2[m] = row.image_eps
    return g2, r2, e2
