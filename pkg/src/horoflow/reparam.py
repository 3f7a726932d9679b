"""Step counts of the section map and the accelerated map on gamma >= 1, r >= 1."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exact import FLOAT_TOL, as_rational, is_exact
from .horocycle import WPoint, step


def n1(gamma, r) -> int:
    """Steps from (gamma, r, +1) or (gamma, gamma, 0), gamma < 1, until gamma >= 1.

    While below 1 the orbit moves along gamma_k = gamma/(1-k gamma),
    r_k = r/(1-k gamma)^2; step k leaves the strip either through
    r_k >= 1 - gamma_k or by gamma_{k+1} >= 1.
    """
    if not 0 < gamma < 1:
        raise DomainError("n1 needs 0 < gamma < 1")
    # j-route: least j >= 1 with (j+1) gamma >= 1
    j = max(1, math.ceil(1 / gamma) - 1)
    for k in range(j):
        if r >= (1 - (k + 1) * gamma) * (1 - k * gamma):
            return k + 1
    return j


def n2(gamma, r) -> int:
    """Steps from (gamma, r, -1) to (gamma, r, +1); 0 when r = gamma.

    Counts coprime a/b, via their coding matrices (q p; q' p'), by the sign of
    (q gamma + p)(q' gamma + p') - r; the product grows down the tree, so the
    search is pruned there.
    """
    if not r >= gamma > 0:
        raise DomainError("n2 needs r >= gamma > 0")
    total = 0
    stack = [(1, 0, 0, 1)]
    while stack:
        q, p, q2, p2 = stack.pop()
        val = (q * gamma + p) * (q2 * gamma + p2)
        if val > r:
            continue
        total += 2 if val < r else 1
        stack.append((q + p, p, q2 + p2, p2))
        stack.append((q, q + p, q2, q2 + p2))
    return total - 1


def _is_integer(x) -> bool:
    return x == math.floor(x)


def tau(gamma, r) -> int:
    """Number of section-map steps making up one accelerated step."""
    if _is_integer(gamma):
        return int(gamma) - 1
    n = math.floor(gamma)
    f = 1 + n - gamma
    return n + 1 + n2(1 / f, r / (f * f))


def in_x(p: WPoint) -> bool:
    return p.gamma >= 1 and p.r >= 1 and p.eps != -1


@dataclass(frozen=True)
class AccStep:
    image: WPoint
    tau: int | None
    eps_tilde: int
    composed: bool  # eps_tilde observed by composing the section map
    snapped: bool = False  # float gamma was within tolerance of an integer


def _closed_form(g, r):
    if _is_integer(g):
        return (Fraction(1) if is_exact(g) else 1.0), r
    f = 1 + math.floor(g) - g
    return 1 / f, r / (f * f)


def acc_step(p: WPoint, compose: bool | None = None) -> AccStep:
    """Accelerated map: gamma -> 1/(1+floor(gamma)-gamma), r -> r/(1+floor(gamma)-gamma)^2.

    In exact mode the section map is composed tau times and the sign of the
    result is read off the composition. In float mode only the closed form is
    evaluated (the last leg of the composition ends on eps=+1 by definition of
    n2), and gamma within 1e-12 of an integer is snapped and flagged.
    """
    if not in_x(p):
        raise DomainError(f"{p} is not in X")
    if compose is None:
        compose = p.exact
    g, snapped = p.gamma, False
    if not p.exact:
        k = round(g)
        if g != k and abs(g - k) <= FLOAT_TOL * max(1.0, g):
            g, snapped = float(k), True
    g2, r2 = _closed_form(g, p.r)
    if p.gamma == 1 and p.eps == 0:
        return AccStep(p, 0, 0, True)
    if not compose:
        return AccStep(WPoint(g2, r2, 1), None, 1, False, snapped)
    t = tau(g, p.r)
    q = p
    for _ in range(t):
        q = step(q).image
    if (q.gamma, q.r) != (g2, r2) and p.exact:
        raise AssertionError(f"closed form {g2, r2} disagrees with composition {q}")
    return AccStep(q, t, q.eps, True, snapped)


def t_map(t):
    """T(t) = 1/(1 + floor(t) - t) on [1, oo)."""
    if t < 1:
        raise DomainError("T is defined on [1, oo)")
    return 1 / (1 + math.floor(t) - t)


def backward_cf(s):
    """F(s) = 1/(1-s) mod 1 on [0, 1)."""
    if not 0 <= s < 1:
        raise DomainError("F is defined on [0, 1)")
    x = 1 / (1 - s)
    return x - math.floor(x)


def phi(t):
    """Conjugacy [1, oo) -> [0, 1), t -> 1 - 1/t."""
    return 1 - 1 / t


def rational_absorption(t) -> int:
    """Least k with T^k(t) = 1 for rational t >= 1."""
    t = as_rational(t)
    if t < 1:
        raise DomainError("t must be at least 1")
    bound = t.numerator + t.denominator
    k = 0
    while t != 1:
        t = t_map(t)
        k += 1
        if k > bound:
            raise AssertionError("absorption did not terminate")
    return k


def mu_t(a, b) -> float:
    """Measure dt/(t(t-1)) of [a, b] with 1 < a < b."""
    return math.log((b - 1) * a / (b * (a - 1)))


def mu_t_preimage(a, b, branches: int = 1000) -> float:
    """Measure of T^-1[a, b], branch by branch.

    On [n, n+1) the preimage is [n+1-1/a, n+1-1/b]; the first `branches`
    terms are summed directly and the rest telescopes to a closed form.
    """
    total = 0.0
    for n in range(1, branches + 1):
        total += mu_t(n + 1 - 1 / a, n + 1 - 1 / b)
    return total + math.log((branches + 1 - 1 / b) / (branches + 1 - 1 / a))
