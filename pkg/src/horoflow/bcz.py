"""The BCZ map on the Farey triangle and its relation to horocycle passages."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, NotAPassage
from .exact import as_rational, format_rational
from .horocycle import WPoint


@dataclass(frozen=True)
class OmegaPoint:
    """(alpha, beta) with alpha, beta in (0, 1] and alpha + beta > 1."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = as_rational(self.alpha), as_rational(self.beta)
        if not (0 < a <= 1 and 0 < b <= 1 and a + b > 1):
            raise DomainError(f"({a}, {b}) is not in the Farey triangle")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)


def bcz_step(p: OmegaPoint) -> OmegaPoint:
    """V(alpha, beta) = (beta, -alpha + floor((1+alpha)/beta) beta)."""
    a, b = p.alpha, p.beta
    return OmegaPoint(b, -a + math.floor((1 + a) / b) * b)


@dataclass(frozen=True)
class FareySeq:
    Q: int
    fractions: tuple

    @property
    def N(self) -> int:
        return len(self.fractions) - 1

    @property
    def denominators(self) -> list[int]:
        return [x.denominator for x in self.fractions]


def farey_sequence(Q: int) -> FareySeq:
    """Reduced fractions in [0,1] with denominator <= Q, by the next-term recurrence."""
    if Q < 1:
        raise DomainError("Q must be positive")
    a, b, c, d = 0, 1, 1, Q
    out = [Fraction(0)]
    while c <= Q:
        out.append(Fraction(c, d))
        if c == d:
            break
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return FareySeq(Q, tuple(out))


def totient_sum(Q: int) -> int:
    """sum_{q<=Q} phi(q), via a totient sieve."""
    phi = list(range(Q + 1))
    for p in range(2, Q + 1):
        if phi[p] == p:
            for m in range(p, Q + 1, p):
                phi[m] -= phi[m] // p
    return sum(phi[1:])


def farey_orbit(Q: int) -> list[OmegaPoint]:
    """Consecutive-denominator points (q_{i-1}/Q, q_i/Q), i = 1..N(Q)."""
    qs = farey_sequence(Q).denominators
    return [OmegaPoint(Fraction(x, Q), Fraction(y, Q)) for x, y in zip(qs, qs[1:])]


def bcz_orbit(start: OmegaPoint, max_steps: int = 10**7) -> list[OmegaPoint]:
    """Iterate V until the start recurs."""
    out = [start]
    p = bcz_step(start)
    while p != start:
        out.append(p)
        if len(out) > max_steps:
            raise DomainError("no return")
        p = bcz_step(p)
    return out


def in_tilde_farey(a: int, b: int, Q: int) -> bool:
    if gcd(a, b) != 1 or a < 1 or b < 1:
        return False
    if a <= b:
        return b <= Q and 2 * a * b <= Q * Q
    return a + b <= Q and 2 * a * (a + b) > Q * Q


def tilde_farey(Q: int) -> set[tuple[int, int]]:
    """Coprime pairs indexing the passages of the closed horocycle of length Q^2."""
    if Q < 2:
        raise DomainError("Q must be at least 2")
    return {(a, b) for b in range(1, Q + 1) for a in range(1, Q + 1) if in_tilde_farey(a, b, Q)}


def _coprime_count(lo: int, hi: int, b: int, sqfree_divs) -> int:
    """#{lo <= a <= hi : gcd(a, b) = 1} by inclusion-exclusion."""
    if hi < lo:
        return 0
    return sum(mu * (hi // d - (lo - 1) // d) for d, mu in sqfree_divs[b])


def tilde_farey_size(Q: int) -> int:
    """Cardinality of tilde_farey(Q) without listing it."""
    if Q < 2:
        raise DomainError("Q must be at least 2")
    divs = [[] for _ in range(Q + 1)]
    mu = [1] * (Q + 1)
    for p in range(2, Q + 1):
        if all(p % d for d in range(2, math.isqrt(p) + 1)):
            for m in range(p, Q + 1, p):
                mu[m] = -mu[m]
            for m in range(p * p, Q + 1, p * p):
                mu[m] = 0
    for d in range(1, Q + 1):
        if mu[d]:
            for m in range(d, Q + 1, d):
                divs[m].append((d, mu[d]))
    total = 0
    for b in range(1, Q + 1):
        total += _coprime_count(1, min(b, Q * Q // (2 * b)), b, divs)
        # least a with 2a(a+b) > Q^2
        a = max(b + 1, (math.isqrt(b * b + 2 * Q * Q) - b) // 2)
        while 2 * a * (a + b) <= Q * Q:
            a += 1
        total += _coprime_count(a, Q - b, b, divs)
    return total


def passage_point(a: int, b: int, Q: int) -> OmegaPoint:
    if not in_tilde_farey(a, b, Q):
        raise NotAPassage(f"({a}, {b}) is not a passage for Q={Q}")
    if a <= b:
        return OmegaPoint(Fraction(b, Q), Fraction(a + (Q - a) // b * b, Q))
    return OmegaPoint(Fraction(a + b, Q), Fraction(a, Q))


def embed_alpha_beta(p: OmegaPoint) -> tuple[Fraction, Fraction]:
    """Point (x, y) of the strip 0 < x <= 1, y = 1/alpha^2 >= 1."""
    t = p.beta / p.alpha
    y = 1 / (p.alpha * p.alpha)
    if t.denominator == 1:
        return Fraction(1), y
    return t - math.floor(t), y


def nonperiodic_passage_predicate(p: WPoint) -> bool:
    """Whether the flow segment after this return passes through the BCZ section."""
    g, r, e = p.gamma, p.r, p.eps
    if g <= 1:
        return r >= Fraction(1, 2) and e != -1
    return (1 + g) ** 2 / 2 <= r < g * (1 + g) and e == -1


def bcz_json(Q: int) -> str:
    orbit = bcz_orbit(OmegaPoint(Fraction(1, Q), Fraction(1)))
    return json.dumps({"Q": Q, "N": len(orbit),
                       "orbit": [[format_rational(p.alpha), format_rational(p.beta)] for p in orbit]})
