"""Exact rationals, SL(2,Z) matrices, {L,R} words and the Möbius action."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce, total_ordering
from numbers import Rational as _RationalABC

from .errors import DegenerateError, DomainError, PoleError

Rational = Fraction
LRWord = str  # a word over the alphabet "LR"

FLOAT_TOL = 1e-12


@total_ordering
class _Infinity:
    """The formal fraction 1/0; larger than every rational."""

    numerator = 1
    denominator = 0
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "1/0"

    def __float__(self):
        return math.inf

    def __hash__(self):
        return hash(math.inf)

    def __eq__(self, other):
        return other is self or (isinstance(other, float) and other == math.inf)

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not self.__eq__(other)

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_exact(x) -> bool:
    return isinstance(x, _RationalABC) and not isinstance(x, bool)


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x) -> str:
    """Serialize as "p/q", always with an explicit denominator."""
    if x is INFINITY:
        return "1/0"
    x = as_rational(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, slots=True)
class Mat2Z:
    """Integer 2x2 matrix of determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"determinant of {self.as_tuple()} is not 1")

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    def __matmul__(self, o: "Mat2Z") -> "Mat2Z":
        return Mat2Z(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                     self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self) -> "Mat2Z":
        return Mat2Z(self.d, -self.b, -self.c, self.a)

    def __neg__(self):
        # -M is the same Möbius map; det stays 1
        return Mat2Z(-self.a, -self.b, -self.c, -self.d)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x):
        return mobius_apply(self, x)

    def __repr__(self):
        return f"Mat2Z({self.a}, {self.b}; {self.c}, {self.d})"


I = Mat2Z(1, 0, 0, 1)
L = Mat2Z(1, 0, 1, 1)
R = Mat2Z(1, 1, 0, 1)
S = Mat2Z(0, 1, -1, 0)
LETTERS = {"L": L, "R": R}


def farey_sum(x, y):
    """Mediant (a+b)/(c+d) of a/c and b/d; accepts INFINITY."""
    p = x.numerator + y.numerator
    q = x.denominator + y.denominator
    if q == 0:
        return INFINITY
    return Fraction(p, q)


def mobius_apply(g: Mat2Z, x):
    """Apply z -> (az+b)/(cz+d). Exact on rationals, a pole gives infinity."""
    a, b, c, d = g
    if x is INFINITY:
        return Fraction(a, c) if c else INFINITY
    if is_exact(x):
        den = c * x + d
        if den == 0:
            return INFINITY
        return Fraction(a * x + b) / den
    den = c * x + d
    if not hasattr(den, "shape") and den == 0:
        return math.inf
    return (a * x + b) / den


def deformation_factor(g: Mat2Z, x):
    """(cx+d)^-2, the factor by which a horocycle radius at x is scaled."""
    den = g.c * x + g.d
    if den == 0:
        raise PoleError(f"{g!r} has a pole at {x}")
    if is_exact(x):
        return Fraction(1) / (den * den)
    return 1.0 / (den * den)


def deformation_cocycle_holds(g1: Mat2Z, g2: Mat2Z, z) -> bool:
    """Check D[g1 g2](z) == D[g1](g2 z) * D[g2](z)."""
    lhs = deformation_factor(g1 @ g2, z)
    rhs = deformation_factor(g1, mobius_apply(g2, z)) * deformation_factor(g2, z)
    if is_exact(z):
        return lhs == rhs
    return math.isclose(lhs, rhs, rel_tol=1e-12)


def word_to_matrix(w: LRWord) -> Mat2Z:
    return reduce(lambda m, ch: m @ LETTERS[ch], w, I)


def extended_farey(x):
    """U(x) = x/(1-x) below 1, x-1 from 1 on."""
    if x < 1:
        return x / (1 - x)
    return x - 1


def coding_of_rational(x) -> LRWord:
    """The {L,R} path from 1/1 to x in the Stern-Brocot tree."""
    x = as_rational(x)
    if x <= 0:
        raise DomainError("coding needs a positive rational")
    out = []
    while x != 1:
        if x < 1:
            out.append("L")
        else:
            out.append("R")
        x = extended_farey(x)
    return "".join(out)


def coding_prefix_of_real(x: float, k: int, tol: float = FLOAT_TOL) -> LRWord:
    """First k letters of the coding of a positive irrational x."""
    if x <= 0:
        raise DomainError("coding needs a positive number")
    out = []
    for _ in range(k):
        if abs(x - 1.0) <= tol:
            raise DegenerateError(f"iterate hit 1 after {len(out)} letters")
        out.append("L" if x < 1 else "R")
        x = extended_farey(x)
    return "".join(out)


def reverse_word(w: LRWord) -> LRWord:
    return w[::-1]


def reverse_matrix(m: Mat2Z) -> Mat2Z:
    """(a b; c d) -> (d b; c a), the matrix of the reversed word."""
    if min(m.as_tuple()) < 0:
        raise DomainError(f"{m!r} is not a product of L and R")
    return Mat2Z(m.d, m.b, m.c, m.a)
