"""Stern-Brocot sets, the plain and permuted trees, and energy-bounded enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, InvalidPair
from .exact import (INFINITY, LRWord, Mat2Z, as_rational, coding_of_rational,
                    farey_sum, reverse_matrix, word_to_matrix)


@dataclass(frozen=True)
class FareyPair:
    """Consecutive fractions lo < hi with hi.num*lo.den - hi.den*lo.num == 1."""

    lo: Fraction
    hi: object  # Fraction or INFINITY

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if lo < 0:
            raise InvalidPair("Farey pairs are nonnegative")
        if hi.numerator * lo.denominator - hi.denominator * lo.numerator != 1:
            raise InvalidPair(f"{lo}, {hi} is not a Farey pair")

    @property
    def mediant(self):
        return farey_sum(self.lo, self.hi)


@dataclass(frozen=True)
class TreeNode:
    value: Fraction
    level: int
    path: LRWord
    kind: str  # "plain" or "permuted"


def stern_brocot_set(k: int) -> list:
    """F_k: F_{-1} = [0/1, 1/0], then insert mediants k+1 times."""
    if k < -1:
        raise DomainError("k must be at least -1")
    fs = [Fraction(0), INFINITY]
    for _ in range(k + 1):
        nxt = [fs[0]]
        for x, y in zip(fs, fs[1:]):
            nxt += [farey_sum(x, y), y]
        fs = nxt
    return fs


def farey_pairs(k: int) -> list[FareyPair]:
    """Consecutive pairs of F_k."""
    fs = stern_brocot_set(k)
    return [FareyPair(x, y) for x, y in zip(fs, fs[1:])]


def daughters_permuted(x) -> tuple[Fraction, Fraction]:
    p, q = x.numerator, x.denominator
    return Fraction(p, p + q), Fraction(p + q, q)


def _plain_value(m: Mat2Z) -> Fraction:
    return Fraction(m.a + m.b, m.c + m.d)


def tree_levels(kind: str = "plain") -> Iterator[list[TreeNode]]:
    """Lazily yield the levels of the plain or permuted tree, left to right."""
    if kind not in ("plain", "permuted"):
        raise DomainError(f"unknown tree kind {kind!r}")
    level = [TreeNode(Fraction(1), 0, "", kind)]
    k = 0
    while True:
        yield level
        k += 1
        nxt = []
        for node in level:
            if kind == "plain":
                m = word_to_matrix(node.path)
                kids = (_plain_value(m @ word_to_matrix("L")),
                        _plain_value(m @ word_to_matrix("R")))
            else:
                kids = daughters_permuted(node.value)
            nxt.append(TreeNode(kids[0], k, node.path + "L", kind))
            nxt.append(TreeNode(kids[1], k, node.path + "R", kind))
        level = nxt


def permuted_parent(x) -> Fraction:
    """Inverse of daughters_permuted; the parent is U(x)."""
    x = as_rational(x)
    if x == 1:
        raise DomainError("1/1 is the root")
    p, q = x.numerator, x.denominator
    return Fraction(p, q - p) if p < q else Fraction(p - q, q)


def energy(x) -> int:
    return x.numerator * x.denominator


def iter_energy_bounded(bound) -> Iterator[Fraction]:
    """Depth-first, left-first walk of the permuted tree, pruned at energy > bound.

    Memory is O(depth); pruning is valid because daughters have larger energy.
    """
    if bound < 1:
        return
    stack = [(1, 1)]
    while stack:
        p, q = stack.pop()
        if p * q > bound:
            continue
        yield Fraction(p, q)
        stack.append((p + q, q))
        stack.append((p, p + q))


def enumerate_energy_bounded(bound) -> list[Fraction]:
    """All reduced p/q with pq <= bound, sorted by (energy, value)."""
    return sorted(iter_energy_bounded(bound), key=lambda x: (energy(x), x))


def geodesic_word(pair: FareyPair) -> Mat2Z:
    """Reversed coding matrix of the mediant; sends {-lo, -hi} to {0, oo}."""
    return reverse_matrix(word_to_matrix(coding_of_rational(pair.mediant)))


def geodesic_circle(pair: FareyPair) -> tuple[Fraction, Fraction]:
    """Center and radius of the half circle with feet -lo and -hi."""
    if pair.hi is INFINITY:
        raise DomainError("the geodesic to infinity is a vertical line")
    center = -(pair.lo + pair.hi) / 2
    return center, Fraction(1, 2 * pair.lo.denominator * pair.hi.denominator)
