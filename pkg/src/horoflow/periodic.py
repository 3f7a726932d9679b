"""Periodic orbits of the section map: closed horocycles, periods, ordering, statistics."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .errors import DomainError, OutOfRange, ZeroCount
from .exact import as_rational, is_exact
from .horocycle import Region, WPoint, nu_measure, step
from .sternbrocot import iter_energy_bounded


@dataclass(frozen=True)
class PeriodicOrbit:
    r: object
    points: tuple

    @property
    def period(self) -> int:
        return len(self.points)


def closed_horocycle_embed(y) -> WPoint:
    """Section point of the closed horocycle at height y <= 1/2."""
    y = as_rational(y)
    if not 0 < y <= Fraction(1, 2):
        raise OutOfRange(f"height {y} not in (0, 1/2]")
    if y == Fraction(1, 2):
        return WPoint(1, 1, 0)
    return WPoint(1, 1 / (2 * y), -1)


def orbit_start(r) -> WPoint:
    """(1, r, -1), or the fixed point (1, 1, 0) when r = 1."""
    return WPoint(1, r, 0) if r == 1 else WPoint(1, r, -1)


def iterate_orbit(start: WPoint, max_steps: int = 10**7) -> PeriodicOrbit:
    """Iterate step until the start point recurs."""
    pts = [start]
    p = step(start).image
    while p != start:
        pts.append(p)
        if len(pts) > max_steps:
            raise DomainError(f"no return within {max_steps} steps")
        p = step(p).image
    return PeriodicOrbit(start.r, tuple(pts))


def _lt_eq(x: int, r) -> tuple[bool, bool]:
    """(x < r, x == r) for integer x and rational or float r."""
    return x < r, x == r


def period_formula(r) -> int:
    """2 #{coprime a,b : ab < r} + #{coprime a,b : ab = r}."""
    if r < 1:
        raise DomainError("r must be at least 1")
    total = 0
    for a in range(1, math.floor(r) + 1):
        for b in range(1, math.floor(r / a) + 1):
            if gcd(a, b) == 1:
                lt, eq = _lt_eq(a * b, r)
                total += 2 if lt else (1 if eq else 0)
    return total


def orbit_set(r) -> frozenset:
    """{(a/b, r/b^2, +-1) : ab < r} together with {(a/b, r/b^2, 0) : ab = r}."""
    r = as_rational(r) if is_exact(r) else float(r)
    pts = set()
    for x in iter_energy_bounded(r):
        b = x.denominator
        rr = r / (b * b)
        if x.numerator * b == r:
            pts.add(WPoint(x, rr, 0))
        else:
            pts.update((WPoint(x, rr, 1), WPoint(x, rr, -1)))
    return frozenset(pts)


def dynamical_walk(r) -> list[tuple[Fraction, int]]:
    """Orbit of (1, r, -1) in dynamical order, read off the permuted tree.

    Depth-first and left-first over fractions of energy <= r: a fraction is
    met with eps=-1 on the way down and eps=+1 on the way back up; a fraction
    of energy exactly r is met once, with eps=0.
    """
    if r < 1:
        raise DomainError("r must be at least 1")
    out = []
    stack = [("enter", 1, 1)]
    while stack:
        kind, p, q = stack.pop()
        if kind == "exit":
            out.append((Fraction(p, q), 1))
            continue
        e = p * q
        if e > r:
            continue
        if e == r:
            out.append((Fraction(p, q), 0))
            continue
        out.append((Fraction(p, q), -1))
        stack += [("exit", p, q), ("enter", p + q, q), ("enter", p, p + q)]
    return out


def farey_pair_denominators(r) -> Iterable[tuple[int, int]]:
    """Denominators (q, q') of Farey pairs in [0,1] with qq' <= r.

    Every Farey pair in [0,1] arises exactly once by repeated mediant
    subdivision of (0/1, 1/1), and subdivision increases qq'.
    """
    stack = [(1, 1)]
    while stack:
        q, q2 = stack.pop()
        if q * q2 > r:
            continue
        yield q, q2
        stack += [(q, q + q2), (q + q2, q2)]


def period_via_farey_pairs(r) -> int:
    total = 0
    for q, q2 in farey_pair_denominators(r):
        lt, eq = _lt_eq(q * q2, r)
        total += 2 if lt else (1 if eq else 0)
    return total


def mobius_sieve(n: int) -> list[int]:
    """Möbius function on 0..n by a linear sieve (mu[0] unused)."""
    mu = [0] * (n + 1)
    if n >= 1:
        mu[1] = 1
    primes = []
    composite = bytearray(n + 1)
    for i in range(2, n + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > n:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def squarefree_divisor_count_sum(n: int, mu: list[int] | None = None) -> int:
    """sum_{k<=n} mu(k)^2 floor(n/k): coprime pairs (a,b) with ab <= n."""
    if mu is None:
        mu = mobius_sieve(n)
    return sum(n // k for k in range(1, n + 1) if mu[k])


def ordered_factorizations_coprime(n: int) -> int:
    """#{(a,b) coprime : ab = n}, i.e. 2^(number of distinct primes of n)."""
    count, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            count *= 2
            while m % p == 0:
                m //= p
        p += 1
    return count * 2 if m > 1 else count


def period_asymptotics_report(R_list) -> list[dict]:
    """per(R) against its leading term 12/pi^2 R log R, with a sieve cross-check."""
    R_list = list(R_list)
    if any(R < 2 for R in R_list) or R_list != sorted(R_list):
        raise DomainError("R_list must be ascending with entries >= 2")
    top = math.floor(max(R_list)) if R_list else 0
    mu = mobius_sieve(top)
    rows = []
    for R in R_list:
        per = period_formula(R)
        if float(R).is_integer():
            n = int(R)
            below, ties = squarefree_divisor_count_sum(n - 1, mu), ordered_factorizations_coprime(n)
        else:
            below, ties = squarefree_divisor_count_sum(math.floor(R), mu), 0
        if per != 2 * below + ties:
            raise AssertionError(f"period count mismatch at R={R}")
        ratio = per * math.pi**2 / (12 * float(R) * math.log(R))
        rows.append({"R": R, "per": per, "pi_below": below, "ratio": ratio})
    return rows


@dataclass(frozen=True)
class CountStatistic:
    R: object
    region: Region
    count: int
    predicted: float

    @property
    def residual(self) -> float:
        return self.count - self.predicted


def orbit_points_in(R, regions: list[Region]) -> list[int]:
    """Count orbit_set(R) points in each region, streaming over the tree."""
    counts = [0] * len(regions)
    for x in iter_energy_bounded(R):
        a, b = x.numerator, x.denominator
        g = a / b
        rr = float(R) / (b * b)
        sheets = (0,) if a * b == R else (1, -1)
        for i, reg in enumerate(regions):
            if reg.g0 < g < reg.g1 and reg.r0 < rr < reg.r1:
                counts[i] += sum(1 for e in sheets if e in reg.eps)
    return counts


def count_statistics(R, regions: list[Region]) -> list[CountStatistic]:
    counts = orbit_points_in(R, regions)
    return [CountStatistic(R, reg, c, 3 / math.pi**2 * float(R) * nu_measure(reg))
            for reg, c in zip(regions, counts)]


def equidistribution_statistic(R, A: Region, B: Region) -> tuple[float, float]:
    """Ratio of orbit counts in A and B, and the predicted ratio nu(A)/nu(B)."""
    for reg in (A, B):
        if -1 in reg.eps:
            raise DomainError("regions must avoid the eps=-1 sheet")
    ca, cb = orbit_points_in(R, [A, B])
    if cb == 0:
        raise ZeroCount(f"no orbit points in the reference region at R={R}")
    return ca / cb, nu_measure(A) / nu_measure(B)


def write_statistics_csv(stats: list[CountStatistic], fh, region_ids=None) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["R", "region_id", "count", "predicted", "residual"])
    for i, st in enumerate(stats):
        rid = region_ids[i] if region_ids else i
        w.writerow([st.R, rid, st.count, repr(st.predicted), repr(st.residual)])

