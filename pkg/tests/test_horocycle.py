import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate

from horoflow.checks import random_section_points
from horoflow.errors import DomainError, EmptyRegion
from horoflow.exact import coding_of_rational, deformation_factor, mobius_apply
from horoflow.horocycle import (
    ROWS, PslMatrix, Region, Row, SuspensionPoint, WPoint, apply_word_action,
    chart_to_upper_half_plane, classify, classify_arrays, lift, nu_measure, nu_rectangle,
    nu_trapezoid, return_time, return_time_matrix, section_xi, step, step_arrays, step_inverse,
    suspension_step, uv_delta,
)

ORBIT_2 = [WPoint(1, 2, -1), WPoint(F(1, 2), F(1, 2), 0), WPoint(2, 2, 0), WPoint(1, 2, 1)]


@pytest.fixture(scope="module")
def sample():
    return random_section_points(3000, 11)


def test_wpoint_invariants():
    with pytest.raises(DomainError):
        WPoint(1, 2, 0)
    with pytest.raises(DomainError):
        WPoint(2, 1, 1)
    with pytest.raises(DomainError):
        WPoint(1, 1, -1)
    with pytest.raises(DomainError):
        WPoint(1, 2, 3)
    assert WPoint(F(1, 2), F(3, 4), 1).exact
    assert not WPoint(0.5, 0.75, 1).exact


def test_classify_examples():
    assert classify(WPoint(1, 2, -1)) is Row.M_LEFT_TANGENT
    assert classify(WPoint(1, 1, 0)) is Row.Z_ONE
    assert classify(WPoint(F(1, 3), F(1, 4) + F(1, 3), 1)) is Row.P_LEFT


def test_step_examples():
    assert step(WPoint(1, 2, -1)).image == WPoint(F(1, 2), F(1, 2), 0)
    assert step(WPoint(1, 1, 0)).image == WPoint(1, 1, 0)
    assert step(WPoint(2, 2, 0)).image == WPoint(1, 2, 1)


def test_step_left_strip_formula():
    # gamma < 1, r < 1 - gamma on the + sheet: (g/(1-g), r/(1-g)^2, +1)
    g, r = F(1, 5), F(1, 2)
    assert step(WPoint(g, r, 1)).image == WPoint(g / (1 - g), r / (1 - g) ** 2, 1)


def test_step_inverse_examples():
    assert step_inverse(WPoint(F(1, 2), F(1, 2), 0)) == WPoint(1, 2, -1)
    assert step_inverse(WPoint(1, 1, 0)) == WPoint(1, 1, 0)


def test_step_inverse_roundtrip(sample):
    for p in sample:
        q = step(p).image
        assert step_inverse(q) == p
        assert step(step_inverse(p)).image == p


def test_every_row_sampled(sample):
    assert {classify(p) for p in sample} == set(ROWS)


def test_lemma_relation_exact(sample):
    for p in sample:
        st = step(p)
        g2 = mobius_apply(st.matrix, p.gamma)
        assert st.image.gamma == g2
        # also on tangency rows the radius rule lands exactly on r' = gamma'
        assert st.image.r == deformation_factor(st.matrix, p.gamma) * p.r
        assert st.image.eps == st.branch.image_eps


def test_classify_matches_vectorized(sample):
    rng = np.random.default_rng(5)
    g = np.exp(rng.uniform(-4, 3, 10**5))
    r = g * np.exp(rng.uniform(1e-6, 4, g.size))
    for e in (1, -1):
        codes = classify_arrays(g, r, np.full(g.size, e))
        for i in rng.choice(g.size, 500, replace=False):
            assert ROWS[codes[i]] is classify(WPoint(g[i], r[i], e))
        g2, r2, e2 = step_arrays(g, r, np.full(g.size, e))
        for i in rng.choice(g.size, 200, replace=False):
            img = step(WPoint(g[i], r[i], e)).image
            assert (img.gamma, img.r, img.eps) == pytest.approx((g2[i], r2[i], e2[i]), rel=1e-12)
    pts = [p.to_float() for p in sample]
    codes = classify_arrays([p.gamma for p in pts], [p.r for p in pts], [p.eps for p in pts])
    assert (codes >= 0).all()


def test_float_boundary_flag():
    p = WPoint(1 / 3, 2 / 3 + 1e-15, 1)
    st = step(p)
    assert st.boundary and st.branch is Row.P_TANGENT
    assert not step(WPoint(0.3, 0.9, 1)).boundary


def _word_region_rs(g):
    crit = sorted({g * (1 + g), 1 + g, 1 - g})
    cands = set(crit) | {(a + b) / 2 for a, b in zip(crit, crit[1:])} | {crit[-1] + 3}
    cands |= {(g + crit[0]) / 2}
    return [r for r in cands if r > g]


def test_word_action_column():
    seen = set()
    for p in range(1, 80):
        for q in range(1, 80 - p + 1):
            if math.gcd(p, q) != 1:
                continue
            g = F(p, q)
            pts = [WPoint(g, g, 0)] + [WPoint(g, r, e) for r in _word_region_rs(g) for e in (1, -1)]
            for pt in pts:
                st = step(pt)
                seen.add(st.branch)
                want = apply_word_action(st.word_action, coding_of_rational(g))
                assert coding_of_rational(st.image.gamma) == want, (pt, st.branch)
    assert seen == set(ROWS)


def test_non_cohomology_witness():
    g, r = F(1, 3), F(1, 2)
    assert (1 - g) * (1 - 2 * g) < r < 1 - g
    img = step(WPoint(g, r, 1)).image
    assert img.eps == 1 and img.r > 1 - img.gamma
    assert img.r == r / (1 - g) ** 2


def test_uv_delta():
    assert uv_delta(WPoint(1, 1, 0)) == (0, 0, 1)
    u, v, d = uv_delta(WPoint(1, 2, -1))
    assert (u, v, d) == pytest.approx((math.sqrt(3), -2, 0))
    u, v, d = uv_delta(WPoint(1, 2, 1))
    assert (u, v, d) == pytest.approx((-math.sqrt(3), 2, 0))


def test_return_time_examples():
    assert return_time(WPoint(1, 1, 0)) == pytest.approx(-2)
    assert return_time_matrix(WPoint(1, 1, 0)) == pytest.approx(-2)
    assert sum(return_time(p) for p in ORBIT_2) == pytest.approx(-4)
    assert return_time_matrix(WPoint(1, 2, -1)) == pytest.approx(return_time(WPoint(1, 2, -1)))


def test_return_time_matches_matrix_oracle(sample):
    for p in sample:
        s = return_time(p)
        assert s < 0
        assert s == pytest.approx(return_time_matrix(p), abs=1e-9)


def test_return_time_geometric_oracle(sample):
    # flowing the section point by s lands, after applying the row matrix, on the image section point
    for p in sample[:600]:
        st = step(p)
        x, y, _ = chart_to_upper_half_plane(p, section_xi(p) + return_time(p))
        z = PslMatrix.from_mat2z(st.matrix).apply(complex(x, y))
        x2, y2, _ = chart_to_upper_half_plane(st.image, section_xi(st.image))
        assert z.real == pytest.approx(x2, abs=1e-8) and z.imag == pytest.approx(y2, rel=1e-8)


def test_lift():
    m = lift(WPoint(1, 1, 0))
    h = 1 / math.sqrt(2)
    assert m.as_tuple() == pytest.approx((h, -h, h, h))
    rng = np.random.default_rng(0)
    for _ in range(10**4):
        g = float(np.exp(rng.uniform(-5, 5)))
        r = g * float(np.exp(rng.uniform(0, 5)))
        assert lift(WPoint(g, r, int(rng.choice([1, -1])))).det == pytest.approx(1, abs=1e-12)


def test_chart():
    p = WPoint(F(3, 2), 4, 1)
    x, y, th = chart_to_upper_half_plane(p, 0.0)
    assert (x, y, th) == (1.5, 8.0, -math.pi)
    rng = np.random.default_rng(2)
    for xi in rng.normal(0, 5, 1000):
        x, y, _ = chart_to_upper_half_plane(p, xi)
        assert (x - 1.5) ** 2 + (y - 4) ** 2 == pytest.approx(16, abs=1e-12)
    x, y, _ = chart_to_upper_half_plane(p, 1e9)
    assert x == pytest.approx(1.5) and y == pytest.approx(0, abs=1e-12)


def test_suspension_step():
    sp = SuspensionPoint(WPoint(1, 1, 0), 0.0)
    assert suspension_step(sp, 0.0) == sp
    assert suspension_step(sp, -2.0) == sp
    start = SuspensionPoint(WPoint(1, 2, -1), 0.0)
    assert suspension_step(start, -4.0) == start
    mid = suspension_step(start, -1.0)
    assert mid.base == WPoint(F(1, 2), F(1, 2), 0)
    assert suspension_step(mid, 1.0) == start
    with pytest.raises(DomainError):
        SuspensionPoint(WPoint(1, 1, 0), -3.0)


def test_nu_measure():
    assert nu_measure(Region(0, 1, 1, 2)) == pytest.approx(0.5)
    assert nu_rectangle(0, 1, 1, 2) == 0.5
    assert nu_trapezoid(0.5, 1, 2) == pytest.approx(math.log(2) - 0.25)
    # the trapezoid as a region: gamma in (1/2, 2), r in (1, 2), r > gamma
    assert nu_measure(Region(F(1, 2), 2, 1, 2)) == pytest.approx(
        nu_rectangle(0.5, 1, 1, 2) + math.log(2) - 0.5)
    assert nu_measure(Region(0, 1, 1, 2, {1, -1})) == pytest.approx(1.0)
    assert nu_measure(Region(0, 1, 1, 2, {0})) == 0
    with pytest.raises(EmptyRegion):
        nu_measure(Region(3, 4, 1, 2))


@pytest.mark.parametrize("box", [(0.2, 1.3, 0.5, 2.0), (1, 3, 2, 5), (0.1, 0.4, 1, 7), (0.5, 4, 0.6, 3)])
def test_nu_measure_quadrature(box):
    g0, g1, r0, r1 = box
    val = integrate.dblquad(lambda r, g: 1 / r**2, g0, g1, lambda g: max(r0, g), lambda g: max(r1, g),
                            epsabs=1e-12, epsrel=1e-11)[0]
    assert nu_measure(Region(*box)) == pytest.approx(val, abs=1e-8)
