from fractions import Fraction as F

import pytest

from horoflow.bcz import (
    OmegaPoint, bcz_json, bcz_orbit, bcz_step, embed_alpha_beta, farey_orbit, farey_sequence,
    nonperiodic_passage_predicate, passage_point, tilde_farey, tilde_farey_size, totient_sum,
)
from horoflow.errors import DomainError, NotAPassage
from horoflow.horocycle import WPoint
from horoflow.periodic import orbit_set


def test_omega_point_validation():
    with pytest.raises(DomainError):
        OmegaPoint(F(1, 2), F(1, 2))
    with pytest.raises(DomainError):
        OmegaPoint(F(3, 2), F(1, 2))


def test_bcz_step():
    assert bcz_step(OmegaPoint(F(1, 3), 1)) == OmegaPoint(1, F(2, 3))
    assert bcz_step(OmegaPoint(1, F(2, 3))) == OmegaPoint(F(2, 3), 1)
    assert bcz_step(OmegaPoint(1, 1)) == OmegaPoint(1, 1)


def test_farey_sequence():
    fs = farey_sequence(3)
    assert fs.fractions == (0, F(1, 3), F(1, 2), F(2, 3), 1) and fs.N == 4
    assert farey_sequence(1).fractions == (0, 1) and farey_sequence(1).N == 1
    for Q in range(1, 101):
        brute = sorted({F(p, q) for q in range(1, Q + 1) for p in range(q + 1)})
        assert list(farey_sequence(Q).fractions) == brute


@pytest.mark.parametrize("Q", [2, 3, 7, 30, 61])
def test_orbit_visits_farey_denominators(Q):
    orbit = bcz_orbit(OmegaPoint(F(1, Q), 1))
    assert orbit == farey_orbit(Q)
    assert len(orbit) == farey_sequence(Q).N


def test_tilde_farey():
    assert tilde_farey(3) == {(1, 1), (1, 2), (1, 3), (2, 1)}
    assert tilde_farey(2) == {(1, 1), (1, 2)}
    for Q in range(2, 80):
        assert len(tilde_farey(Q)) == tilde_farey_size(Q) == farey_sequence(Q).N == totient_sum(Q)


def test_passage_point():
    assert passage_point(1, 1, 5) == OmegaPoint(F(1, 5), 1)
    assert passage_point(2, 1, 3) == OmegaPoint(1, F(2, 3))
    with pytest.raises(NotAPassage):
        passage_point(2, 2, 5)
    for Q in range(2, 31):
        passages = {passage_point(a, b, Q) for a, b in tilde_farey(Q)}
        assert passages == set(farey_orbit(Q))


def test_embed_alpha_beta():
    assert embed_alpha_beta(OmegaPoint(1, 1)) == (1, 1)
    assert embed_alpha_beta(OmegaPoint(F(1, 2), 1)) == (1, 4)
    assert embed_alpha_beta(OmegaPoint(F(2, 3), F(3, 5))) == (F(9, 10), F(9, 4))
    for p in farey_orbit(12):
        assert embed_alpha_beta(p)[1] >= 1


def test_predicate():
    assert nonperiodic_passage_predicate(WPoint(F(1, 2), F(3, 4), 1))
    assert not nonperiodic_passage_predicate(WPoint(F(1, 2), F(1, 4) + F(1, 2), -1))
    assert not nonperiodic_passage_predicate(WPoint(F(1, 4), F(1, 3), 1))


@pytest.mark.parametrize("Q", range(2, 13))
def test_predicate_marks_passages_on_closed_horocycle(Q):
    r = F(Q * Q, 2)
    marked = {(p.gamma.numerator, p.gamma.denominator) for p in orbit_set(r)
              if nonperiodic_passage_predicate(p)}
    assert marked == tilde_farey(Q)
    for p in orbit_set(r):
        if nonperiodic_passage_predicate(p):
            assert p.r == r / p.gamma.denominator ** 2


def test_bcz_json():
    assert bcz_json(3) == ('{"Q": 3, "N": 4, "orbit": [["1/3", "1/1"], ["1/1", "2/3"], '
                           '["2/3", "1/1"], ["1/1", "1/3"]]}')
