from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_combos, brute_multiples
from zoll_ech.capseq import Scaled, ball_capacities, combos, dstar_capacities, ellipsoid_capacities
from zoll_ech.errors import DomainError, UnitError
from zoll_ech.exact import PI, ExactQuantity
from zoll_ech.obstruct import (
    EMBEDDINGS,
    VOLUMES,
    dominates,
    exact_volume_bound,
    gromov_width,
    gromov_width_capacity_bound,
    gromov_width_volume_bound,
    volume_from_capacities,
)

Q = ExactQuantity.parse
S2, RP2 = dstar_capacities("S2"), dstar_capacities("RP2")


def test_ball_just_above_two_pi_fails_at_three():
    res = dominates(ball_capacities(Q("201/100pi")), S2, 3)
    assert not res and res.k == 3
    assert str(res) == "fails_at k=3: 201/50pi > 4pi"


def test_reflexive():
    for seq in (S2, RP2, combos(2, 3)):
        assert dominates(seq, seq, 300)


def test_ellipsoid_into_sphere_bundle():
    assert dominates(ellipsoid_capacities(2 * PI, 4 * PI), S2, 500)


def test_units():
    with pytest.raises(UnitError):
        dominates(ball_capacities(7), S2, 10)
    res = dominates(ball_capacities(7), S2, 10, mixed_units=True)
    assert str(res) == "fails_at k=3: 14 > 4pi"
    with pytest.raises(DomainError):
        dominates(S2, S2, 0)


def test_transitive_chain():
    a, b, c = ball_capacities(PI), ellipsoid_capacities(2 * PI, 4 * PI), S2
    assert dominates(a, b, 300) and dominates(b, c, 300) and dominates(a, c, 300)


def test_capacity_bound_examples():
    assert gromov_width_capacity_bound(S2, 100) == (2 * PI, 3)
    assert gromov_width_capacity_bound(RP2, 100).value == 2 * PI
    assert gromov_width_capacity_bound(ball_capacities(Q("7/3")), 50).value == Q("7/3")


def test_capacity_bound_against_brute_force():
    unit = brute_combos(1, 1, 101)
    for seq, scale, j in ((S2, 2, 2), (RP2, 1, 4)):
        terms = brute_multiples(brute_combos(1, 1, 2000), j)[:101]
        best = min(Fraction(scale * terms[k]) / unit[k] for k in range(1, 101))
        assert gromov_width_capacity_bound(seq, 100).value == ExactQuantity(best, 1)


def test_capacity_bound_scale_equivariant():
    for lam in (Q("3/2"), Q("5")):
        assert gromov_width_capacity_bound(Scaled(S2, lam), 100).value == lam * gromov_width_capacity_bound(S2, 100).value


def test_bound_is_self_consistent():
    for seq in (S2, RP2):
        bound = gromov_width_capacity_bound(seq, 100).value
        assert dominates(ball_capacities(bound), seq, 100)


def test_volume_bound_examples():
    assert math.isclose(gromov_width_volume_bound(VOLUMES["RP2"]), 2 * math.pi, rel_tol=1e-15)
    assert math.isclose(gromov_width_volume_bound(VOLUMES["S2"]), 2 * math.sqrt(2) * math.pi, rel_tol=1e-15)
    assert math.isclose(gromov_width_volume_bound(Fraction(9, 2)), 3.0)
    assert exact_volume_bound(VOLUMES["RP2"]) == 2 * PI
    assert exact_volume_bound(VOLUMES["S2"]) is None
    with pytest.raises(DomainError):
        gromov_width_volume_bound(0)


def test_widths():
    s2, rp2 = gromov_width("S2"), gromov_width("RP2")
    assert s2.value == rp2.value == 2 * PI
    assert s2.upper == s2.lower and rp2.upper == rp2.lower
    assert s2.upper_k == 3 and s2.upper_method == "capacity"
    assert rp2.upper_method == "volume"
    assert s2.lines()[1] == "upper: c_3 ratio at k=3"
    with pytest.raises(DomainError):
        gromov_width("T2")


def test_registry_targets():
    assert {e.target for e in EMBEDDINGS} == {"S2", "RP2"}
    assert all(e.params for e in EMBEDDINGS)


@pytest.mark.parametrize("seq, target, tol", [(S2, 4 * math.pi**2, 0.05), (RP2, 2 * math.pi**2, 0.05), (ball_capacities(1), 0.5, 0.05)])
def test_volume_asymptotics_at_ten_thousand(seq, target, tol):
    assert abs(volume_from_capacities(seq, 10**4) - target) <= tol * target


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=20).filter(lambda f: f > 0))
def test_ball_dominance_threshold(a):
    # c_3(B(a pi)) = 2 a pi against 4pi
    res = dominates(ball_capacities(ExactQuantity(a, 1)), S2, 50)
    assert bool(res) == (a <= 2)
