from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import GRADINGS, brute_generators
from zoll_ech.capseq import ball_capacities, dstar_capacities
from zoll_ech.errors import DomainError, GradingUndefinedError, HomologyMismatchError
from zoll_ech.exact import PI
from zoll_ech.zollcx import (
    MODELS,
    S3,
    SSTAR_RP2,
    SSTAR_S2,
    OrbitSet,
    action,
    closed_form_index,
    cz_total,
    ech_index,
    generators_by_grading,
    get_model,
    grading,
    homology_class,
    index_components,
    spectrum,
    u_map,
)

ALL = [S3, SSTAR_S2, SSTAR_RP2]


def test_orbit_set_parsing_and_names():
    assert OrbitSet.of("2,1") == OrbitSet(2, 1)
    assert OrbitSet.of((0, 3)) == OrbitSet(0, 3)
    assert str(OrbitSet(0, 0)) == "1"
    assert str(OrbitSet(2, 1)) == "g1^2 g2"
    with pytest.raises(DomainError):
        OrbitSet(-1, 0)
    with pytest.raises(DomainError):
        OrbitSet.of("a,b")


def test_model_aliases():
    assert get_model("sstar-s2") is SSTAR_S2
    assert get_model("S3") is S3
    with pytest.raises(DomainError):
        get_model("t3")


def test_homology_class_examples():
    assert homology_class(SSTAR_S2, (1, 1)) == 0
    assert homology_class(SSTAR_RP2, (3, 1)) == 0
    assert homology_class(S3, (7, 5)) == 0
    assert homology_class(SSTAR_RP2, (1, 1)) == 2


def test_cz_total_examples():
    assert cz_total(SSTAR_S2, (2, 0)) == 4
    assert cz_total(S3, (1, 1)) == 8
    for m in ALL:
        assert cz_total(m, (0, 0)) == 0


def test_index_components_examples():
    p = index_components(SSTAR_S2, (2, 0), (0, 0))
    assert (p.chern_term, p.self_intersection_term) == (0, -2)
    p = index_components(SSTAR_RP2, (4, 0), (0, 0))
    assert (p.chern_term, p.self_intersection_term) == (-2, -12)
    for m in ALL:
        p = index_components(m, (3, 1), (3, 1))
        assert (p.chern_term, p.self_intersection_term, p.total) == (0, 0, 0)


def test_index_examples():
    assert ech_index(SSTAR_S2, (2, 0), (0, 0)) == 2
    assert ech_index(SSTAR_S2, (1, 1), (2, 0)) == 2
    assert ech_index(SSTAR_RP2, (0, 4), (4, 0)) == 8


def test_homology_mismatch():
    with pytest.raises(HomologyMismatchError):
        index_components(SSTAR_S2, (1, 0), (0, 0))
    with pytest.raises(HomologyMismatchError):
        ech_index(SSTAR_RP2, (2, 0), (1, 0))


def test_grading_examples():
    assert grading(SSTAR_S2, (1, 1)) == 4
    assert grading(SSTAR_RP2, (4, 0)) == 2
    assert grading(S3, (0, 1)) == 4
    with pytest.raises(GradingUndefinedError):
        grading(SSTAR_S2, (1, 0))


def test_action_examples():
    assert action(SSTAR_S2, (1, 1)) == 4 * PI
    assert action(SSTAR_RP2, (3, 1)) == 4 * PI
    for m in ALL:
        assert action(m, (0, 0)) == 0


def test_generator_lists():
    assert generators_by_grading(SSTAR_S2, 6) == [OrbitSet(*t) for t in [(0, 0), (2, 0), (1, 1), (0, 2)]]
    assert generators_by_grading(SSTAR_RP2, 10) == [OrbitSet(*t) for t in [(0, 0), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]]
    assert generators_by_grading(S3, 4) == [OrbitSet(*t) for t in [(0, 0), (1, 0), (0, 1)]]
    with pytest.raises(DomainError):
        generators_by_grading(S3, 3)


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_generators_match_box_enumeration(model):
    got = [tuple(a) for a in generators_by_grading(model, 400)]
    assert got == brute_generators(model.name, 400)
    assert [grading(model, a) for a in got] == list(range(0, 401, 2))


def test_u_map_examples():
    assert u_map(SSTAR_S2, (1, 1)) == OrbitSet(2, 0)
    assert u_map(SSTAR_S2, (2, 0)) == OrbitSet(0, 0)
    assert u_map(SSTAR_RP2, (4, 0)) == OrbitSet(0, 0)
    assert u_map(S3, (2, 0)) == OrbitSet(0, 1)
    with pytest.raises(DomainError):
        u_map(S3, (0, 0))
    with pytest.raises(GradingUndefinedError):
        u_map(SSTAR_S2, (1, 0))


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_u_map_walks_down_the_grading_order(model):
    gens = generators_by_grading(model, 400)
    for k in range(1, len(gens)):
        assert u_map(model, gens[k]) == gens[k - 1]


def test_u_map_iterates_to_empty():
    for model in ALL:
        for alpha in generators_by_grading(model, 60):
            steps, cur = 0, alpha
            while not cur.is_empty():
                cur = u_map(model, cur)
                steps += 1
            assert steps == grading(model, alpha) // 2


def test_spectrum_examples():
    assert spectrum(SSTAR_S2, 5) == [0, 4 * PI, 4 * PI, 4 * PI, 8 * PI]
    assert spectrum(S3, 6) == [0, 1, 1, 2, 2, 2]
    assert spectrum(SSTAR_RP2, 6) == [0] + [4 * PI] * 5


def test_spectrum_matches_capacity_formula():
    assert spectrum(S3, 1000) == ball_capacities(1).prefix(1000)
    assert spectrum(SSTAR_S2, 1000) == dstar_capacities("S2").prefix(1000)
    assert spectrum(SSTAR_RP2, 1000) == dstar_capacities("RP2").prefix(1000)


def _class_pairs(model, bound):
    orbit_sets = [OrbitSet(a, b) for a in range(bound + 1) for b in range(bound + 1)]
    by_class = {}
    for o in orbit_sets:
        by_class.setdefault(homology_class(model, o), []).append(o)
    return by_class


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_assembly_parity_and_grading_difference(model):
    rng = random.Random(7)
    fn, _ = GRADINGS[model.name]
    by_class = _class_pairs(model, 40)
    for cls, members in by_class.items():
        pairs = [(a, b) for a in members[::7] for b in members[::11]]
        pairs += [tuple(rng.sample(members, 2)) for _ in range(300)]
        for a, b in pairs:
            parts = index_components(model, a, b)
            assert parts.total == closed_form_index(model, a, b) == ech_index(model, a, b)
            assert parts.total.denominator == 1 and parts.total.numerator % 2 == 0
            if cls == 0:
                assert parts.total == fn(*a) - fn(*b)


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_additivity_on_all_triples(model):
    for members in _class_pairs(model, 12).values():
        table = np.array([[ech_index(model, a, b) for b in members] for a in members])
        # I(a, b) + I(b, c) == I(a, c) for every triple at once
        assert np.array_equal(table[:, :, None] + table[None, :, :], np.broadcast_to(table[:, None, :], (len(members),) * 3))


orbit = st.tuples(st.integers(0, 40), st.integers(0, 40))


@given(st.sampled_from(ALL), orbit, orbit)
def test_index_antisymmetric(model, a, b):
    if homology_class(model, a) == homology_class(model, b):
        assert ech_index(model, a, b) == -ech_index(model, b, a)


@given(st.sampled_from(ALL), orbit)
def test_grading_even_and_nonnegative(model, a):
    if homology_class(model, a) == 0:
        g = grading(model, a)
        assert g >= 0 and g % 2 == 0
        if a != (0, 0):
            assert grading(model, u_map(model, a)) == g - 2


def test_model_table():
    assert set(MODELS) == {"S3", "SstarS2", "SstarRP2"}
    assert SSTAR_RP2.grading_form == (Fraction(1, 4), Fraction(-1, 2), Fraction(3, 2))
