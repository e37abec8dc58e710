from __future__ import annotations
import random

import numpy as np
import pytest

from rotary_px_maps.algebra import modp
from rotary_px_maps.algebra.dihedral_irr import (
    AutD,
    DihedralSpec,
    FaithfulDegree,
    MatrixRep,
    all_aut_d,
    allowed_classes,
    aut_action,
    aut_orbit,
    aut_stabilizer_size,
    count_multiplicity_free,
    enumerate_irr,
    faithful_degree,
    frame_automorphism,
    frobenius_sign_variants_isomorphic,
    identify_class,
    intertwiner_space,
    multiplicity_free_reps,
    parse_signature,
    parse_signature_list,
    realize,
    reps_isomorphic,
    sign_table,
    wedderburn_dimension,
)
from rotary_px_maps.core.errors import ParameterDomainError

from conftest import grid_pairs


@pytest.mark.parametrize("p,r", grid_pairs())
def test_wedderburn_dimension(p, r):
    assert wedderburn_dimension(p, r) == 2 * r


@pytest.mark.parametrize("p,r", grid_pairs())
def test_faithful_classes_match_degree_formula(p, r):
    fd = faithful_degree(p, r)
    faithful = [c for c in enumerate_irr(p, r) if c.is_faithful]
    assert len(faithful) == fd.count
    assert {c.degree for c in faithful} == {fd.deg}


@pytest.mark.parametrize(
    "p,r,degrees",
    [(13, 7, [1, 1, 2, 2, 2]), (3, 5, [1, 1, 4]), (3, 4, [1, 1, 1, 1, 2]), (11, 5, [1, 1, 2, 2])],
)
def test_degrees(p, r, degrees):
    assert [c.degree for c in enumerate_irr(p, r)] == degrees


def test_faithful_degree_examples():
    assert faithful_degree(13, 7) == FaithfulDegree(d=2, deg=2, count=3)
    assert faithful_degree(3, 5) == FaithfulDegree(d=4, deg=4, count=1)
    fd = faithful_degree(11, 5)
    assert (fd.deg, fd.count) == (2, 2)


def test_signatures_round_trip():
    for p, r in [(3, 4), (13, 7), (11, 5), (7, 6)]:
        for c in enumerate_irr(p, r):
            assert parse_signature(c.signature, p, r) == c


def test_signature_errors():
    with pytest.raises(ParameterDomainError):
        parse_signature("Q{1}", 3, 4)
    with pytest.raises(ParameterDomainError):
        parse_signature("L(-,+)", 3, 5)
    with pytest.raises(ParameterDomainError):
        parse_signature("R{1}", 11, 5)
    with pytest.raises(ParameterDomainError):
        parse_signature_list("L(+,+) junk", 3, 4)


def test_signature_list():
    got = parse_signature_list("P{1},P{2}", 11, 5)
    assert [c.signature for c in got] == ["P{1}", "P{2}"]
    got = parse_signature_list("L(+,+), R{1,3}", 3, 4)
    assert [c.degree for c in got] == [1, 2]


@pytest.mark.parametrize("p,r", [(3, 4), (13, 7), (3, 5), (11, 5), (7, 6), (5, 8), (3, 8)])
def test_realizations_are_identified(p, r):
    for c in enumerate_irr(p, r):
        rep = realize(c, p, r)
        assert rep.satisfies_relations(r)
        assert rep.degree == c.degree
        assert identify_class(rep.mat_c, rep.mat_b, p, r) == c


@pytest.mark.parametrize("p,r", [(3, 4), (13, 7), (3, 5), (11, 5)])
def test_endomorphism_dimension(p, r):
    for c in enumerate_irr(p, r):
        rep = realize(c, p, r)
        assert len(intertwiner_space(rep, rep)) == c.end_degree


def test_conjugated_rep_is_isomorphic():
    p, r = 3, 5
    cls = parse_signature("R{1,2,3,4}", p, r)
    rep = realize(cls, p, r)
    rng = random.Random(3)
    while True:
        T = np.array([[rng.randrange(p) for _ in range(4)] for _ in range(4)], dtype=np.int64)
        if modp.is_invertible(T, p):
            break
    Ti = modp.inverse(T, p)
    conj = MatrixRep(
        modp.matmul(modp.matmul(T, rep.mat_c, p), Ti, p),
        modp.matmul(modp.matmul(T, rep.mat_b, p), Ti, p),
        p,
    )
    assert reps_isomorphic(rep, conj)
    other = realize(parse_signature("L(+,+)", p, r), p, r)
    assert not reps_isomorphic(rep, other)


def test_frobenius_sign_variants():
    for p, r, sig in [(13, 7, "R{1,6}"), (3, 5, "R{1,2,3,4}"), (3, 4, "R{1,3}")]:
        assert frobenius_sign_variants_isomorphic(parse_signature(sig, p, r), p, r)
    with pytest.raises(ParameterDomainError):
        frobenius_sign_variants_isomorphic(parse_signature("P{1}", 11, 5), 11, 5)


def test_linear_orbit_fuses_at_even_r():
    lpm = parse_signature("L(+,-)", 3, 4)
    lmp = parse_signature("L(-,+)", 3, 4)
    assert aut_action(AutD(1, 1, 4), lpm) == lmp
    assert aut_orbit(lpm, 3, 4) == frozenset({lpm, lmp})
    assert aut_orbit(parse_signature("L(-,-)", 3, 4), 3, 4) == frozenset({parse_signature("L(-,-)", 3, 4)})


def test_faithful_orbit_at_13_7():
    r16 = parse_signature("R{1,6}", 13, 7)
    orbit = aut_orbit(r16, 13, 7)
    assert {c.signature for c in orbit} == {"R{1,6}", "R{2,5}", "R{3,4}"}
    assert aut_stabilizer_size(r16, 13, 7) == 14


def test_pair_orbit_at_11_5():
    assert {c.signature for c in aut_orbit(parse_signature("P{1}", 11, 5), 11, 5)} == {"P{1}", "P{2}"}


def test_aut_action_is_a_right_action():
    p, r = 7, 6
    auts = all_aut_d(r)
    for cls in enumerate_irr(p, r):
        for s in auts[::5]:
            for t in auts[::7]:
                assert aut_action(s.compose(t), cls) == aut_action(t, aut_action(s, cls))


def test_frame_automorphism():
    sigma = frame_automorphism(2, 1, 4)
    assert sigma.apply((1, 1)) == (2, 1)
    assert sigma.apply((0, 1)) == (1, 1)
    with pytest.raises(ParameterDomainError):
        frame_automorphism(2, 0, 4)


def test_multiplicity_free_subsets():
    subsets = multiplicity_free_reps(3, 4, 2)
    assert len(subsets) == 4 == count_multiplicity_free(3, 4, 2)
    assert all("L(-,+)" not in [c.signature for c in s] for s in subsets)
    assert [len(multiplicity_free_reps(3, 5, k)) for k in (2, 3, 4, 5)] == [1, 0, 1, 2]
    assert len(allowed_classes(3, 4)) == 4


def test_dihedral_group_conventions():
    d = DihedralSpec(6)
    assert d.order == 12 and len(d.elements()) == 12
    # a = c b is a reflection and c = a b
    assert d.element_order(d.a) == 2
    assert d.mul(d.a, d.b) == (1, 0)
    for x in d.elements():
        assert d.mul(x, d.inv(x)) == (0, 0)
    assert d.element_order((2, 0)) == 3
    with pytest.raises(ParameterDomainError):
        DihedralSpec(2)


def test_sign_table_and_mat_a():
    table = sign_table(3, 4)
    assert table["gamma(1,-1)"] == {"a": 1, "b": -1, "c": -1}
    assert table["gamma(-1,-1)"] == {"a": -1, "b": -1, "c": 1}
    for p, r in [(3, 4), (13, 7), (11, 5)]:
        for cls in enumerate_irr(p, r):
            rep = realize(cls, p, r)
            assert np.array_equal(modp.matmul(rep.mat_a, rep.mat_a, p), modp.identity(cls.degree))
            if cls.is_linear:
                assert int(rep.mat_a[0, 0]) == cls.sign_a % p


@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (13, 7), (3, 8), (7, 5)])
def test_reflection_eigenspaces_split_evenly(p, r):
    for cls in enumerate_irr(p, r):
        if cls.degree < 2:
            continue
        rep = realize(cls, p, r)
        n = rep.degree
        eye = modp.identity(n)
        for i in range(r):
            m = rep.matrix(i, 1)
            plus = modp.nullspace((m - eye) % p, p)
            minus = modp.nullspace((m + eye) % p, p)
            assert plus.shape[0] == minus.shape[0] == n // 2, (cls.signature, i)
