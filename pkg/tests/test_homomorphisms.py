from __future__ import annotations

import numpy as np
import pytest

from rotary_px_maps.algebra.dihedral_irr import enumerate_irr
from rotary_px_maps.core.config import Budgets
from rotary_px_maps.core.errors import BudgetExceededError, StructuralError
from rotary_px_maps.groups.affine_group import (
    AffineGroup,
    enumerate_rotary_pairs,
    expected_orbit_count,
    structural_automorphism_count,
)
from rotary_px_maps.groups.homomorphisms import (
    AutoMap,
    automorphism_count,
    count_orbits_on_pairs,
    group_homomorphism,
    group_isomorphism,
    spanning_words,
)

from conftest import group_of


def test_spanning_words_reach_every_element(d8_r13):
    pair = enumerate_rotary_pairs(d8_r13)[0]
    words = spanning_words(d8_r13, [pair.rho, pair.tau])
    assert sum(layer.size for layer in words.layers) == d8_r13.order - 1
    assert (words.parent[1:] >= 0).all()


def test_identity_map_is_an_isomorphism(d8_r13):
    pair = enumerate_rotary_pairs(d8_r13)[5]
    f = group_isomorphism(d8_r13, [pair.rho, pair.tau], d8_r13, [pair.rho, pair.tau])
    assert f is not None
    assert np.array_equal(f, np.arange(d8_r13.order))


@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (7, 3)])
def test_automorphisms_match_structure(p, r):
    for cls in enumerate_irr(p, r):
        G = AffineGroup.from_classes([cls], p, r)
        assert automorphism_count(G) == structural_automorphism_count(G), cls.signature


@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (5, 4)])
def test_orbits_on_pairs(p, r):
    for cls in enumerate_irr(p, r):
        G = AffineGroup.from_classes([cls], p, r)
        oc = count_orbits_on_pairs(G)
        assert oc.semiregular
        assert oc.orbits == expected_orbit_count(cls, p, r), cls.signature


@pytest.mark.slow
def test_orbits_on_pairs_fused_pair_classes():
    G = group_of(11, 5, "P{1}")
    oc = count_orbits_on_pairs(G)
    assert oc.orbits == 2


def test_quotient_onto_dihedral_is_a_homomorphism():
    # Z_3 x D_24 maps onto D_24 by forgetting the trivial coordinate
    big = group_of(3, 4, "L(+,+)", "L(-,-)")
    small = group_of(3, 4, "L(-,-)")
    rho_b = big.elem((1, 1), 1, 1)
    tau_b = big.elem((0, 0), 0, 1)
    rho_s = small.elem((1,), 1, 1)
    tau_s = small.elem((0,), 0, 1)
    assert group_homomorphism(big, [rho_b, tau_b], small, [rho_s, tau_s]) is not None
    assert group_isomorphism(big, [rho_b, tau_b], small, [rho_s, tau_s]) is None


def test_search_budget():
    G = group_of(3, 4, "R{1,3}", budgets=Budgets(max_search_work=1000))
    with pytest.raises(BudgetExceededError):
        count_orbits_on_pairs(G)


def test_auto_map_expands_lazily(d8_r13):
    pair = enumerate_rotary_pairs(d8_r13)[0]
    gens = (pair.rho, pair.tau)
    ident = AutoMap(d8_r13, gens, d8_r13, gens)
    assert ident.expanded is None
    assert ident.is_bijective
    assert np.array_equal(ident.table, np.arange(d8_r13.order))
    g = d8_r13.mul(pair.rho, pair.tau)
    assert ident(g) == g

    one = d8_r13.identity
    trivial = AutoMap(d8_r13, gens, d8_r13, (one, one))
    assert not trivial.is_bijective
    assert trivial(g) == one

    broken = AutoMap(d8_r13, gens, d8_r13, (d8_r13.mul(pair.rho, pair.tau), pair.tau))
    with pytest.raises(StructuralError):
        broken.table
