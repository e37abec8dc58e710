from __future__ import annotations
import random
from itertools import product

import numpy as np
import pytest

from rotary_px_maps.algebra import modp
from rotary_px_maps.algebra.dihedral_irr import (
    MatrixRep,
    allowed_classes,
    identify_class,
    multiplicity_free_reps,
    parse_signature,
    realize,
    reps_isomorphic,
)
from rotary_px_maps.census.census import realize_subset
from rotary_px_maps.core.errors import ParameterDomainError, StructuralError
from rotary_px_maps.graphs.pxgraph import PXParams, build_px, complete_bipartite, isomorphic
from rotary_px_maps.groups.affine_group import AffineGroup, RotaryPair, enumerate_rotary_pairs
from rotary_px_maps.maps.rotamap import (
    build_map,
    canonical_class,
    construct_rotary,
    decompose,
    direct_product,
    euler_characteristic,
    homomorphism_exists,
    map_counts,
    maps_isomorphic,
    quotient_map,
    read_map_record,
    underlying_graph,
    write_map_record,
)

from conftest import group_of


def _expected_graph(cls, p, r):
    if cls.is_linear:
        delta = -1 if (cls.sign_a, cls.sign_b) == (-1, -1) else 1
        return build_px(PXParams(p, r, 0, delta))
    return build_px(PXParams(p, r, cls.degree - 1))


@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (3, 5), (7, 3)])
def test_irreducible_maps_have_px_graphs(p, r):
    for cls in allowed_classes(p, r):
        pair = construct_rotary(AffineGroup.from_classes([cls], p, r))
        cmap = build_map(pair)
        counts = map_counts(pair)
        assert (cmap.n_vertices, cmap.n_edges, cmap.n_faces) == (counts["V"], counts["E"], counts["F"])
        graph = underlying_graph(cmap)
        assert isomorphic(graph, _expected_graph(cls, p, r)).isomorphic, cls.signature
        assert euler_characteristic(cmap) == counts["chi"]
        assert canonical_class(pair) == cls


def test_c_3_4_1_map_is_on_k66():
    pair = realize_subset([parse_signature("R{1,3}", 3, 4)], 3, 4)
    graph = underlying_graph(build_map(pair))
    assert isomorphic(graph, complete_bipartite(6)).isomorphic
    cmap = build_map(pair)
    assert cmap.valency == 6
    assert cmap.genus == (2 - cmap.euler_characteristic) // 2


def test_dihedral_map_is_a_cycle():
    pair = construct_rotary(group_of(3, 5, "L(-,-)"))
    assert pair.rho_order == 2
    counts = map_counts(pair)
    assert counts == {"V": 15, "E": 15, "F": 2, "chi": 2}


def test_direct_product_of_distinct_classes():
    p, r = 3, 4
    a = construct_rotary(group_of(p, r, "L(+,+)"))
    b = construct_rotary(group_of(p, r, "L(-,-)"))
    prod = direct_product([a, b])
    assert prod.group.order == 72
    assert [c.signature for c in prod.group.classes] == ["L(+,+)", "L(-,-)"]
    assert [c.cls.signature for c in decompose(prod)] == ["L(+,+)", "L(-,-)"]
    assert homomorphism_exists(prod, a)
    assert homomorphism_exists(prod, b)
    assert not homomorphism_exists(a, prod)


def test_direct_product_with_itself_collapses():
    a = construct_rotary(group_of(3, 4, "R{1,3}"))
    prod = direct_product([a, a])
    assert prod.group.n == 2
    assert maps_isomorphic(prod, a).isomorphic


def test_quotient_recovers_component():
    p, r = 3, 4
    prod = realize_subset([parse_signature("L(+,+)", p, r), parse_signature("R{1,3}", p, r)], p, r)
    trivial = [s for s in prod.group.summands if s.cls.signature == "L(+,+)"][0]
    q = quotient_map(prod, trivial.basis)
    ref = construct_rotary(group_of(p, r, "R{1,3}"))
    assert q.group.order == ref.group.order
    assert maps_isomorphic(q, ref).isomorphic


def test_quotient_needs_invariant_subspace():
    prod = realize_subset([parse_signature("L(+,+)", 3, 4), parse_signature("R{1,3}", 3, 4)], 3, 4)
    with pytest.raises(StructuralError):
        quotient_map(prod, np.array([[1, 1, 0]]))


def test_distinct_subsets_give_distinct_maps():
    p, r = 3, 4
    x = realize_subset([parse_signature("L(+,+)", p, r), parse_signature("L(+,-)", p, r)], p, r)
    y = realize_subset([parse_signature("L(+,+)", p, r), parse_signature("L(-,-)", p, r)], p, r)
    res = maps_isomorphic(x, y)
    assert not res.isomorphic and res.reason
    same = maps_isomorphic(x, x)
    assert same.isomorphic
    assert same.witness.bijection.size == x.group.order
    assert same.witness.automap(x.tau) == same.witness.tau_image == x.tau


def test_other_frame_changes_canonical_class():
    G = group_of(13, 7, "R{1,6}")
    pair = construct_rotary(G, x_index=2, y_index=0)
    assert canonical_class(pair).signature == "R{2,5}"
    with pytest.raises(ParameterDomainError):
        construct_rotary(group_of(3, 4, "R{1,3}"), x_index=2, y_index=0)


def test_degree_three_entry_at_13_7_decomposes():
    p, r = 13, 7
    classes = [parse_signature("L(+,+)", p, r), parse_signature("R{1,6}", p, r)]
    pair = realize_subset(classes, p, r)
    assert [c.cls.signature for c in decompose(pair)] == ["L(+,+)", "R{1,6}"]


def test_reducible_example_at_11_5():
    p, r = 11, 5
    pair = realize_subset([parse_signature("P{1}", p, r), parse_signature("P{2}", p, r)], p, r)
    assert pair.group.order == 10 * 11 ** 4
    counts = map_counts(pair)
    assert counts["V"] == 5 * 11 ** 3
    assert counts["E"] == 5 * 11 ** 4


def test_map_record_round_trip(tmp_path):
    pair = realize_subset([parse_signature("L(+,+)", 3, 4), parse_signature("R{1,3}", 3, 4)], 3, 4)
    path = write_map_record(pair, tmp_path / "m.json")
    back = read_map_record(path)
    assert back.group.order == pair.group.order
    assert [c.signature for c in back.group.classes] == ["L(+,+)", "R{1,3}"]
    assert maps_isomorphic(pair, back).isomorphic


@pytest.mark.parametrize("p,r,seed", [(3, 4, 11), (5, 3, 12)])
def test_random_direct_products_decompose_to_their_factors(p, r, seed):
    classes = allowed_classes(p, r)
    factors = {c.signature: construct_rotary(AffineGroup.from_classes([c], p, r)) for c in classes}
    rng = random.Random(seed)
    for _ in range(50):
        picked = rng.sample(classes, rng.choice([k for k in (2, 3) if k <= len(classes)]))
        prod = direct_product([factors[c.signature] for c in picked])
        assert prod.group.n == sum(c.degree for c in picked)
        got = sorted(c.cls.signature for c in decompose(prod))
        assert got == sorted(c.signature for c in picked)


def test_quotients_by_different_maximal_submodules_differ():
    p, r = 3, 4
    subsets = [s for s in multiplicity_free_reps(p, r, 2) if len(s) == 2]
    assert subsets
    for subset in subsets:
        pair = realize_subset(list(subset), p, r)
        first, second = pair.group.summands
        q1 = quotient_map(pair, first.basis, complement=second.basis)
        q2 = quotient_map(pair, second.basis, complement=first.basis)
        assert not maps_isomorphic(q1, q2).isomorphic, [c.signature for c in subset]
        assert not maps_isomorphic(q2, q1).isomorphic


def test_diagonal_model_when_r_is_p_minus_one():
    p, r = 5, 4
    omega = 2
    mat_c = np.diag([pow(omega, -1, p), omega]).astype(np.int64)
    mat_b = np.array([[0, 1], [1, 0]], dtype=np.int64)
    cls = identify_class(mat_c, mat_b, p, r)
    assert cls.degree == 2
    assert reps_isomorphic(MatrixRep(mat_c, mat_b, p), realize(cls, p, r))

    G = AffineGroup(mat_c, mat_b, p, r)
    rho = G.elem((2, 4), 1, 1)
    tau = G.elem((0, 0), 0, 1)
    assert np.array_equal(modp.matmul(G.mat(1, 1), np.array([2, 4]), p), [2, 4])
    assert G.generates(rho, tau)
    pair = RotaryPair(G, rho, tau)
    assert pair.face_length == p - 1
    assert pair.rho_order == 2 * p
    assert maps_isomorphic(pair, construct_rotary(AffineGroup.from_classes([cls], p, r))).isomorphic


def test_fixed_vector_choice_does_not_change_the_map():
    p, r = 3, 4
    G = group_of(p, r, "L(+,+)", "R{1,3}")
    fixed = modp.nullspace((G.mat(1, 1) - modp.identity(G.n)) % p, p)
    assert fixed.shape[0] == 2
    tau = G.elem((0,) * G.n, 0, 1)
    pairs = []
    for coeffs in product(range(p), repeat=fixed.shape[0]):
        v = modp.matmul(np.array([coeffs]), fixed, p)[0]
        rho = G.elem(v, 1, 1)
        if G.generates(rho, tau):
            pairs.append(RotaryPair(G, rho, tau))
    assert len(pairs) == 4
    for other in pairs[1:]:
        assert maps_isomorphic(pairs[0], other).isomorphic


def test_map_isomorphism_is_an_equivalence():
    p, r = 3, 4
    rng = random.Random(5)
    pool = []
    for sigs in (("R{1,3}",), ("L(+,+)", "L(-,-)"), ("L(+,+)", "L(+,-)")):
        pool.extend(rng.sample(enumerate_rotary_pairs(group_of(p, r, *sigs)), 4))
    size = len(pool)
    rel = [[maps_isomorphic(a, b).isomorphic for b in pool] for a in pool]
    assert all(rel[i][i] for i in range(size))
    assert not all(all(row) for row in rel)
    for i in range(size):
        for j in range(size):
            assert rel[i][j] == rel[j][i]
            if not rel[i][j]:
                continue
            for k in range(size):
                if rel[j][k]:
                    assert rel[i][k], (i, j, k)
