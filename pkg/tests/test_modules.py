from __future__ import annotations
import random

import numpy as np
import pytest

from rotary_px_maps.algebra import modp
from rotary_px_maps.algebra.dihedral_irr import MatrixRep, parse_signature, realize
from rotary_px_maps.algebra.modules import (
    equivariant_projection,
    invariant_complement,
    irreducible_decomposition,
    is_invariant,
    isotypic_decomposition,
    projection_along,
)
from rotary_px_maps.core.errors import StructuralError


def _direct_sum(p, r, sigs):
    reps = [realize(parse_signature(s, p, r), p, r) for s in sigs]
    return modp.block_diag([x.mat_c for x in reps]), modp.block_diag([x.mat_b for x in reps])


def _random_invertible(n, p, seed):
    rng = random.Random(seed)
    while True:
        T = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        if modp.is_invertible(T, p):
            return T


def test_isotypic_dimensions_with_repeats():
    mc, mb = _direct_sum(3, 4, ["L(+,+)", "L(+,+)", "R{1,3}"])
    iso = isotypic_decomposition(mc, mb, 3, 4)
    dims = {c.signature: b.shape[0] for c, b in iso.items()}
    assert dims == {"L(+,+)": 2, "R{1,3}": 2}


@pytest.mark.parametrize(
    "p,r,sigs",
    [
        (3, 4, ["L(+,+)", "R{1,3}", "L(-,-)"]),
        (3, 4, ["R{1,3}", "R{1,3}"]),
        (13, 7, ["L(-,-)", "R{2,5}", "R{3,4}"]),
        (3, 5, ["L(+,+)", "R{1,2,3,4}"]),
        (11, 5, ["P{1}", "P{2}", "P{1}"]),
    ],
)
def test_decomposition_recovers_classes_after_conjugation(p, r, sigs):
    mc, mb = _direct_sum(p, r, sigs)
    n = mc.shape[0]
    T = _random_invertible(n, p, seed=n)
    Ti = modp.inverse(T, p)
    mc2 = modp.matmul(modp.matmul(T, mc, p), Ti, p)
    mb2 = modp.matmul(modp.matmul(T, mb, p), Ti, p)
    summands = irreducible_decomposition(mc2, mb2, p, r)
    assert sorted(s.cls.signature for s in summands) == sorted(sigs)
    stacked = np.vstack([s.basis for s in summands])
    assert modp.rank(stacked, p) == n
    for s in summands:
        assert is_invariant(s.basis, [mc2, mb2], p)


def test_equivariant_projection_commutes():
    p, r = 3, 4
    mc, mb = _direct_sum(p, r, ["L(+,+)", "R{1,3}"])
    mats = MatrixRep(mc, mb, p).matrices(r)
    summands = irreducible_decomposition(mc, mb, p, r)
    proj = equivariant_projection(summands[1].basis, mats, p, r)
    assert np.array_equal(modp.matmul(proj, proj, p), proj)
    for m in mats:
        assert np.array_equal(modp.matmul(proj, m, p), modp.matmul(m, proj, p))
    comp = invariant_complement(summands[1].basis, mats, p, r)
    assert comp.shape[0] == 1
    assert is_invariant(comp, [mc, mb], p)


def test_projection_along_needs_complementary_subspaces():
    e = modp.identity(3)
    proj = projection_along(e[:1], e[1:], 5)
    assert np.array_equal(proj, np.diag([1, 0, 0]))
    with pytest.raises(StructuralError):
        projection_along(e[:1], e[:2], 5)
