from __future__ import annotations
from math import gcd

import pytest

from rotary_px_maps.algebra.dihedral_irr import parse_signature
from rotary_px_maps.core.config import Budgets, CensusOptions
from rotary_px_maps.groups.affine_group import AffineGroup

PRIMES = (3, 5, 7, 11, 13)


def grid_pairs(primes=PRIMES, rs=range(3, 13)):
    """(p, r) cells of the standard grid, skipping p | r."""
    return [(p, r) for p in primes for r in rs if gcd(p, r) == 1]


def group_of(p: int, r: int, *signatures: str, budgets: Budgets = None) -> AffineGroup:
    classes = [parse_signature(s, p, r) for s in signatures]
    return AffineGroup.from_classes(classes, p, r, budgets)


@pytest.fixture
def cls_of():
    return parse_signature


@pytest.fixture
def verify_all() -> CensusOptions:
    return CensusOptions(verify_graphs=True, brute=True)


@pytest.fixture
def d8_r13() -> AffineGroup:
    """Z_3^2 x| D_8 on the self-reciprocal class R{1,3}."""
    return group_of(3, 4, "R{1,3}")
