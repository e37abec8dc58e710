"""F_p[D_2r]-modules given by a pair of matrices (mat_c, mat_b): isotypic parts, spinning,
Maschke averaging and decomposition into irreducible summands."""
from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..core.errors import InternalArithmeticError, StructuralError
from . import modp
from .dihedral_irr import IrrClass, MatrixRep, enumerate_irr, identify_class, isotypic_polynomial


@dataclass(frozen=True, eq=False)
class Summand:
    basis: np.ndarray
    cls: IrrClass

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


def isotypic_component(mat_c: np.ndarray, mat_b: np.ndarray, cls: IrrClass, p: int) -> np.ndarray:
    conditions = [isotypic_polynomial(cls, p).evaluate_matrix(mat_c)]
    if cls.is_linear:
        n = mat_c.shape[0]
        conditions.append((mat_b - cls.sign_b * modp.identity(n)) % p)
    return modp.nullspace(np.vstack(conditions), p)


def isotypic_decomposition(mat_c: np.ndarray, mat_b: np.ndarray, p: int, r: int) -> Dict[IrrClass, np.ndarray]:
    out = {}
    for cls in enumerate_irr(p, r):
        comp = isotypic_component(mat_c, mat_b, cls, p)
        if comp.shape[0]:
            out[cls] = comp
    return out


def is_invariant(basis: np.ndarray, mats: Sequence[np.ndarray], p: int) -> bool:
    if basis.shape[0] == 0:
        return True
    return modp.spin(basis, mats, p).shape[0] == basis.shape[0]


def _inverse_index(idx: int, r: int) -> int:
    i, e = divmod(idx, 2)
    return idx if e else 2 * ((-i) % r)


def equivariant_projection(basis: np.ndarray, mats: Sequence[np.ndarray], p: int, r: int) -> np.ndarray:
    """D-equivariant projection onto an invariant subspace, by averaging the coordinate
    projection over all 2r matrices (listed by index 2*i + e)."""
    n = mats[0].shape[0]
    if basis.shape[0] == 0:
        return np.zeros((n, n), dtype=np.int64)
    select = np.zeros((basis.shape[0], n), dtype=np.int64)
    for row, col in enumerate(modp.pivots_of(basis)):
        select[row, col] = 1
    p0 = modp.matmul(basis.T, select, p)
    acc = np.zeros((n, n), dtype=np.int64)
    for idx, m in enumerate(mats):
        acc = (acc + modp.matmul(modp.matmul(m, p0, p), mats[_inverse_index(idx, r)], p)) % p
    proj = (acc * pow(2 * r, -1, p)) % p
    if not np.array_equal(modp.matmul(proj, proj, p), proj):
        raise InternalArithmeticError("averaged projection is not idempotent")
    return proj


def projection_along(target: np.ndarray, kernel: np.ndarray, p: int) -> np.ndarray:
    """Projection onto span(target) with kernel span(kernel); the two must be complementary."""
    stacked = np.vstack([target, kernel]) % p
    if stacked.shape[0] != stacked.shape[1] or not modp.is_invertible(stacked, p):
        raise StructuralError("subspaces are not complementary")
    inv = modp.inverse(stacked, p)
    k = target.shape[0]
    return modp.matmul(target.T, inv[:, :k].T, p)


def invariant_complement(basis: np.ndarray, mats: Sequence[np.ndarray], p: int, r: int) -> np.ndarray:
    proj = equivariant_projection(basis, mats, p, r)
    return modp.nullspace(proj, p)


def irreducible_decomposition(mat_c: np.ndarray, mat_b: np.ndarray, p: int, r: int) -> List[Summand]:
    """Split the module into irreducible summands.

    Each step seeds a spin inside the first isotypic part present in the remaining
    complement (for non-linear classes the seed is taken in the +1 eigenspace of b),
    then recurses on the kernel of the averaged projection onto the spun summand.
    """
    n = mat_c.shape[0]
    complement = modp.identity(n)
    summands: List[Summand] = []
    classes = enumerate_irr(p, r)
    while complement.shape[0]:
        mc = modp.restrict(mat_c, complement, p)
        mb = modp.restrict(mat_b, complement, p)
        chosen = None
        for cls in classes:
            comp = isotypic_component(mc, mb, cls, p)
            if comp.shape[0] == 0:
                continue
            if cls.is_linear:
                seeds = comp
            else:
                k = mc.shape[0]
                seeds = modp.nullspace(
                    np.vstack([isotypic_polynomial(cls, p).evaluate_matrix(mc), (mb - modp.identity(k)) % p]), p
                )
            chosen = (cls, seeds)
            break
        if chosen is None or chosen[1].shape[0] == 0:
            raise InternalArithmeticError("no isotypic component found in a nonzero module")
        cls, seeds = chosen
        local = modp.spin(seeds[:1], [mc, mb], p)
        if local.shape[0] != cls.degree:
            raise InternalArithmeticError(f"spun summand has dimension {local.shape[0]}, expected {cls.degree}")
        mats = MatrixRep(mc, mb, p).matrices(r)
        kernel = modp.nullspace(equivariant_projection(local, mats, p, r), p)
        basis = modp.span(modp.matmul(local, complement, p), p)
        tagged = identify_class(modp.restrict(mat_c, basis, p), modp.restrict(mat_b, basis, p), p, r)
        if tagged != cls:
            raise InternalArithmeticError(f"summand tagged {tagged} but spun inside {cls}")
        summands.append(Summand(basis, cls))
        complement = modp.span(modp.matmul(kernel, complement, p), p, n)
    return summands
