"""Concrete groups G = Z_p^n x|_psi D_2r.

Elements are GElem(v, i, e) standing for v * c^i b^e with the product law
(v1, i1, e1)(v2, i2, e2) = (v1 + M(i1, e1) v2, i1 + (-1)^e1 i2, e1 xor e2), M(i, e) = mat_c^i mat_b^e.

Element index (used by every vectorized table): ((sum_j v_j p^j) * r + i) * 2 + e.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..algebra import modp
from ..algebra.dihedral_irr import (
    IrrClass,
    MatrixRep,
    aut_orbit,
    aut_stabilizer_size,
    enumerate_irr,
    realize,
)
from ..algebra.ffpoly import euler_totient
from ..algebra.modules import Summand, irreducible_decomposition
from ..core.config import Budgets
from ..core.errors import BudgetExceededError, InternalArithmeticError, ParameterDomainError, StructuralError
from ..core.params import validate_pr
from ..utils.logging_utils import get_logger

LOGGER = get_logger(__name__)

Arrays = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class GElem:
    v: Tuple[int, ...]
    i: int
    e: int

    def to_list(self) -> List[int]:
        return [*self.v, self.i, self.e]

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "GElem":
        values = [int(x) for x in values]
        if len(values) < 2:
            raise ParameterDomainError("group element needs at least (i, e)")
        return cls(tuple(values[:-2]), values[-2], values[-1])


class AffineGroup:
    """Z_p^n x| D_2r for a representation given by (mat_c, mat_b)."""

    def __init__(
        self,
        mat_c,
        mat_b,
        p: int,
        r: int,
        classes: Optional[Sequence[IrrClass]] = None,
        budgets: Optional[Budgets] = None,
    ) -> None:
        self.p, self.r = validate_pr(p, r)
        self.rep = MatrixRep(modp.as_modp(mat_c, self.p), modp.as_modp(mat_b, self.p), self.p)
        if self.rep.mat_c.shape != self.rep.mat_b.shape or self.rep.mat_c.ndim != 2:
            raise StructuralError("mat_c and mat_b must be square matrices of equal size")
        if not self.rep.satisfies_relations(self.r):
            raise StructuralError("matrices do not define a representation of D_%d" % (2 * self.r))
        self.n = self.rep.degree
        self._given_classes = tuple(classes) if classes is not None else None
        self.budgets = budgets or Budgets()
        n = self.n
        self.mats = np.stack(self.rep.matrices(self.r)).reshape(self.r, 2, n, n)

    @classmethod
    def from_classes(cls, classes: Sequence[IrrClass], p: int, r: int, budgets: Optional[Budgets] = None) -> "AffineGroup":
        classes = list(classes)
        if not classes:
            raise ParameterDomainError("at least one irreducible class is needed")
        reps = [realize(c, p, r) for c in classes]
        return cls(
            modp.block_diag([x.mat_c for x in reps]),
            modp.block_diag([x.mat_b for x in reps]),
            p,
            r,
            classes=classes,
            budgets=budgets,
        )

    def __repr__(self) -> str:
        return f"AffineGroup(p={self.p}, r={self.r}, n={self.n}, classes={self.label()})"

    @property
    def order(self) -> int:
        return 2 * self.r * self.p ** self.n

    @property
    def identity(self) -> GElem:
        return GElem((0,) * self.n, 0, 0)

    def check_budget(self) -> None:
        if self.order > self.budgets.max_group_order:
            raise BudgetExceededError(
                f"|G| = {self.order} exceeds max_group_order = {self.budgets.max_group_order}"
            )

    # Representation structure

    @cached_property
    def summands(self) -> List[Summand]:
        return irreducible_decomposition(self.rep.mat_c, self.rep.mat_b, self.p, self.r)

    @property
    def classes(self) -> Tuple[IrrClass, ...]:
        order = {c: k for k, c in enumerate(enumerate_irr(self.p, self.r))}
        if self._given_classes is not None:
            found = self._given_classes
        else:
            found = tuple(s.cls for s in self.summands)
        return tuple(sorted(found, key=lambda c: order[c]))

    @property
    def is_multiplicity_free(self) -> bool:
        cl = self.classes
        return len(set(cl)) == len(cl)

    @property
    def is_irreducible(self) -> bool:
        return len(self.classes) == 1

    @property
    def is_dihedral(self) -> bool:
        """psi = gamma(-1,-1), so G is dihedral of order 2pr."""
        return (
            self.n == 1
            and int(self.rep.mat_c[0, 0]) == 1
            and int(self.rep.mat_b[0, 0]) == self.p - 1
        )

    def label(self) -> str:
        return "+".join(c.signature for c in self.classes)

    @cached_property
    def _summand_inverse(self) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
        summands = self.summands
        if not summands:
            return np.zeros((0, 0), dtype=np.int64), []
        stacked = np.vstack([s.basis for s in summands])
        blocks = []
        k = 0
        for s in summands:
            blocks.append((k, k + s.dim))
            k += s.dim
        return modp.inverse(stacked, self.p), blocks

    def summand_hits(self, vectors: np.ndarray) -> np.ndarray:
        """(N, k) boolean: which irreducible summands each vector projects onto nontrivially."""
        inv, blocks = self._summand_inverse
        vectors = np.atleast_2d(vectors)
        if not blocks:
            return np.zeros((vectors.shape[0], 0), dtype=bool)
        coords = modp.matmul(vectors, inv, self.p)
        return np.stack([coords[:, a:b].any(axis=1) for a, b in blocks], axis=1)

    @cached_property
    def rotation_sum(self) -> np.ndarray:
        """N = sum_{l < r} mat_c^l."""
        return self.mats[:, 0].sum(axis=0) % self.p

    # Scalar arithmetic

    def elem(self, v: Sequence[int], i: int, e: int) -> GElem:
        v = tuple(int(x) % self.p for x in v)
        if len(v) != self.n:
            raise ParameterDomainError(f"vector of length {len(v)} in a group with n = {self.n}")
        return GElem(v, int(i) % self.r, int(e) % 2)

    def mat(self, i: int, e: int) -> np.ndarray:
        return self.mats[i % self.r, e % 2]

    def mul(self, g: GElem, h: GElem) -> GElem:
        v = (np.array(g.v, dtype=np.int64) + self.mat(g.i, g.e) @ np.array(h.v, dtype=np.int64)) % self.p
        return GElem(tuple(int(x) for x in v), (g.i + (-1) ** g.e * h.i) % self.r, g.e ^ h.e)

    def inv(self, g: GElem) -> GElem:
        d_inv = (g.i, 1) if g.e else ((-g.i) % self.r, 0)
        v = (-(self.mat(*d_inv) @ np.array(g.v, dtype=np.int64))) % self.p
        return GElem(tuple(int(x) for x in v), d_inv[0], d_inv[1])

    def pow(self, g: GElem, k: int) -> GElem:
        if k < 0:
            g, k = self.inv(g), -k
        out = self.identity
        base = g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def element_order(self, g: GElem) -> int:
        v = np.array(g.v, dtype=np.int64)
        if g.e:
            sq = (v + self.mat(g.i, 1) @ v) % self.p
            return 2 if not sq.any() else 2 * self.p
        m = self.r // gcd(g.i, self.r)
        acc = np.zeros(self.n, dtype=np.int64)
        for j in range(m):
            acc = acc + self.mat(g.i * j, 0) @ v
        return m if not (acc % self.p).any() else m * self.p

    def generates(self, g1: GElem, g2: GElem) -> bool:
        if g1.e and g2.e:
            return self._reflections_generate(g1, g2)
        return self.closure_size([g1, g2]) == self.order

    def _reflections_generate(self, g1: GElem, g2: GElem) -> bool:
        if gcd((g1.i - g2.i) % self.r, self.r) != 1:
            return False
        if self.n == 0:
            return True
        v = np.array(g1.v, dtype=np.int64)
        w = np.array(g2.v, dtype=np.int64)
        relators = np.stack(
            [
                v + self.mat(g1.i, 1) @ v,
                w + self.mat(g2.i, 1) @ w,
                self.rotation_sum @ (v + self.mat(g1.i, 1) @ w),
            ]
        ) % self.p
        gens = [self.rep.mat_c, self.rep.mat_b]
        return modp.spin(relators, gens, self.p, self.n).shape[0] == self.n

    def closure_size(self, gens: Sequence[GElem]) -> int:
        self.check_budget()
        perms = [self.right_mult_perm(g) for g in gens]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            cand = np.unique(np.concatenate([perm[frontier] for perm in perms]))
            cand = cand[~seen[cand]]
            seen[cand] = True
            frontier = cand
        return int(seen.sum())

    # Vectorized tables

    def encode(self, g: GElem) -> int:
        code = 0
        for j in range(self.n - 1, -1, -1):
            code = code * self.p + g.v[j]
        return (code * self.r + g.i) * 2 + g.e

    def decode(self, idx: int) -> GElem:
        idx = int(idx)
        e = idx % 2
        i = (idx // 2) % self.r
        code = idx // (2 * self.r)
        v = []
        for _ in range(self.n):
            code, d = divmod(code, self.p)
            v.append(d)
        return GElem(tuple(v), i, e)

    def encode_arrays(self, V: np.ndarray, I: np.ndarray, E: np.ndarray) -> np.ndarray:
        return (modp.int_vector_code(V, self.p) * self.r + I) * 2 + E

    def vector_table(self) -> np.ndarray:
        codes = np.arange(self.p ** self.n, dtype=np.int64)
        weights = self.p ** np.arange(self.n, dtype=np.int64)
        return (codes[:, None] // weights[None, :]) % self.p

    @cached_property
    def element_arrays(self) -> Arrays:
        self.check_budget()
        idx = np.arange(self.order, dtype=np.int64)
        E = idx % 2
        I = (idx // 2) % self.r
        codes = idx // (2 * self.r)
        weights = self.p ** np.arange(self.n, dtype=np.int64)
        V = (codes[:, None] // weights[None, :]) % self.p
        return V, I, E

    def right_mult_perm(self, g: GElem) -> np.ndarray:
        """perm[idx(x)] = idx(x g) for every x in G."""
        V, I, E = self.element_arrays
        Mg = np.einsum("ijab,b->ija", self.mats, np.array(g.v, dtype=np.int64)) % self.p
        newV = (V + Mg[I, E]) % self.p
        newI = (I + (1 - 2 * E) * g.i) % self.r
        return self.encode_arrays(newV, newI, E ^ g.e)

    def reflection_orders(self, V: np.ndarray, I: np.ndarray) -> np.ndarray:
        sq = (V + np.einsum("kab,kb->ka", self.mats[I, 1], V)) % self.p
        return np.where(sq.any(axis=1), 2 * self.p, 2)


@dataclass(frozen=True)
class RotaryPair:
    """(rho, tau) with |tau| = 2 and <rho, tau> = G; checked at construction unless validate=False."""

    group: AffineGroup
    rho: GElem
    tau: GElem
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.validate:
            return
        G = self.group
        if G.element_order(self.tau) != 2:
            raise StructuralError("tau must be an involution")
        if not G.generates(self.rho, self.tau):
            raise StructuralError("rho and tau do not generate the group")

    @property
    def p(self) -> int:
        return self.group.p

    @property
    def r(self) -> int:
        return self.group.r

    @property
    def rho_order(self) -> int:
        return self.group.element_order(self.rho)

    @property
    def face_length(self) -> int:
        return self.group.element_order(self.group.mul(self.rho, self.tau))


@dataclass(frozen=True)
class PairArrays:
    rho: np.ndarray
    tau: np.ndarray

    def __len__(self) -> int:
        return int(self.rho.size)


def _unit_mask(r: int) -> np.ndarray:
    return np.array([gcd(k, r) == 1 for k in range(r)], dtype=bool)


def rotary_pair_arrays(G: AffineGroup, collect: bool = True) -> Tuple[PairArrays, int]:
    """All rotary pairs of G as element-index arrays, plus the count.

    Both rho and tau are reflections (e = 1): a generating pair of G must map onto a
    generating pair of D_2r with tau an involution, and |rho| in {2, 2p} forces e = 1.
    Pairs with |rho| = 2p are returned, or pairs with |rho| = 2 when G is dihedral;
    the other order class is counted too and must be empty.
    """
    G.check_budget()
    p, r, n = G.p, G.r, G.n
    vt = G.vector_table()
    nv = vt.shape[0]
    RV = np.repeat(vt, r, axis=0)
    RI = np.tile(np.arange(r, dtype=np.int64), nv)
    orders = G.reflection_orders(RV, RI)
    ridx = G.encode_arrays(RV, RI, np.ones_like(RI))
    is_inv = orders == 2
    TV, TI, tidx = RV[is_inv], RI[is_inv], ridx[is_inv]
    units = _unit_mask(r)
    N = G.rotation_sum
    mf = G.is_multiplicity_free
    if mf:
        sq = (RV + np.einsum("kab,kb->ka", G.mats[RI, 1], RV)) % p
        hits_sq = G.summand_hits(sq)
    else:
        LOGGER.info("group %s is not multiplicity-free; using spin test per pair", G.label())
    rho_out: List[np.ndarray] = []
    tau_out: List[np.ndarray] = []
    wanted = 2 if G.is_dihedral else 2 * p
    count = 0
    other = 0
    for t in range(TV.shape[0]):
        w, j = TV[t], int(TI[t])
        dgen = units[(RI - j) % r]
        if mf:
            Mw = np.einsum("iab,b->ia", G.mats[:, 1], w) % p
            u = (RV + Mw[RI]) % p
            hits = hits_sq | G.summand_hits((u @ N.T) % p)
            ok = dgen & hits.all(axis=1)
        else:
            ok = dgen.copy()
            tau = GElem(tuple(int(x) for x in w), j, 1)
            for k in np.nonzero(dgen)[0]:
                rho = GElem(tuple(int(x) for x in RV[k]), int(RI[k]), 1)
                ok[k] = G._reflections_generate(rho, tau)
        sel = ok & (orders == wanted)
        other += int((ok & (orders != wanted)).sum())
        c = int(sel.sum())
        if c:
            count += c
            if collect:
                rho_out.append(ridx[sel])
                tau_out.append(np.full(c, tidx[t], dtype=np.int64))
    if other:
        raise InternalArithmeticError(
            f"found {other} generating pairs with |rho| != {wanted} in {G.label()}; rotary-pair model is inconsistent"
        )
    LOGGER.info("group %s (|G|=%d): %d rotary pairs", G.label(), G.order, count)
    if collect and rho_out:
        pa = PairArrays(np.concatenate(rho_out), np.concatenate(tau_out))
    else:
        pa = PairArrays(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    return pa, count


def enumerate_rotary_pairs(G: AffineGroup) -> List[RotaryPair]:
    pa, _ = rotary_pair_arrays(G)
    return [RotaryPair(G, G.decode(a), G.decode(b), validate=False) for a, b in zip(pa.rho, pa.tau)]


def count_rotary_pairs(G: AffineGroup) -> int:
    return rotary_pair_arrays(G, collect=False)[1]


def closed_form_pair_count(cls: IrrClass, p: int, r: int) -> int:
    """Closed-form number of rotary pairs of Z_p^d x|_psi D_2r for irreducible psi."""
    phi = euler_totient(r)
    if cls.is_linear:
        if cls.sign_a == 1 and cls.sign_b == 1:
            return (p - 1) * r * phi
        if cls.sign_a == -1 and cls.sign_b == -1:
            return p * r * euler_totient(p * r)
        return (p - 1) * p * r * phi // 2
    d = cls.degree
    return p ** d * (p ** (d // 2) - 1) * r * phi


def structural_automorphism_count(G: AffineGroup) -> int:
    """|Aut(G)| for irreducible psi: (p-1) r phi(r) for the trivial class, otherwise
    p^n |End_D(V)^x| |Aut(D_2r)_psi|."""
    if not G.is_irreducible:
        raise ParameterDomainError("structural automorphism count needs an irreducible representation")
    cls = G.classes[0]
    p, r = G.p, G.r
    if cls.is_trivial:
        return (p - 1) * r * euler_totient(r)
    return p ** G.n * (p ** cls.end_degree - 1) * aut_stabilizer_size(cls, p, r)


def expected_orbit_count(cls: IrrClass, p: int, r: int) -> int:
    return 1 if cls.degree == 1 else len(aut_orbit(cls, p, r))
