"""Irreducible F_p-representations of D_2r = <c> x| <b> and the Aut(D_2r) action on them.

Convention: c has order r, b is an involution with b c b = c^{-1}, and a := c b.
An element c^i b^e of D_2r is written (i, e).
"""
from __future__ import annotations
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
import random
import re
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from ..core.errors import InternalArithmeticError, ParameterDomainError
from ..core.params import validate_pr
from ..utils.logging_utils import get_logger
from . import modp
from .ffpoly import (
    CyclotomicCoset,
    Poly,
    coset_polynomial,
    cyclotomic_cosets,
    euler_totient,
    is_self_reciprocal,
    multiplicative_order,
)

LOGGER = get_logger(__name__)

LINEAR = "linear"
PAIR = "pair"
SELF_RECIPROCAL = "selfrecip"

DElem = Tuple[int, int]


@dataclass(frozen=True)
class DihedralSpec:
    r: int

    def __post_init__(self) -> None:
        if self.r < 3:
            raise ParameterDomainError(f"D_2r needs r >= 3, got r={self.r}")

    @property
    def order(self) -> int:
        return 2 * self.r

    def elements(self) -> List[DElem]:
        return [(i, e) for i in range(self.r) for e in (0, 1)]

    def mul(self, x: DElem, y: DElem) -> DElem:
        i1, e1 = x
        i2, e2 = y
        return ((i1 + (-1) ** e1 * i2) % self.r, e1 ^ e2)

    def inv(self, x: DElem) -> DElem:
        i, e = x
        return x if e else ((-i) % self.r, 0)

    def element_order(self, x: DElem) -> int:
        i, e = x
        if e:
            return 2
        return self.r // gcd(i, self.r)

    @property
    def a(self) -> DElem:
        return (1, 1)

    @property
    def b(self) -> DElem:
        return (0, 1)

    @property
    def c(self) -> DElem:
        return (1, 0)

    def generates(self, x: DElem, y: DElem) -> bool:
        if x[1] and y[1]:
            return gcd((x[0] - y[0]) % self.r, self.r) == 1
        seen = {(0, 0)}
        frontier = [(0, 0)]
        while frontier:
            nxt = []
            for g in frontier:
                for h in (x, y):
                    gh = self.mul(g, h)
                    if gh not in seen:
                        seen.add(gh)
                        nxt.append(gh)
            frontier = nxt
        return len(seen) == self.order


@dataclass(frozen=True)
class IrrClass:
    """Isomorphism class of an irreducible F_p-representation of D_2r.

    kind is LINEAR (signs of a and b), PAIR (canonical coset S, paired with -S) or
    SELF_RECIPROCAL (coset S = -S with |S| >= 2).
    """

    kind: str
    r: int
    sign_a: int = 0
    sign_b: int = 0
    coset: Tuple[int, ...] = ()

    @classmethod
    def linear(cls, sign_a: int, sign_b: int, r: int) -> "IrrClass":
        if sign_a * sign_b == -1 and r % 2:
            raise ParameterDomainError("linear characters with sign_a*sign_b = -1 need r even")
        return cls(LINEAR, r, sign_a=int(sign_a), sign_b=int(sign_b))

    @property
    def is_linear(self) -> bool:
        return self.kind == LINEAR

    @property
    def sign_c(self) -> int:
        return self.sign_a * self.sign_b

    @property
    def degree(self) -> int:
        if self.kind == LINEAR:
            return 1
        if self.kind == PAIR:
            return 2 * len(self.coset)
        return len(self.coset)

    @property
    def end_degree(self) -> int:
        """Degree over F_p of the endomorphism field End_D(M)."""
        if self.kind == LINEAR:
            return 1
        if self.kind == PAIR:
            return len(self.coset)
        return len(self.coset) // 2

    @property
    def is_trivial(self) -> bool:
        return self.kind == LINEAR and self.sign_a == 1 and self.sign_b == 1

    @property
    def is_faithful(self) -> bool:
        return self.kind != LINEAR and gcd(self.coset[0], self.r) == 1

    def cosets(self) -> Tuple[CyclotomicCoset, ...]:
        if self.kind == LINEAR:
            e = 0 if self.sign_c == 1 else self.r // 2
            return (CyclotomicCoset((e,), self.r),)
        s = CyclotomicCoset(self.coset, self.r)
        if self.kind == PAIR:
            return (s, s.negated())
        return (s,)

    @property
    def signature(self) -> str:
        if self.kind == LINEAR:
            sgn = {1: "+", -1: "-"}
            return f"L({sgn[self.sign_a]},{sgn[self.sign_b]})"
        body = "{" + ",".join(str(e) for e in self.coset) + "}"
        return ("P" if self.kind == PAIR else "R") + body

    @property
    def gamma_name(self) -> str:
        if self.kind != LINEAR:
            return self.signature
        return f"gamma({self.sign_a},{self.sign_b})"

    def __str__(self) -> str:
        return self.signature


_SIGNATURE_RE = re.compile(r"^\s*(?:L\(([+-]),([+-])\)|([PR])\{([0-9,\s]+)\})\s*$")
_SIGNATURE_SCAN = re.compile(r"L\([+-],[+-]\)|[PR]\{[0-9,\s]+\}")


def parse_signature(sig: str, p: int, r: int) -> IrrClass:
    m = _SIGNATURE_RE.match(sig)
    if not m:
        raise ParameterDomainError(f"malformed class signature {sig!r}")
    if m.group(1):
        cls = IrrClass(LINEAR, r, sign_a=1 if m.group(1) == "+" else -1, sign_b=1 if m.group(2) == "+" else -1)
    else:
        elems = tuple(sorted(int(t) % r for t in m.group(4).split(",") if t.strip()))
        cls = IrrClass(PAIR if m.group(3) == "P" else SELF_RECIPROCAL, r, coset=elems)
    if cls not in enumerate_irr(p, r):
        raise ParameterDomainError(f"{sig} is not an irreducible class of D_{2 * r} over F_{p}")
    return cls


def parse_signature_list(text: str, p: int, r: int) -> List[IrrClass]:
    found = _SIGNATURE_SCAN.findall(text)
    leftover = _SIGNATURE_SCAN.sub("", text).replace(",", "").replace(";", "").strip()
    if not found or leftover:
        raise ParameterDomainError(f"malformed class list {text!r}")
    return [parse_signature(s, p, r) for s in found]


@dataclass(frozen=True, eq=False)
class MatrixRep:
    mat_c: np.ndarray
    mat_b: np.ndarray
    p: int

    @property
    def degree(self) -> int:
        return int(self.mat_c.shape[0])

    @property
    def mat_a(self) -> np.ndarray:
        return modp.matmul(self.mat_c, self.mat_b, self.p)

    def matrix(self, i: int, e: int) -> np.ndarray:
        m = modp.matpow(self.mat_c, i, self.p)
        return modp.matmul(m, self.mat_b, self.p) if e else m

    def matrices(self, r: int) -> List[np.ndarray]:
        """All 2r matrices M(i, e), indexed by 2*i + e."""
        out = []
        m = modp.identity(self.degree)
        for _ in range(r):
            out.append(m)
            out.append(modp.matmul(m, self.mat_b, self.p))
            m = modp.matmul(m, self.mat_c, self.p)
        return out

    def satisfies_relations(self, r: int) -> bool:
        n = self.degree
        eye = modp.identity(n)
        p = self.p
        c_inv = modp.matpow(self.mat_c, r - 1, p)
        return (
            np.array_equal(modp.matpow(self.mat_c, r, p), eye)
            and np.array_equal(modp.matmul(self.mat_b, self.mat_b, p), eye)
            and np.array_equal(modp.matmul(modp.matmul(self.mat_b, self.mat_c, p), self.mat_b, p), c_inv)
        )


@dataclass(frozen=True)
class AutD:
    """Automorphism of D_2r: c -> c^k, b -> c^t b."""

    t: int
    k: int
    r: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", self.t % self.r)
        object.__setattr__(self, "k", self.k % self.r)
        if gcd(self.k, self.r) != 1:
            raise ParameterDomainError(f"k={self.k} is not a unit mod {self.r}")

    @classmethod
    def identity(cls, r: int) -> "AutD":
        return cls(0, 1, r)

    def apply(self, x: DElem) -> DElem:
        i, e = x
        return ((self.k * i + self.t * e) % self.r, e)

    def compose(self, other: "AutD") -> "AutD":
        """self after other."""
        return AutD(self.k * other.t + self.t, self.k * other.k, self.r)

    def inverse(self) -> "AutD":
        kinv = pow(self.k, -1, self.r)
        return AutD(-kinv * self.t, kinv, self.r)


def all_aut_d(r: int) -> List[AutD]:
    return [AutD(t, k, r) for k in range(1, r) if gcd(k, r) == 1 for t in range(r)]


def frame_automorphism(x_index: int, y_index: int, r: int) -> AutD:
    """The unique sigma with sigma(a) = c^x b and sigma(b) = c^y b."""
    k = (x_index - y_index) % r
    if gcd(k, r) != 1:
        raise ParameterDomainError(f"reflections c^{x_index}b and c^{y_index}b do not generate D_{2 * r}")
    return AutD(y_index, k, r)


def enumerate_irr(p: int, r: int) -> List[IrrClass]:
    p, r = validate_pr(p, r)
    return list(_irr(p, r))


@lru_cache(maxsize=None)
def _irr(p: int, r: int) -> Tuple[IrrClass, ...]:
    out = [IrrClass.linear(1, 1, r), IrrClass.linear(-1, -1, r)]
    if r % 2 == 0:
        out += [IrrClass.linear(1, -1, r), IrrClass.linear(-1, 1, r)]
    for coset in cyclotomic_cosets(p, r):
        if coset.elements in ((0,), (r // 2,)) and (coset.elements == (0,) or r % 2 == 0):
            continue
        if is_self_reciprocal(coset, r):
            out.append(IrrClass(SELF_RECIPROCAL, r, coset=coset.elements))
        else:
            neg = coset.negated()
            if coset.elements < neg.elements:
                out.append(IrrClass(PAIR, r, coset=coset.elements))
    return tuple(out)


def allowed_classes(p: int, r: int) -> List[IrrClass]:
    """Irr(D_2r) without gamma(-1,1), the class that never occurs in a rotary PX map."""
    return [c for c in enumerate_irr(p, r) if not (c.is_linear and c.sign_a == -1 and c.sign_b == 1)]


def class_index(cls: IrrClass, p: int) -> int:
    return _irr(p, cls.r).index(cls)


def wedderburn_dimension(p: int, r: int) -> int:
    return sum(c.degree ** 2 // c.end_degree for c in enumerate_irr(p, r))


@dataclass(frozen=True)
class FaithfulDegree:
    d: int
    deg: int
    count: int


def faithful_degree(p: int, r: int) -> FaithfulDegree:
    p, r = validate_pr(p, r)
    d = multiplicative_order(p, r)
    if d % 2 == 0 and pow(p, d // 2, r) == r - 1:
        deg = d
    else:
        deg = 2 * d
    return FaithfulDegree(d=d, deg=deg, count=euler_totient(r) // deg)


def companion_matrix(f: Poly) -> np.ndarray:
    """Matrix of multiplication by x on F_p[x]/(f) in the basis 1, x, ..., x^{m-1}."""
    m = f.degree
    C = np.zeros((m, m), dtype=np.int64)
    for j in range(m - 1):
        C[j + 1, j] = 1
    for i in range(m):
        C[i, m - 1] = (-f.coeffs[i]) % f.p
    return C


def _canonical_pair(s: Tuple[int, ...], r: int) -> Tuple[int, ...]:
    neg = tuple(sorted((-e) % r for e in s))
    return min(tuple(sorted(s)), neg)


def realize(cls: IrrClass, p: int, r: int) -> MatrixRep:
    validate_pr(p, r)
    if cls.kind == LINEAR:
        rep = MatrixRep(
            np.array([[cls.sign_c % p]], dtype=np.int64),
            np.array([[cls.sign_b % p]], dtype=np.int64),
            p,
        )
    elif cls.kind == PAIR:
        f = coset_polynomial(p, r, CyclotomicCoset(cls.coset, r))
        C = companion_matrix(f)
        m = C.shape[0]
        zero = np.zeros((m, m), dtype=np.int64)
        eye = modp.identity(m)
        mat_c = modp.block_diag([C, modp.inverse(C, p)])
        mat_b = np.block([[zero, eye], [eye, zero]]).astype(np.int64)
        rep = MatrixRep(mat_c, mat_b, p)
    else:
        f = coset_polynomial(p, r, CyclotomicCoset(cls.coset, r))
        m = f.degree
        # Frobenius power m -> m^(p^(m/2)) sends x to x^{-1} in F_p[x]/(f).
        y = Poly.x(p).pow_mod(p ** (m // 2), f)
        mat_b = np.zeros((m, m), dtype=np.int64)
        col = Poly.const(1, p)
        for k in range(m):
            coeffs = col.coeffs + (0,) * (m - len(col.coeffs))
            mat_b[:, k] = coeffs
            col = (col * y) % f
        rep = MatrixRep(companion_matrix(f), mat_b, p)
    if not rep.satisfies_relations(r):
        raise InternalArithmeticError(f"realization of {cls.signature} violates the D_{2 * r} relations")
    return rep


def aut_action(sigma: AutD, cls: IrrClass) -> IrrClass:
    """Class of psi o sigma."""
    if sigma.r != cls.r:
        raise ParameterDomainError("automorphism and class belong to different dihedral groups")
    r = cls.r
    if cls.kind == LINEAR:
        sc, sb = cls.sign_c, cls.sign_b
        new_c = sc ** (sigma.k % 2) if sc == -1 else 1
        new_b = (sc ** (sigma.t % 2)) * sb
        return IrrClass(LINEAR, r, sign_a=new_c * new_b, sign_b=new_b)
    scaled = tuple(sorted((sigma.k * e) % r for e in cls.coset))
    if cls.kind == PAIR:
        return IrrClass(PAIR, r, coset=_canonical_pair(scaled, r))
    return IrrClass(SELF_RECIPROCAL, r, coset=scaled)


def aut_orbit(cls: IrrClass, p: int, r: int) -> FrozenSet[IrrClass]:
    validate_pr(p, r)
    return frozenset(aut_action(s, cls) for s in all_aut_d(r))


def aut_stabilizer_size(cls: IrrClass, p: int, r: int) -> int:
    return r * euler_totient(r) // len(aut_orbit(cls, p, r))


def multiplicity_free_reps(p: int, r: int, total_degree: int) -> List[Tuple[IrrClass, ...]]:
    classes = allowed_classes(p, r)
    out: List[Tuple[IrrClass, ...]] = []

    def extend(start: int, chosen: List[IrrClass], remaining: int) -> None:
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for idx in range(start, len(classes)):
            c = classes[idx]
            if c.degree <= remaining:
                chosen.append(c)
                extend(idx + 1, chosen, remaining - c.degree)
                chosen.pop()

    if total_degree >= 1:
        extend(0, [], total_degree)
    return out


def count_multiplicity_free(p: int, r: int, total_degree: int) -> int:
    """Coefficient of x^total in prod over allowed classes of (1 + x^deg)."""
    coeffs = [1] + [0] * total_degree
    for c in allowed_classes(p, r):
        d = c.degree
        for k in range(total_degree, d - 1, -1):
            coeffs[k] += coeffs[k - d]
    return coeffs[total_degree] if total_degree >= 1 else 0


def isotypic_polynomial(cls: IrrClass, p: int) -> Poly:
    """Polynomial whose kernel at mat_c is the c-isotypic part containing cls."""
    out = Poly.const(1, p)
    for coset in cls.cosets():
        out = out * coset_polynomial(p, cls.r, coset)
    return out


def intertwiner_space(rep1: MatrixRep, rep2: MatrixRep) -> List[np.ndarray]:
    """Basis of {T : T rep1(g) = rep2(g) T}, T of shape (deg2, deg1)."""
    p = rep1.p
    d1, d2 = rep1.degree, rep2.degree
    blocks = []
    for m1, m2 in ((rep1.mat_c, rep2.mat_c), (rep1.mat_b, rep2.mat_b)):
        # row-major vec: vec(T M1) = (I (x) M1^T) vec T, vec(M2 T) = (M2 (x) I) vec T
        blocks.append(np.kron(np.eye(d2, dtype=np.int64), m1.T) - np.kron(m2, np.eye(d1, dtype=np.int64)))
    sols = modp.nullspace(np.vstack(blocks) % p, p)
    return [row.reshape(d2, d1) for row in sols]


def reps_isomorphic(rep1: MatrixRep, rep2: MatrixRep, seed: int = 0, attempts: int = 20) -> bool:
    if rep1.degree != rep2.degree or rep1.p != rep2.p:
        return False
    basis = intertwiner_space(rep1, rep2)
    if not basis:
        return False
    p = rep1.p
    for T in basis:
        if modp.is_invertible(T, p):
            return True
    rng = random.Random(seed)
    for _ in range(attempts):
        T = sum(rng.randrange(p) * B for B in basis) % p
        if modp.is_invertible(T, p):
            return True
    return False


def frobenius_sign_variants_isomorphic(cls: IrrClass, p: int, r: int) -> bool:
    """Whether b -> +Frobenius and b -> -Frobenius give isomorphic modules."""
    if cls.kind != SELF_RECIPROCAL:
        raise ParameterDomainError(f"{cls.signature} is not self-reciprocal")
    rep = realize(cls, p, r)
    alt = MatrixRep(rep.mat_c, (-rep.mat_b) % p, p)
    if not alt.satisfies_relations(r):
        raise InternalArithmeticError("negated Frobenius breaks the dihedral relations")
    same = reps_isomorphic(rep, alt)
    if not same:
        LOGGER.warning("finding: Frobenius sign variants of %s at (p,r)=(%d,%d) are not isomorphic", cls, p, r)
    return same


def identify_class(mat_c: np.ndarray, mat_b: np.ndarray, p: int, r: int) -> IrrClass:
    """Class of an irreducible representation given by its matrices."""
    n = int(np.asarray(mat_c).shape[0])
    for cls in enumerate_irr(p, r):
        if cls.degree != n:
            continue
        if cls.is_linear:
            if int(mat_c[0, 0]) % p == cls.sign_c % p and int(mat_b[0, 0]) % p == cls.sign_b % p:
                return cls
            continue
        if not isotypic_polynomial(cls, p).evaluate_matrix(mat_c).any():
            return cls
    raise InternalArithmeticError("matrices do not realize an irreducible class of D_%d" % (2 * r))


def sign_table(p: int, r: int) -> Dict[str, Dict[str, int]]:
    """Values of a, b, c on each linear character."""
    return {
        c.gamma_name: {"a": c.sign_a, "b": c.sign_b, "c": c.sign_c}
        for c in enumerate_irr(p, r)
        if c.is_linear
    }
