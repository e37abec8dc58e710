"""Exact arithmetic over F_p and F_{p^m}, dense polynomials over F_p, and the
cyclotomic-coset factorization of x^r - 1.

Polynomials are stored low degree first and normalized after every operation.
"""
from __future__ import annotations
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
import random
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, n_order, totient

from ..core.errors import InternalArithmeticError, ParameterDomainError
from ..core.params import validate_pr, validate_prime
from ..utils.logging_utils import get_logger

LOGGER = get_logger(__name__)

# Largest extension degree built when splitting x^r - 1.
MAX_EXTENSION_DEGREE = 24


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        validate_prime(self.p)

    def elem(self, a: int) -> int:
        return int(a) % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p

    def neg(self, x: int) -> int:
        return (-x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise InternalArithmeticError("0 has no inverse in F_%d" % self.p)
        return pow(int(x), -1, self.p)


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


def _trim(coeffs: Sequence[int], p: int) -> Tuple[int, ...]:
    out = [int(c) % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    coeffs: Tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs, self.p))

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls((), p)

    @classmethod
    def const(cls, c: int, p: int) -> "Poly":
        return cls((c,), p)

    @classmethod
    def monomial(cls, k: int, p: int, c: int = 1) -> "Poly":
        return cls((0,) * k + (c,), p)

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls.monomial(1, p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = prime_field(self.p).inv(self.leading)
        return Poly(tuple(c * inv for c in self.coeffs), self.p)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise InternalArithmeticError("mixing polynomials over F_%d and F_%d" % (self.p, other.p))
            return other
        return Poly.const(int(other), self.p)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)), self.p)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs), self.p)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other) -> Tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise InternalArithmeticError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = prime_field(self.p).inv(other.leading)
        quot = [0] * max(0, len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = (rem[k] * inv) % self.p
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = (rem[k - dq + j] - c * b) % self.p
        return Poly(tuple(quot), self.p), Poly(tuple(rem[:dq]) if dq > 0 else (), self.p)

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __call__(self, a: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * a + c) % self.p
        return acc

    def pow_mod(self, k: int, modulus: "Poly") -> "Poly":
        result = Poly.const(1, self.p) % modulus
        base = self % modulus
        while k:
            if k & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            k >>= 1
        return result

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs))[1:], self.p)

    def reciprocal(self) -> "Poly":
        """x^deg f(1/x), i.e. the reversed coefficient list."""
        return Poly(tuple(reversed(self.coeffs)), self.p)

    def monic_reciprocal(self) -> "Poly":
        return self.reciprocal().monic()

    def evaluate_matrix(self, mat: np.ndarray) -> np.ndarray:
        mat = np.asarray(mat, dtype=np.int64) % self.p
        n = mat.shape[0]
        acc = np.zeros((n, n), dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = (acc @ mat + c * np.eye(n, dtype=np.int64)) % self.p
        return acc

    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        half = self.p // 2
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            signed = c - self.p if c > half else c
            mag = abs(signed)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            body = body + mono
            terms.append(("-" if signed < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_product(polys: Sequence[Poly], p: int) -> Poly:
    out = Poly.const(1, p)
    for f in polys:
        out = out * f
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin-style test: f of degree m is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= m/2."""
    m = f.degree
    if m <= 0:
        return False
    if m == 1:
        return True
    x = Poly.x(f.p)
    h = x % f
    for _ in range(m // 2):
        h = h.pow_mod(f.p, f)
        if poly_gcd(h - x, f).degree > 0:
            return False
    return True


def _monic_candidates(p: int, m: int, seed: Optional[int]) -> Iterator[Poly]:
    total = p ** m
    if seed is None:
        codes: Iterator[int] = iter(range(total))
    else:
        rng = random.Random(seed)
        codes = (rng.randrange(total) for _ in range(64 * total if total < 10_000 else 10 ** 7))
    for code in codes:
        low = []
        for _ in range(m):
            code, d = divmod(code, p)
            low.append(d)
        yield Poly(tuple(low) + (1,), p)


def find_irreducible(p: int, m: int, seed: Optional[int] = None) -> Poly:
    if m == 1:
        return Poly.x(p)
    for f in _monic_candidates(p, m, seed):
        if f.coeffs[0] != 0 and is_irreducible(f):
            return f
    raise InternalArithmeticError(f"no irreducible polynomial of degree {m} found over F_{p}")


@dataclass(frozen=True)
class ExtField:
    """F_{p^m} realized as F_p[x]/(modulus)."""

    p: int
    modulus: Poly

    @classmethod
    def build(cls, p: int, m: int, seed: Optional[int] = None) -> "ExtField":
        validate_prime(p)
        if m < 1 or m > MAX_EXTENSION_DEGREE:
            raise ParameterDomainError(f"extension degree m={m} outside 1..{MAX_EXTENSION_DEGREE}")
        return cls(p, find_irreducible(p, m, seed))

    @property
    def m(self) -> int:
        return self.modulus.degree

    @property
    def order(self) -> int:
        return self.p ** self.m

    def elem(self, coeffs: Sequence[int]) -> "ExtFieldElem":
        return ExtFieldElem(Poly(tuple(coeffs), self.p) % self.modulus, self)

    def from_code(self, code: int) -> "ExtFieldElem":
        digits = []
        for _ in range(self.m):
            code, d = divmod(code, self.p)
            digits.append(d)
        return self.elem(digits)

    def zero(self) -> "ExtFieldElem":
        return self.elem(())

    def one(self) -> "ExtFieldElem":
        return self.elem((1,))

    def primitive_element(self, seed: Optional[int] = None) -> "ExtFieldElem":
        q1 = self.order - 1
        primes = sorted(factorint(q1))
        codes: Iterator[int]
        if seed is None:
            codes = iter(range(1, self.order))
        else:
            rng = random.Random(seed)
            codes = (rng.randrange(1, self.order) for _ in range(10 ** 6))
        for code in codes:
            g = self.from_code(code)
            if g.is_zero():
                continue
            if all(not (g ** (q1 // ell)).is_one() for ell in primes):
                return g
        raise InternalArithmeticError(f"no generator of F_{self.p}^{self.m} found")


@dataclass(frozen=True)
class ExtFieldElem:
    residue: Poly
    field: ExtField

    def __post_init__(self) -> None:
        if self.residue.degree >= self.field.m:
            raise InternalArithmeticError("residue degree must be below the modulus degree")

    def _wrap(self, poly: Poly) -> "ExtFieldElem":
        return ExtFieldElem(poly % self.field.modulus, self.field)

    def __add__(self, other: "ExtFieldElem") -> "ExtFieldElem":
        return self._wrap(self.residue + other.residue)

    def __sub__(self, other: "ExtFieldElem") -> "ExtFieldElem":
        return self._wrap(self.residue - other.residue)

    def __neg__(self) -> "ExtFieldElem":
        return self._wrap(-self.residue)

    def __mul__(self, other: "ExtFieldElem") -> "ExtFieldElem":
        return self._wrap(self.residue * other.residue)

    def __pow__(self, k: int) -> "ExtFieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        return ExtFieldElem(self.residue.pow_mod(k, self.field.modulus), self.field)

    def inverse(self) -> "ExtFieldElem":
        if self.is_zero():
            raise InternalArithmeticError("0 has no inverse")
        return self ** (self.field.order - 2)

    def is_zero(self) -> bool:
        return self.residue.is_zero()

    def is_one(self) -> bool:
        return self.residue.coeffs == (1,)

    def in_prime_field(self) -> bool:
        return self.residue.degree <= 0

    def to_int(self) -> int:
        if not self.in_prime_field():
            raise InternalArithmeticError("element does not lie in F_%d" % self.field.p)
        return self.residue.coeffs[0] if self.residue.coeffs else 0


@dataclass(frozen=True)
class CyclotomicCoset:
    elements: Tuple[int, ...]
    r: int

    @property
    def representative(self) -> int:
        return self.elements[0]

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, e: int) -> bool:
        return (e % self.r) in self.elements

    def negated(self) -> "CyclotomicCoset":
        return CyclotomicCoset(tuple(sorted((-e) % self.r for e in self.elements)), self.r)

    def scaled(self, k: int) -> "CyclotomicCoset":
        return CyclotomicCoset(tuple(sorted((k * e) % self.r for e in self.elements)), self.r)

    def is_faithful(self) -> bool:
        """Every exponent has full order r (the rotation acts faithfully)."""
        return gcd(self.representative, self.r) == 1

    def label(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"


def euler_totient(r: int) -> int:
    if r < 1:
        raise ParameterDomainError(f"totient needs r >= 1, got {r}")
    return int(totient(r))


def multiplicative_order(p: int, r: int) -> int:
    return int(n_order(p, r))


def cyclotomic_cosets(p: int, r: int) -> List[CyclotomicCoset]:
    p, r = validate_pr(p, r)
    return list(_cosets(p, r))


@lru_cache(maxsize=None)
def _cosets(p: int, r: int) -> Tuple[CyclotomicCoset, ...]:
    seen = set()
    out = []
    for e in range(r):
        if e in seen:
            continue
        orbit = []
        cur = e
        while cur not in orbit:
            orbit.append(cur)
            cur = (cur * p) % r
        seen.update(orbit)
        out.append(CyclotomicCoset(tuple(sorted(orbit)), r))
    return tuple(out)


def is_self_reciprocal(coset: CyclotomicCoset, r: int) -> bool:
    return all(((r - e) % r) in coset.elements for e in coset.elements)


def factor_x_r_minus_1(p: int, r: int, seed: Optional[int] = None) -> List[Tuple[Poly, CyclotomicCoset]]:
    p, r = validate_pr(p, r)
    return list(_factorization(p, r, seed))


@lru_cache(maxsize=None)
def _factorization(p: int, r: int, seed: Optional[int]) -> Tuple[Tuple[Poly, CyclotomicCoset], ...]:
    m = multiplicative_order(p, r)
    field = ExtField.build(p, m, seed)
    g = field.primitive_element(seed)
    omega = g ** ((field.order - 1) // r)
    LOGGER.debug("F_%d^%d modulus %s, omega of order %d", p, m, field.modulus, r)
    out = []
    for coset in _cosets(p, r):
        # coefficients of prod_{e in coset} (x - omega^e), low degree first
        coeffs = [field.one()]
        for e in coset.elements:
            root = omega ** e
            shifted = [field.zero()] + coeffs
            for j in range(len(coeffs)):
                shifted[j] = shifted[j] - root * coeffs[j]
            coeffs = shifted
        if not all(c.in_prime_field() for c in coeffs):
            raise InternalArithmeticError(f"factor for coset {coset.label()} does not descend to F_{p}")
        out.append((Poly(tuple(c.to_int() for c in coeffs), p), coset))
    check = poly_product([f for f, _ in out], p)
    expected = Poly.monomial(r, p) - 1
    if check != expected:
        raise InternalArithmeticError(f"factor product differs from x^{r} - 1 over F_{p}")
    return tuple(out)


def coset_polynomial(p: int, r: int, coset: CyclotomicCoset, seed: Optional[int] = None) -> Poly:
    for f, c in _factorization(*validate_pr(p, r), seed):
        if c.elements == coset.elements:
            return f
    raise ParameterDomainError(f"{coset.label()} is not a cyclotomic coset for (p, r) = ({p}, {r})")
