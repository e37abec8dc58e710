from __future__ import annotations
from math import gcd

from sympy import isprime

from .errors import ParameterDomainError

STANDING_HYPOTHESIS = "p is an odd prime and r >= 3 with p not dividing r"


def validate_prime(p: int) -> int:
    p = int(p)
    if p == 2:
        raise ParameterDomainError(f"p=2 is outside the supported range ({STANDING_HYPOTHESIS})")
    if p < 3 or not isprime(p):
        raise ParameterDomainError(f"p={p} is not an odd prime ({STANDING_HYPOTHESIS})")
    return p


def validate_pr(p: int, r: int) -> tuple:
    p = validate_prime(p)
    r = int(r)
    if r < 3:
        raise ParameterDomainError(f"r={r} is smaller than 3 ({STANDING_HYPOTHESIS})")
    if gcd(p, r) != 1:
        raise ParameterDomainError(f"p={p} divides r={r} ({STANDING_HYPOTHESIS})")
    return p, r


def validate_s(s: int, r: int, *, allow_zero: bool = False, allow_large_s: bool = False) -> int:
    s = int(s)
    lowest = 0 if allow_zero else 1
    if s < lowest:
        raise ParameterDomainError(f"s={s} must be at least {lowest}")
    if not allow_large_s and s > r - 1:
        raise ParameterDomainError(
            f"s={s} exceeds r-1={r - 1}; C(p,r,s) is arc-transitive only when r >= s+1 "
            "(use allow_large_s to run the experiment anyway)"
        )
    return s
