"""Exact monomial integrals over the standard tetrahedron.

T_o = {x, y, z >= 0, x + y + z <= 1} has volume 1/6, and

    int_{T_o} x^l y^m z^n dV = l! m! n! / (l + m + n + 3)!

The moment engine integrates products of such monomials, one factor per
random point, over T_o^3.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Sequence

from .rational import factorial

Exponent3 = tuple[int, int, int]


@functools.lru_cache(maxsize=None)
def _integral_sorted(key: Exponent3) -> Fraction:
    l, m, n = key
    return Fraction(factorial(l) * factorial(m) * factorial(n),
                    factorial(l + m + n + 3))


def monomial_integral(l: int, m: int, n: int) -> Fraction:
    """int_{T_o} x^l y^m z^n dV, exact.

    Symmetric in (l, m, n); cached on the sorted exponent triple because the
    engine requests few distinct values an enormous number of times.
    """
    if l < 0 or m < 0 or n < 0:
        raise ValueError(f"negative exponent in ({l}, {m}, {n})")
    return _integral_sorted(tuple(sorted((l, m, n))))


def triple_integral(exponents: Sequence[int]) -> Fraction:
    """Integral over T_o^3 of a 9-variable monomial.

    `exponents` is (l1, m1, n1, l2, m2, n2, l3, m3, n3); the integral
    factorizes into one monomial integral per point.
    """
    if len(exponents) != 9:
        raise ValueError(f"need 9 exponents, got {len(exponents)}")
    out = Fraction(1)
    for i in (0, 3, 6):
        out *= monomial_integral(exponents[i], exponents[i + 1], exponents[i + 2])
    return out
