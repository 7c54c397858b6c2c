"""Divisor-class counts, sum-of-squares counts, and Lambert-type series.

These are the independent arithmetic oracles: everything here is computed by
trial division and direct lattice enumeration, never through theta series, so
coefficient comparisons against the series builders are meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .cyclotomic import CycloNumber, from_root_power, imag_unit, sqrt2
from .qseries import QSeries

__all__ = [
    "divisor_class_count",
    "divisors",
    "kronecker_m1",
    "kronecker_m2",
    "lambert_logderiv_series",
    "s2_formula",
    "s2_lattice",
    "s12_formula",
    "s12_lattice",
    "triangular",
]


def divisors(n: int) -> list[int]:
    """Positive divisors of n >= 1, ascending."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"need a positive integer, got {n!r}")
    small: list[int] = []
    large: list[int] = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def divisor_class_count(n: int, j: int, k: int) -> int:
    """Number of divisors of n congruent to j mod k."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"modulus must be a positive integer, got {k!r}")
    j %= k
    return sum(1 for d in divisors(n) if d % k == j)


def s2_formula(n: int) -> int:
    """Representations of n as x^2 + y^2, via the divisor-class formula."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    return 4 * (divisor_class_count(n, 1, 4) - divisor_class_count(n, 3, 4))


def s2_lattice(n: int) -> int:
    """Representations of n as x^2 + y^2, by direct enumeration."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    count = 0
    for x in range(-isqrt(n), isqrt(n) + 1):
        r = n - x * x
        y = isqrt(r)
        if y * y == r:
            count += 1 if y == 0 else 2
    return count


def s12_formula(n: int) -> int:
    """Representations of n as x^2 + 2*y^2, via the divisor-class formula."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    return 2 * (
        divisor_class_count(n, 1, 8)
        + divisor_class_count(n, 3, 8)
        - divisor_class_count(n, 5, 8)
        - divisor_class_count(n, 7, 8)
    )


def s12_lattice(n: int) -> int:
    """Representations of n as x^2 + 2*y^2, by direct enumeration."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    count = 0
    for y in range(-isqrt(n // 2), isqrt(n // 2) + 1):
        r = n - 2 * y * y
        x = isqrt(r)
        if x * x == r:
            count += 1 if x == 0 else 2
    return count


def kronecker_m1(n: int) -> int:
    """The character (-1/n): +1 for n = 1 mod 4, -1 for n = 3 mod 4, 0 for even n."""
    m = n % 4
    if m == 1:
        return 1
    if m == 3:
        return -1
    return 0


def kronecker_m2(n: int) -> int:
    """The character (-2/n): +1 for n = 1,3 mod 8, -1 for n = 5,7 mod 8, 0 for even n."""
    m = n % 8
    if m in (1, 3):
        return 1
    if m in (5, 7):
        return -1
    return 0


def triangular(n: int) -> int:
    """n(n+1)/2; defined for every integer (so triangular(-1) == 0)."""
    return n * (n + 1) // 2


# sin(pi*d/4) and sin(3*pi*d/4) by d mod 8, as (rational, multiple of sqrt2/2)
_SIN_QUARTER = ((0, 0), (0, 1), (1, 0), (0, 1), (0, 0), (0, -1), (-1, 0), (0, -1))
_SIN_THREEQUARTER = ((0, 0), (0, 1), (-1, 0), (0, 1), (0, 0), (0, -1), (1, 0), (0, -1))

LAMBERT_VARIANTS = ("half", "quarter", "threequarter")


def lambert_logderiv_series(variant: str, grading: int, cutoff: int) -> QSeries:
    """Divisor-sum expansion of theta'/theta at z = 0, normalized by 1/(2*pi*i).

    Built entirely from divisor counts with exact order-8 coefficients; serves
    as the arithmetic side of the derivative identities. Terms sit at even
    exponents x^(2N).
    """
    i = imag_unit()
    h = sqrt2() / 2
    if variant == "half":
        const = i / 2
    elif variant == "quarter":
        const = i * h - i / 2
    elif variant == "threequarter":
        const = i * h + i / 2
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {LAMBERT_VARIANTS}")
    terms: dict[int, CycloNumber] = {0: const}
    n_max = cutoff // (2 * grading)
    for n in range(1, n_max + 1):
        if variant == "half":
            a = divisor_class_count(n, 1, 4) - divisor_class_count(n, 3, 4)
            coeff = (2 * a) * i
        else:
            table = _SIN_QUARTER if variant == "quarter" else _SIN_THREEQUARTER
            a = 0
            b = 0
            for d in divisors(n):
                sgn = 1 if d % 2 else -1
                ra, rb = table[d % 8]
                a += sgn * ra
                b += sgn * rb
            coeff = (2 * i) * (a + b * h)
        if not coeff.is_zero():
            terms[2 * grading * n] = coeff
    return QSeries._raw(grading, cutoff, {e: c for e, c in terms.items() if not c.is_zero()})
