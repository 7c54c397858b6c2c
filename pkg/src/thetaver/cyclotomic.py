"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

Elements are stored sparsely in the power basis {zeta_N^j : 0 <= j < deg Phi_N},
with Fraction coordinates. Reduction of higher powers happens through memoized
tables of x^j mod Phi_N, so products of near-monomial elements stay cheap even
at large orders.
"""

from __future__ import annotations

import cmath
import threading
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

__all__ = [
    "CycloNumber",
    "OrderError",
    "cyclotomic_polynomial",
    "embed",
    "from_rational",
    "from_root_power",
    "imag_unit",
    "sqrt2",
    "sqrt3",
    "to_complex",
    "try_unit_inverse",
    "zeta",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

_lock = threading.RLock()
_phi_cache: dict[int, tuple[int, ...]] = {}
_reduction_cache: dict[int, tuple[int, list[dict[int, int] | None]]] = {}


class OrderError(ValueError):
    """The requested cyclotomic order is invalid or incompatible."""


def _divisors(n: int) -> list[int]:
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


def _polydiv_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic, so the quotient is integral; a nonzero remainder is a bug
    work = list(num)
    dd = len(den) - 1
    out = [0] * (len(work) - dd)
    for i in range(len(work) - 1, dd - 1, -1):
        c = work[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                work[i - dd + j] -= c * den[j]
    if any(work):
        raise ArithmeticError("inexact polynomial division")
    return out


def _phi(n: int) -> tuple[int, ...]:
    cached = _phi_cache.get(n)
    if cached is not None:
        return cached
    if n == 1:
        poly: tuple[int, ...] = (-1, 1)
    else:
        work = [0] * (n + 1)
        work[0], work[n] = -1, 1
        for d in _divisors(n)[:-1]:
            work = _polydiv_exact(work, _phi(d))
        poly = tuple(work)
    _phi_cache[n] = poly
    return poly


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    if not isinstance(n, int) or n < 1:
        raise OrderError(f"order must be a positive integer, got {n!r}")
    with _lock:
        return _phi(n)


def _reduction(n: int) -> tuple[int, list[dict[int, int] | None]]:
    """(deg Phi_n, table) where table[j] expands x^j mod Phi_n for deg <= j < n."""
    cached = _reduction_cache.get(n)
    if cached is not None:
        return cached
    with _lock:
        cached = _reduction_cache.get(n)
        if cached is not None:
            return cached
        phi = _phi(n)
        deg = len(phi) - 1
        table: list[dict[int, int] | None] = [None] * max(n, deg + 1)
        base = {i: -phi[i] for i in range(deg) if phi[i]}
        table[deg] = base
        for j in range(deg + 1, n):
            prev = table[j - 1]
            cur: dict[int, int] = {}
            for i, c in prev.items():  # type: ignore[union-attr]
                if i + 1 == deg:
                    for t, b in base.items():
                        cur[t] = cur.get(t, 0) + c * b
                else:
                    cur[i + 1] = cur.get(i + 1, 0) + c
            table[j] = {i: c for i, c in cur.items() if c}
        out = (deg, table)
        _reduction_cache[n] = out
        return out


def _canonical(order: int, raw: dict[int, Fraction]) -> dict[int, Fraction]:
    deg, table = _reduction(order)
    out: dict[int, Fraction] = {}
    for j, c in raw.items():
        if not c:
            continue
        j %= order
        if j < deg:
            out[j] = out.get(j, _ZERO) + c
        else:
            for i, m in table[j].items():  # type: ignore[union-attr]
                out[i] = out.get(i, _ZERO) + c * m
    return {j: c for j, c in out.items() if c}


def raw_embed(a: "CycloNumber", order: int) -> dict[int, Fraction]:
    """Canonical coordinate dict of a viewed inside Q(zeta_order)."""
    if a._order == order:
        return a._c
    step = order // a._order
    return _canonical(order, {j * step: c for j, c in a._c.items()})


def raw_mul_into(
    acc: dict[int, Fraction],
    ac: dict[int, Fraction],
    bc: dict[int, Fraction],
    order: int,
) -> None:
    """Accumulate the product of two canonical coordinate dicts into acc."""
    deg, table = _reduction(order)
    for i, p in ac.items():
        for j, q in bc.items():
            k = i + j
            if k >= order:
                k -= order
            pq = p * q
            if k < deg:
                acc[k] = acc.get(k, _ZERO) + pq
            else:
                for t, m in table[k].items():  # type: ignore[union-attr]
                    acc[t] = acc.get(t, _ZERO) + pq * m


class CycloNumber:
    """An element of Q(zeta_N) with exact rational coordinates."""

    __slots__ = ("_order", "_c")

    def __init__(self, order: int, coeffs: dict[int, Fraction | int] | None = None):
        if not isinstance(order, int) or order < 1:
            raise OrderError(f"order must be a positive integer, got {order!r}")
        raw = {j: Fraction(c) for j, c in (coeffs or {}).items()}
        self._order = order
        self._c = _canonical(order, raw)

    @classmethod
    def _raw(cls, order: int, data: dict[int, Fraction]) -> "CycloNumber":
        self = object.__new__(cls)
        self._order = order
        self._c = data
        return self

    @property
    def order(self) -> int:
        return self._order

    @property
    def coords(self) -> tuple[Fraction, ...]:
        """Dense power-basis coordinates, length deg Phi_N."""
        deg, _ = _reduction(self._order)
        return tuple(self._c.get(j, _ZERO) for j in range(deg))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_rational(self) -> bool:
        return not self._c or set(self._c) == {0}

    def as_rational(self) -> Fraction:
        if not self._c:
            return _ZERO
        if set(self._c) == {0}:
            return self._c[0]
        raise ValueError(f"{self} is not rational")

    @staticmethod
    def _coerce(value) -> "CycloNumber | None":
        if isinstance(value, CycloNumber):
            return value
        if isinstance(value, (int, Fraction)):
            v = Fraction(value)
            return CycloNumber._raw(1, {0: v} if v else {})
        return None

    def _common(self, other: "CycloNumber") -> tuple[int, dict, dict]:
        n = lcm(self._order, other._order)
        return n, raw_embed(self, n), raw_embed(other, n)

    def embed(self, order: int) -> "CycloNumber":
        """View this element inside Q(zeta_order); order must be a multiple."""
        if not isinstance(order, int) or order < 1 or order % self._order:
            raise OrderError(
                f"cannot embed an order-{self._order} element into order {order}"
            )
        if order == self._order:
            return self
        return CycloNumber._raw(order, dict(raw_embed(self, order)))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n, a, b = self._common(o)
        out = dict(a)
        for j, c in b.items():
            s = out.get(j, _ZERO) + c
            if s:
                out[j] = s
            else:
                out.pop(j, None)
        return CycloNumber._raw(n, out)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._raw(self._order, {j: -c for j, c in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            r = o.as_rational()
            if not r:
                return CycloNumber._raw(1, {})
            return CycloNumber._raw(self._order, {j: c * r for j, c in self._c.items()})
        if self.is_rational():
            return o * self.as_rational()
        n, a, b = self._common(o)
        acc: dict[int, Fraction] = {}
        raw_mul_into(acc, a, b, n)
        return CycloNumber._raw(n, {j: c for j, c in acc.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = CycloNumber._raw(1, {0: _ONE})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        _, a, b = self._common(o)
        return a == b

    __hash__ = None  # mutable-dict innards; hashing would invite misuse

    def conjugate(self) -> "CycloNumber":
        """Complex conjugate (zeta_N -> zeta_N^-1)."""
        n = self._order
        return CycloNumber(n, {(n - j) % n: c for j, c in self._c.items()})

    def to_complex(self) -> complex:
        roots = _unit_roots(self._order)
        return sum((float(c) * roots[j] for j, c in self._c.items()), complex(0))

    def _display_pair(self) -> tuple[int, dict[int, Fraction]]:
        # descend to a smaller order while the coordinates permit it
        n, c = self._order, self._c
        if not c:
            return 1, {}
        p = 2
        while p * p <= n:
            while n % (p * p) == 0 and all(j % p == 0 for j in c):
                n //= p
                c = {j // p: v for j, v in c.items()}
            p += 1
        if set(c) == {0}:
            return 1, c
        return n, c

    def __str__(self) -> str:
        n, c = self._display_pair()
        if not c:
            return "0"
        parts: list[str] = []
        for j in sorted(c):
            v = c[j]
            if j == 0:
                chunk = str(v)
            else:
                mag = "" if abs(v) == 1 else f"{abs(v)}*"
                sym = f"z{n}" if j == 1 else f"z{n}^{j}"
                chunk = f"{'-' if v < 0 else ''}{mag}{sym}"
            if parts:
                parts.append(f"- {chunk[1:]}" if chunk.startswith("-") else f"+ {chunk}")
            else:
                parts.append(chunk)
        return " ".join(parts)

    __repr__ = __str__


@lru_cache(maxsize=64)
def _unit_roots(order: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * k / order) for k in range(order))


def from_rational(value: Fraction | int) -> CycloNumber:
    v = Fraction(value)
    return CycloNumber._raw(1, {0: v} if v else {})


def from_root_power(order: int, power: int) -> CycloNumber:
    """zeta_order**power as an exact element."""
    if not isinstance(order, int) or order < 1:
        raise OrderError(f"order must be a positive integer, got {order!r}")
    return CycloNumber(order, {power % order: 1})


def zeta(order: int) -> CycloNumber:
    return from_root_power(order, 1)


def embed(a: CycloNumber, order: int) -> CycloNumber:
    return a.embed(order)


def to_complex(a: CycloNumber) -> complex:
    return a.to_complex()


def try_unit_inverse(a: CycloNumber) -> CycloNumber | None:
    """Inverse of a rational multiple of a root of unity, else None."""
    c = a._c
    if not c:
        return None
    if len(c) == 1:
        ((j, v),) = c.items()
        if j == 0:
            return from_rational(Fraction(1) / v)
        return from_root_power(a._order, a._order - j) * (Fraction(1) / v)
    n = a._order
    z = zeta(n)
    b = a
    for t in range(1, n):
        b = b * z
        bc = b._c
        if len(bc) == 1 and 0 in bc:
            # a * zeta^t is rational, so 1/a = zeta^t / that rational
            return from_root_power(n, t) * (Fraction(1) / bc[0])
    return None


@lru_cache(maxsize=1)
def imag_unit() -> CycloNumber:
    return from_root_power(4, 1)


@lru_cache(maxsize=1)
def sqrt2() -> CycloNumber:
    return from_root_power(8, 1) + from_root_power(8, 7)


@lru_cache(maxsize=1)
def sqrt3() -> CycloNumber:
    return from_root_power(12, 1) + from_root_power(12, 11)
