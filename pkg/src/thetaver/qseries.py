"""Truncated formal series in fractional powers of the nome.

A QSeries stores sum_e c_e * x^(e/grading) as a sparse dict keyed by the
integer exponent numerator e, with CycloNumber coefficients. The cutoff is a
knowledge bound: coefficients with e <= cutoff are exact, nothing is claimed
above it. Multiplication therefore shrinks the window to
min(cutoff_a + lead_b, cutoff_b + lead_a). Negative exponents are allowed.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .cyclotomic import CycloNumber, from_rational, raw_embed, raw_mul_into, try_unit_inverse

__all__ = ["QSeries", "GradingError", "CutoffError", "InversionError"]


class GradingError(ValueError):
    """Exponents do not fit the requested grading."""


class CutoffError(ValueError):
    """A coefficient beyond the known window was requested."""


class InversionError(ValueError):
    """The series has no inverse within the coefficient ring."""


def _coerce_coeff(value) -> CycloNumber:
    if isinstance(value, CycloNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return from_rational(value)
    raise TypeError(f"cannot use {value!r} as a series coefficient")


class QSeries:
    """A truncated series with exact cyclotomic coefficients."""

    __slots__ = ("_grading", "_cutoff", "_terms")

    def __init__(self, grading: int, cutoff: int, terms=None):
        if not isinstance(grading, int) or grading < 1:
            raise GradingError(f"grading must be a positive integer, got {grading!r}")
        self._grading = grading
        self._cutoff = int(cutoff)
        data: dict[int, CycloNumber] = {}
        for e, c in (terms or {}).items():
            c = _coerce_coeff(c)
            if e <= self._cutoff and not c.is_zero():
                prev = data.get(e)
                data[e] = c if prev is None else prev + c
        self._terms = {e: c for e, c in data.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, grading: int, cutoff: int, terms: dict[int, CycloNumber]) -> "QSeries":
        self = object.__new__(cls)
        self._grading = grading
        self._cutoff = cutoff
        self._terms = terms
        return self

    @classmethod
    def zero(cls, grading: int, cutoff: int) -> "QSeries":
        return cls._raw(grading, int(cutoff), {})

    @classmethod
    def one(cls, grading: int, cutoff: int) -> "QSeries":
        return cls(grading, cutoff, {0: 1})

    @classmethod
    def monomial(cls, grading: int, exponent: int, coeff, cutoff: int) -> "QSeries":
        return cls(grading, cutoff, {exponent: coeff})

    @property
    def grading(self) -> int:
        return self._grading

    @property
    def cutoff(self) -> int:
        """Knowledge bound, in exponent-numerator units."""
        return self._cutoff

    @property
    def terms(self) -> dict[int, CycloNumber]:
        return dict(self._terms)

    def lead(self) -> int | None:
        """Smallest stored exponent numerator, or None for the zero window."""
        return min(self._terms) if self._terms else None

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponent) -> CycloNumber:
        """Exact coefficient at x^exponent (exponent in x units, int or Fraction)."""
        e = Fraction(exponent)
        num = e * self._grading
        if e * self._grading > self._cutoff:
            raise CutoffError(
                f"coefficient at x^{e} lies beyond the cutoff x^{Fraction(self._cutoff, self._grading)}"
            )
        if num.denominator != 1:
            return from_rational(0)
        return self._terms.get(int(num), from_rational(0))

    def coefficient_num(self, e: int) -> CycloNumber:
        """Exact coefficient at exponent numerator e (e/grading in x units)."""
        if e > self._cutoff:
            raise CutoffError(f"exponent numerator {e} beyond cutoff {self._cutoff}")
        return self._terms.get(e, from_rational(0))

    # -- ring operations -------------------------------------------------

    def _check_grading(self, other: "QSeries") -> None:
        if self._grading != other._grading:
            raise GradingError(
                f"grading mismatch {self._grading} vs {other._grading}; regrade first"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = QSeries(self._grading, self._cutoff, {0: other})
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_grading(other)
        cutoff = min(self._cutoff, other._cutoff)
        out = {e: c for e, c in self._terms.items() if e <= cutoff}
        for e, c in other._terms.items():
            if e > cutoff:
                continue
            prev = out.get(e)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return QSeries._raw(self._grading, cutoff, out)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(self._grading, self._cutoff, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = QSeries(self._grading, self._cutoff, {0: other})
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "QSeries":
        """Multiply every coefficient by a scalar (rational or CycloNumber)."""
        c = _coerce_coeff(factor)
        if c.is_zero():
            return QSeries._raw(self._grading, self._cutoff, {})
        out = {e: v * c for e, v in self._terms.items()}
        return QSeries._raw(self._grading, self._cutoff, {e: v for e, v in out.items() if not v.is_zero()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_grading(other)
        at, bt = self._terms, other._terms
        la = min(at) if at else self._cutoff + 1
        lb = min(bt) if bt else other._cutoff + 1
        cutoff = min(self._cutoff + lb, other._cutoff + la)
        if not at or not bt:
            return QSeries._raw(self._grading, cutoff, {})
        order = 1
        for c in at.values():
            order = lcm(order, c.order)
        for c in bt.values():
            order = lcm(order, c.order)
        aa = sorted((e, raw_embed(c, order)) for e, c in at.items())
        bb = sorted((e, raw_embed(c, order)) for e, c in bt.items())
        acc: dict[int, dict] = {}
        for ea, ca in aa:
            if ea + lb > cutoff:
                break
            for eb, cb in bb:
                e = ea + eb
                if e > cutoff:
                    break
                tgt = acc.get(e)
                if tgt is None:
                    tgt = acc[e] = {}
                raw_mul_into(tgt, ca, cb, order)
        terms: dict[int, CycloNumber] = {}
        for e, raw in acc.items():
            clean = {j: v for j, v in raw.items() if v}
            if clean:
                terms[e] = CycloNumber._raw(order, clean)
        return QSeries._raw(self._grading, cutoff, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series exponent must be a nonnegative integer")
        result = QSeries.one(self._grading, self._cutoff)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Inverse series; the leading coefficient must be a unit in Q(zeta_N)."""
        if not self._terms:
            raise InversionError("the zero window has no inverse")
        l = min(self._terms)
        u = try_unit_inverse(self._terms[l])
        if u is None:
            raise InversionError(
                "leading coefficient is not a rational multiple of a root of unity"
            )
        new_cutoff = self._cutoff - 2 * l
        out: dict[int, CycloNumber] = {-l: u}
        keys = sorted(self._terms)
        for k in range(1, new_cutoff + l + 1):
            s: CycloNumber | None = None
            for j in keys[1:]:
                if j - l > k:
                    break
                b = out.get(k - j)
                if b is not None:
                    t = self._terms[j] * b
                    s = t if s is None else s + t
            if s is not None and not s.is_zero():
                out[k - l] = -(u * s)
        return QSeries._raw(
            self._grading, new_cutoff, {e: c for e, c in out.items() if e <= new_cutoff}
        )

    # -- structural operations -------------------------------------------

    def regrade(self, grading: int) -> "QSeries":
        """Refine to a finer grading (the old one must divide the new one)."""
        if not isinstance(grading, int) or grading < 1 or grading % self._grading:
            raise GradingError(
                f"cannot regrade {self._grading} into {grading}; need a multiple"
            )
        if grading == self._grading:
            return self
        s = grading // self._grading
        return QSeries._raw(grading, self._cutoff * s, {e * s: c for e, c in self._terms.items()})

    def rescale_tau(self, k: int) -> "QSeries":
        """The series of f(k*tau): exponents and cutoff scale by k."""
        if not isinstance(k, int) or k < 1:
            raise ValueError("tau rescaling factor must be a positive integer")
        if k == 1:
            return self
        return QSeries._raw(self._grading, self._cutoff * k, {e * k: c for e, c in self._terms.items()})

    def shift(self, e: int) -> "QSeries":
        """Multiply by the exact monomial x^(e/grading)."""
        if not e:
            return self
        return QSeries._raw(self._grading, self._cutoff + e, {k + e: c for k, c in self._terms.items()})

    def truncate(self, cutoff: int) -> "QSeries":
        """Lower the knowledge bound."""
        if cutoff >= self._cutoff:
            return self
        return QSeries._raw(
            self._grading, cutoff, {e: c for e, c in self._terms.items() if e <= cutoff}
        )

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        g = lcm(self._grading, other._grading)
        a, b = self.regrade(g), other.regrade(g)
        return a._cutoff == b._cutoff and a._terms == b._terms

    __hash__ = None

    def __str__(self) -> str:
        if not self._terms:
            return f"O(x^{Fraction(self._cutoff + 1, self._grading)})"
        bits = []
        for e in sorted(self._terms)[:8]:
            exp = Fraction(e, self._grading)
            bits.append(f"({self._terms[e]})*x^({exp})")
        more = " + ..." if len(self._terms) > 8 else ""
        return " + ".join(bits) + more + f" + O(x^{Fraction(self._cutoff + 1, self._grading)})"

    __repr__ = __str__
