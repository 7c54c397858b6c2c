"""Series builders: theta constants, normalized derivatives, eta quotients.

A characteristic [eps; eps'] with scale k denotes theta[eps; eps'](0, k*tau).
With x = exp(pi*i*tau) and c = eps/2 the defining sums are

    theta       = sum_n rho(n) * x^(k*(n+c)^2),      rho(n) = exp(pi*i*(n+c)*eps'),
    dtheta      = sum_n (n+c) * rho(n) * x^(k*(n+c)^2),

where dtheta is theta'/(2*pi*i), the z-derivative at z = 0 with the 2*pi*i
stripped so every coefficient stays in Q(zeta_N). The builders evaluate the
sums literally; no characteristic reduction is applied (the reduction laws
then hold exactly and are asserted in tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .cyclotomic import CycloNumber, from_root_power
from .qseries import GradingError, QSeries

__all__ = [
    "Characteristic",
    "EtaQuotientSpec",
    "eta_quotient",
    "farkas_product",
    "theta_constant",
    "theta_deriv_normalized",
    "theta_min_grading",
    "theta_phase_order",
    "triple_product_theta",
]


def _root_of(turns: Fraction) -> CycloNumber:
    """exp(2*pi*i*turns) for rational turns."""
    return from_root_power(turns.denominator, turns.numerator)


@dataclass(frozen=True)
class Characteristic:
    """Theta characteristic (eps, eps') evaluated at scale*tau."""

    eps: Fraction
    eps_prime: Fraction
    scale: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        object.__setattr__(self, "eps_prime", Fraction(self.eps_prime))
        if not isinstance(self.scale, int) or self.scale < 1:
            raise ValueError(f"scale must be a positive integer, got {self.scale!r}")

    def __str__(self) -> str:
        tail = "" if self.scale == 1 else f"({self.scale})"
        return f"[{self.eps},{self.eps_prime}]{tail}"


def theta_min_grading(ch: Characteristic) -> int:
    """Smallest grading whose exponent numerators are integers for ch."""
    q = (ch.eps / 2).denominator
    return q * q // gcd(q * q, ch.scale)


def theta_phase_order(ch: Characteristic) -> int:
    """lcm of the root-of-unity orders appearing in rho(n).

    With eps/2 = p/q and eps' = u/v reduced, the phases are
    exp(2*pi*i*(qn+p)u/(2qv)); as n runs over the integers gcd(qn+p) = 1,
    so the lcm of the orders is 2qv // gcd(2qv, u).
    """
    c = ch.eps / 2
    q = c.denominator
    u, v = ch.eps_prime.numerator, ch.eps_prime.denominator
    base = 2 * q * v
    return base // gcd(base, u)


def _theta_series(ch: Characteristic, grading: int, cutoff: int, deriv: bool) -> QSeries:
    c = ch.eps / 2
    p, q = c.numerator, c.denominator
    k = ch.scale
    need = theta_min_grading(ch)
    if grading % need:
        raise GradingError(
            f"theta{ch} needs a grading divisible by {need}, got {grading}"
        )
    if cutoff < 0:
        return QSeries.zero(grading, cutoff)
    # k*(q*n+p)^2*grading/q^2 <= cutoff  <=>  (q*n+p)^2 <= cutoff*q^2/(k*grading)
    bound = cutoff * q * q // (k * grading)
    m = isqrt(bound)
    n_lo = -((m + p) // q)
    n_hi = (m - p) // q
    terms: dict[int, CycloNumber] = {}
    for n in range(n_lo, n_hi + 1):
        t = q * n + p
        e = k * t * t * grading // (q * q)
        if e > cutoff:
            continue
        coeff = _root_of((n + c) * ch.eps_prime / 2)
        if deriv:
            coeff = coeff * (n + c)
        prev = terms.get(e)
        coeff = coeff if prev is None else prev + coeff
        if coeff.is_zero():
            terms.pop(e, None)
        else:
            terms[e] = coeff
    return QSeries._raw(grading, cutoff, terms)


def theta_constant(ch: Characteristic, grading: int, cutoff: int) -> QSeries:
    """theta[eps; eps'](0, scale*tau) as a truncated series in x."""
    return _theta_series(ch, grading, cutoff, deriv=False)


def theta_deriv_normalized(ch: Characteristic, grading: int, cutoff: int) -> QSeries:
    """theta'[eps; eps'](0, scale*tau) / (2*pi*i) as a truncated series in x."""
    return _theta_series(ch, grading, cutoff, deriv=True)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod over (m, e) of prod_n (1 - q^(m*n))^e, times q^prefactor, q = x^2."""

    factors: tuple[tuple[int, int], ...]
    prefactor: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(m), int(e)) for m, e in self.factors))
        object.__setattr__(self, "prefactor", Fraction(self.prefactor))
        if not self.factors:
            raise ValueError("an eta quotient needs at least one factor")
        for m, _ in self.factors:
            if m < 1:
                raise ValueError(f"factor scale must be a positive integer, got {m}")


def eta_quotient(spec: EtaQuotientSpec, grading: int, cutoff: int) -> QSeries:
    """Expand an eta quotient; negative factor exponents divide exactly."""
    shift_f = 2 * spec.prefactor * grading
    if shift_f.denominator != 1:
        raise GradingError(
            f"prefactor q^{spec.prefactor} needs a grading divisible by "
            f"{(2 * spec.prefactor).denominator}, got {grading}"
        )
    shift = int(shift_f)
    top = (cutoff - shift) // (2 * grading)
    if top < 0:
        return QSeries.zero(grading, cutoff)
    arr = [0] * (top + 1)
    arr[0] = 1
    for m, e in spec.factors:
        if e > 0:
            for n in range(m, top + 1, m):
                for _ in range(e):
                    for j in range(top, n - 1, -1):
                        arr[j] -= arr[j - n]
        elif e < 0:
            for n in range(m, top + 1, m):
                for _ in range(-e):
                    for j in range(n, top + 1):
                        arr[j] += arr[j - n]
    return QSeries(
        grading, cutoff, {2 * grading * j + shift: arr[j] for j in range(top + 1) if arr[j]}
    )


def farkas_product(grading: int, cutoff: int, direct: bool = False) -> QSeries:
    """prod_{n>=0} (1 - q^(3n+1))(1 - q^(3n+2)), q = x^2.

    The default path expands prod(1-q^n)/prod(1-q^(3n)); direct=True multiplies
    the defining binomials one by one, as an independent oracle.
    """
    if not direct:
        return eta_quotient(EtaQuotientSpec(((1, 1), (3, -1))), grading, cutoff)
    top = cutoff // (2 * grading)
    if top < 0:
        return QSeries.zero(grading, cutoff)
    arr = [0] * (top + 1)
    arr[0] = 1
    for n in range(1, top + 1):
        if n % 3 == 0:
            continue
        for j in range(top, n - 1, -1):
            arr[j] -= arr[j - n]
    return QSeries(grading, cutoff, {2 * grading * j: arr[j] for j in range(top + 1) if arr[j]})


def triple_product_theta(ch: Characteristic, grading: int, cutoff: int) -> QSeries:
    """theta[eps; eps'](0, scale*tau) via the product expansion

        exp(pi*i*eps*eps'/2) * x^(eps^2/4)
            * prod_{n>=1} (1 - x^(2n)) (1 + a*x^(2n-1+eps)) (1 + a^-1*x^(2n-1-eps))

    with a = exp(pi*i*eps'), all exponents scaled by k. Cross-checks the sum
    form through an entirely different recursion.
    """
    k = ch.scale

    def xnum(e: Fraction) -> int:
        v = e * grading
        if v.denominator != 1:
            raise GradingError(
                f"product form of theta{ch} needs a grading divisible by "
                f"{e.denominator}, got {grading}"
            )
        return int(v)

    lead = xnum(k * ch.eps * ch.eps / 4)
    series = QSeries._raw(grading, cutoff, {lead: _root_of(ch.eps * ch.eps_prime / 4)})
    a_plus = _root_of(ch.eps_prime / 2)
    a_minus = _root_of(-ch.eps_prime / 2)
    window = cutoff - lead
    n = 1
    while True:
        m_even = xnum(Fraction(2 * k * n))
        m_plus = xnum(k * (2 * n - 1 + ch.eps))
        m_minus = xnum(k * (2 * n - 1 - ch.eps))
        if min(m_even, m_plus, m_minus) > window:
            break
        for m, coeff in ((m_even, None), (m_plus, a_plus), (m_minus, a_minus)):
            if m > window:
                continue
            if coeff is None:
                series = series - series.shift(m)
            elif m == 0:
                series = series.scale(1 + coeff)
            else:
                series = series + series.scale(coeff).shift(m)
        n += 1
    return series
