"""Floating-point evaluation of theta series on the upper half-plane.

The exact engine decides identities by coefficient equality; this module is
the complex-analytic cross-check.  It evaluates theta functions and their
zeta-derivatives at a point by direct summation with a geometric tail bound,
checks the quasi-periodicity / half-period / characteristic-reduction
functional equations, samples two-variable quotients to confirm they are
constant in zeta, and assembles the 4x4 skew-symmetric matrix of theta
constants whose determinant must vanish.

Conventions match the exact modules: x = exp(pi*i*tau), q = x**2, and the
normalized derivative divides the zeta-derivative by 2*pi*i.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .arith import LAMBERT_VARIANTS, _SIN_QUARTER, _SIN_THREEQUARTER

__all__ = [
    "ConvergenceError",
    "SamplePlan",
    "ConstancyResult",
    "theta_point",
    "theta_deriv_point",
    "check_quasi_periodicity",
    "check_half_period",
    "check_char_reduction",
    "zero_location_residual",
    "check_elliptic_constancy",
    "matrix_a",
    "det_a",
    "det_a_residual",
    "theta_value",
    "dtheta_value",
    "eta_value",
    "eta_quotient_value",
    "farkas_product_value",
    "lambert_value",
]

_TWO_PI_I = 2j * math.pi
_N_CAP = 100_000


class ConvergenceError(RuntimeError):
    """Raised when a requested tolerance cannot be met within the term cap."""


def _require_upper_half(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau!r}")
    return tau


def _theta_sum(
    eps: Fraction,
    epsp: Fraction,
    zeta: complex,
    tau: complex,
    tol: float,
    deriv: bool,
) -> complex:
    """Sum the theta series outward from its largest term.

    The summand for index n is exp(pi*i*(n+c)**2*tau + 2*pi*i*(n+c)*(zeta+e'/2))
    with c = eps/2, optionally multiplied by 2*pi*i*(n+c).  Its magnitude is
    env(n+c) = exp(-pi*(n+c)**2*im(tau) - 2*pi*(n+c)*im(zeta)) times, for the
    derivative, 2*pi*|n+c|; env peaks at n+c = -im(zeta)/im(tau).  Each
    direction starts at the peak and stops once the (never-zero) bound
    env*max(2*pi*|n+c|, 1) drops below tol/8 with a guaranteed next-step ratio
    below 1/2 while moving away from both the peak and the derivative zero;
    past that point the ratios only shrink, so the discarded tail is a
    geometric series summing below the bound itself.
    """
    tau = _require_upper_half(tau)
    if not tol > 0:
        raise ValueError("tol must be positive")
    zeta = complex(zeta)
    c = float(eps) / 2.0
    shift = zeta + float(epsp) / 2.0
    im_t = tau.imag
    im_z = zeta.imag
    peak = -im_z / im_t
    center = int(round(peak - c))

    def log_env(t: float) -> float:
        return -math.pi * t * t * im_t - 2.0 * math.pi * t * im_z

    def bound(t: float) -> float:
        b = math.exp(min(log_env(t), 700.0))
        if deriv:
            b *= max(2.0 * math.pi * abs(t), 1.0)
        return b

    total = 0.0 + 0.0j
    count = 0
    for start, step in ((center, 1), (center - 1, -1)):
        n = start
        while True:
            if count >= _N_CAP:
                raise ConvergenceError(
                    f"theta series did not reach tol={tol} within {_N_CAP} terms"
                )
            t = n + c
            value = cmath.exp(1j * math.pi * t * t * tau + _TWO_PI_I * t * shift)
            if deriv:
                value *= _TWO_PI_I * t
            total += value
            count += 1
            t_next = t + step
            receding = (t_next - peak) * step > 0 and (not deriv or abs(t_next) > abs(t))
            if receding:
                here = bound(t)
                ratio = bound(t_next) / here if here > 0 else 0.0
                if here < tol / 8.0 and ratio < 0.5:
                    break
            n += step
    return total


def theta_point(
    eps,
    epsp,
    zeta: complex,
    tau: complex,
    tol: float = 1e-12,
) -> complex:
    """theta[eps;eps'](zeta, tau) by direct summation, tail below tol."""
    return _theta_sum(Fraction(eps), Fraction(epsp), zeta, tau, tol, deriv=False)


def theta_deriv_point(
    eps,
    epsp,
    zeta: complex,
    tau: complex,
    tol: float = 1e-12,
) -> complex:
    """d/dzeta theta[eps;eps'](zeta, tau), the raw derivative with its 2*pi*i."""
    return _theta_sum(Fraction(eps), Fraction(epsp), zeta, tau, tol, deriv=True)


def _scaled_residual(lhs: complex, rhs: complex) -> float:
    scale = max(abs(lhs), abs(rhs), 1.0)
    return abs(lhs - rhs) / scale


def check_quasi_periodicity(
    eps,
    epsp,
    zeta: complex,
    tau: complex,
    m: int,
    n: int,
    tol: float = 1e-12,
) -> float:
    """Residual of theta(zeta + n + m*tau) against its quasi-period factor.

    The factor is exp(2*pi*i*((n*eps - m*eps')/2 - m*zeta - m**2*tau/2)).
    """
    eps = Fraction(eps)
    epsp = Fraction(epsp)
    lhs = theta_point(eps, epsp, zeta + n + m * tau, tau, tol)
    factor = cmath.exp(
        _TWO_PI_I * (float(n * eps - m * epsp) / 2.0 - m * zeta - m * m * tau / 2.0)
    )
    rhs = factor * theta_point(eps, epsp, zeta, tau, tol)
    return _scaled_residual(lhs, rhs)


def check_half_period(
    eps,
    epsp,
    zeta: complex,
    tau: complex,
    m: int,
    n: int,
    tol: float = 1e-12,
) -> float:
    """Residual of theta(zeta + (n + m*tau)/2) against the shifted characteristic.

    theta[eps;eps'](zeta + (n + m*tau)/2) equals
    exp(2*pi*i*(-m*zeta/2 - m**2*tau/8 - m*(eps' + n)/4)) * theta[eps+m;eps'+n](zeta).
    """
    eps = Fraction(eps)
    epsp = Fraction(epsp)
    lhs = theta_point(eps, epsp, zeta + (n + m * tau) / 2.0, tau, tol)
    factor = cmath.exp(
        _TWO_PI_I
        * (-m * zeta / 2.0 - m * m * tau / 8.0 - m * float(epsp + n) / 4.0)
    )
    rhs = factor * theta_point(eps + m, epsp + n, zeta, tau, tol)
    return _scaled_residual(lhs, rhs)


def check_char_reduction(
    eps,
    epsp,
    zeta: complex,
    tau: complex,
    a: int,
    b: int,
    tol: float = 1e-12,
) -> float:
    """Residual of the mod-2 characteristic reduction.

    theta[eps+2a;eps'+2b](zeta,tau) equals exp(pi*i*eps*b) * theta[eps;eps'](zeta,tau).
    """
    eps = Fraction(eps)
    epsp = Fraction(epsp)
    lhs = theta_point(eps + 2 * a, epsp + 2 * b, zeta, tau, tol)
    rhs = cmath.exp(1j * math.pi * float(eps) * b) * theta_point(eps, epsp, zeta, tau, tol)
    return _scaled_residual(lhs, rhs)


def zero_location_residual(eps, epsp, tau: complex, tol: float = 1e-12) -> float:
    """|theta[eps;eps']| at its fundamental-parallelogram zero.

    The single zero sits at zeta = (1-eps)/2*tau + (1-eps')/2.
    """
    eps = Fraction(eps)
    epsp = Fraction(epsp)
    zero = float((1 - eps)) / 2.0 * tau + float((1 - epsp)) / 2.0
    return abs(theta_point(eps, epsp, zero, tau, tol))


@dataclass(frozen=True)
class SamplePlan:
    """Seeded rectangle sampling of (zeta, tau) pairs.

    tau is drawn from tau_re x tau_im (imaginary part bounded away from the
    real axis so the series converge quickly); zeta from zeta_re x zeta_im.
    """

    seed: int = 0
    count: int = 20
    tau_re: tuple[float, float] = (-1.0, 1.0)
    tau_im: tuple[float, float] = (0.3, 2.0)
    zeta_re: tuple[float, float] = (-0.4, 0.4)
    zeta_im: tuple[float, float] = (-0.4, 0.4)

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not 0.0 < self.tau_im[0] <= self.tau_im[1]:
            raise ValueError("tau_im must stay strictly above the real axis")

    def _draw_tau(self, rng: random.Random) -> complex:
        return complex(rng.uniform(*self.tau_re), rng.uniform(*self.tau_im))

    def _draw_zeta(self, rng: random.Random) -> complex:
        return complex(rng.uniform(*self.zeta_re), rng.uniform(*self.zeta_im))

    def samples(self) -> Iterator[tuple[complex, complex]]:
        rng = random.Random(self.seed)
        for _ in range(self.count):
            yield self._draw_zeta(rng), self._draw_tau(rng)


@dataclass(frozen=True)
class ConstancyResult:
    """Outcome of sampling a zeta-quotient that should be constant."""

    worst_residual: float
    closed_form_residual: float
    resamples: int


_ZETA8 = cmath.exp(2j * math.pi / 8)

# Quotients constant in zeta: numerator coefficients on theta^4[e;e'](zeta,tau)
# and the denominator characteristics, per variant, plus the power of zeta_8 in
# the closed-form constant -8*zeta_8**k * (.)/(.) built from theta constants.
_CONSTANCY = {
    "quarter": {
        "numerator": (
            (Fraction(1, 4), Fraction(1, 4), 1),
            (Fraction(1, 4), Fraction(3, 4), -(_ZETA8**3)),
            (Fraction(1, 4), Fraction(5, 4), _ZETA8**6),
            (Fraction(1, 4), Fraction(7, 4), -_ZETA8),
        ),
        "denominator": (
            (Fraction(1, 4), Fraction(0)),
            (Fraction(1, 4), Fraction(1, 2)),
            (Fraction(1, 4), Fraction(1)),
            (Fraction(1, 4), Fraction(3, 2)),
        ),
        "constant_phase": _ZETA8**3,
    },
    "threequarter": {
        "numerator": (
            (Fraction(3, 4), Fraction(1, 4), 1),
            (Fraction(3, 4), Fraction(3, 4), -_ZETA8),
            (Fraction(3, 4), Fraction(5, 4), _ZETA8**2),
            (Fraction(3, 4), Fraction(7, 4), -(_ZETA8**3)),
        ),
        "denominator": (
            (Fraction(3, 4), Fraction(0)),
            (Fraction(3, 4), Fraction(1, 2)),
            (Fraction(3, 4), Fraction(1)),
            (Fraction(3, 4), Fraction(3, 2)),
        ),
        "constant_phase": _ZETA8,
    },
}


def _constancy_quotient(variant: dict, zeta: complex, tau: complex, tol: float) -> complex:
    numer = 0.0 + 0.0j
    for eps, epsp, coeff in variant["numerator"]:
        numer += coeff * theta_point(eps, epsp, zeta, tau, tol) ** 4
    denom = 1.0 + 0.0j
    for eps, epsp in variant["denominator"]:
        denom *= theta_point(eps, epsp, zeta, tau, tol)
    if abs(denom) < 1e-12:
        raise ZeroDivisionError
    return numer / denom


def _constancy_closed_form(
    variant: dict, tau: complex, tol: float, phase: complex | None = None
) -> complex:
    d14 = theta_deriv_point(1, Fraction(1, 4), 0.0, tau, tol)
    d34 = theta_deriv_point(1, Fraction(3, 4), 0.0, tau, tol)
    t14 = theta_point(1, Fraction(1, 4), 0.0, tau, tol)
    t34 = theta_point(1, Fraction(3, 4), 0.0, tau, tol)
    d11 = theta_deriv_point(1, 1, 0.0, tau, tol)
    t10 = theta_point(1, 0, 0.0, tau, tol)
    t1h = theta_point(1, Fraction(1, 2), 0.0, tau, tol)
    factor = variant["constant_phase"] if phase is None else phase
    return (
        -8.0
        * factor
        * (t14**3 * d14 - t34**3 * d34)
        / (d11 * t10 * t1h**2)
    )


def check_elliptic_constancy(
    variant: str,
    plan: SamplePlan,
    tol: float = 1e-12,
    phase_override: complex | None = None,
) -> ConstancyResult:
    """Sample a theta quotient over zeta and confirm it never moves.

    For each sample tau the quotient is evaluated at a random zeta and at
    zeta = 0; the worst relative deviation |f(zeta) - f(0)| / |f(0)| is
    returned together with the relative error of f(0) against the constant's
    closed form in theta constants.  Samples landing on a theta zero of the
    denominator are redrawn and counted.  ``phase_override`` replaces the
    closed form's root-of-unity factor (negative controls drop it to show the
    comparison has discriminating power).
    """
    if variant not in _CONSTANCY:
        raise ValueError(f"unknown variant {variant!r}; expected quarter/threequarter")
    spec = _CONSTANCY[variant]
    rng = random.Random(plan.seed)
    worst = 0.0
    worst_closed = 0.0
    resamples = 0
    for _ in range(plan.count):
        tau = plan._draw_tau(rng)
        f0 = _constancy_quotient(spec, 0.0, tau, tol)
        closed = _constancy_closed_form(spec, tau, tol, phase_override)
        worst_closed = max(worst_closed, abs(f0 - closed) / max(abs(closed), 1.0))
        attempts = 0
        while True:
            zeta = plan._draw_zeta(rng)
            try:
                fz = _constancy_quotient(spec, zeta, tau, tol)
            except ZeroDivisionError:
                resamples += 1
                attempts += 1
                if attempts > 100:
                    raise ConvergenceError(
                        "could not sample away from theta zeros"
                    ) from None
                continue
            break
        worst = max(worst, abs(fz - f0) / max(abs(f0), 1.0))
    return ConstancyResult(worst, worst_closed, resamples)


def matrix_a(tau: complex, tol: float = 1e-12) -> np.ndarray:
    """The 4x4 skew-symmetric matrix of theta constants whose det vanishes."""
    t14 = theta_point(1, Fraction(1, 4), 0.0, tau, tol)
    t34 = theta_point(1, Fraction(3, 4), 0.0, tau, tol)
    t10 = theta_point(1, 0, 0.0, tau, tol)
    t1h = theta_point(1, Fraction(1, 2), 0.0, tau, tol)
    p01 = t14 * t34
    p02 = t10 * t1h
    p03 = t14 * t14
    p12 = t14 * t34
    p13 = t1h * t1h
    p23 = t34 * t34
    return np.array(
        [
            [0.0, p01, p02, p03],
            [-p01, 0.0, p12, p13],
            [-p02, -p12, 0.0, p23],
            [-p03, -p13, -p23, 0.0],
        ],
        dtype=complex,
    )


def det_a(tau: complex, tol: float = 1e-12) -> complex:
    """Determinant of the matrix above; zero up to roundoff for every tau."""
    return complex(np.linalg.det(matrix_a(tau, tol)))


def det_a_residual(tau: complex, tol: float = 1e-12) -> float:
    """|det A| scaled by the fourth power of the largest entry magnitude."""
    a = matrix_a(tau, tol)
    scale = float(np.max(np.abs(a)))
    return abs(complex(np.linalg.det(a))) / scale**4


# ---------------------------------------------------------------------------
# Point evaluation of the expression atoms, independent of the q-series path.
# ---------------------------------------------------------------------------


def theta_value(eps, epsp, scale: int, tau: complex, tol: float = 1e-12) -> complex:
    """theta[eps;eps'](0, scale*tau)."""
    return theta_point(eps, epsp, 0.0, scale * tau, tol)


def dtheta_value(eps, epsp, scale: int, tau: complex, tol: float = 1e-12) -> complex:
    """Normalized derivative theta'/(2*pi*i) at (0, scale*tau)."""
    return theta_deriv_point(eps, epsp, 0.0, scale * tau, tol) / _TWO_PI_I


def _product_top(q_mag: float, tol: float) -> int:
    if q_mag >= 1.0:
        raise ValueError("q must satisfy |q| < 1")
    top = int(math.log(tol * (1.0 - q_mag)) / math.log(q_mag)) + 2
    return max(top, 4)


def eta_value(scale: int, tau: complex, tol: float = 1e-15) -> complex:
    """q**(scale/24) * prod(1 - q**(scale*n)) with q = exp(2*pi*i*tau)."""
    return eta_quotient_value(((scale, 1),), Fraction(scale, 24), tau, tol)


def eta_quotient_value(
    factors: Sequence[tuple[int, int]],
    prefactor: Fraction,
    tau: complex,
    tol: float = 1e-15,
) -> complex:
    """q**prefactor * prod over (m, e) of prod_n (1 - q**(m*n))**e."""
    tau = _require_upper_half(tau)
    q = cmath.exp(_TWO_PI_I * tau)
    value = cmath.exp(_TWO_PI_I * tau * float(Fraction(prefactor)))
    for m, e in factors:
        top = _product_top(abs(q) ** m, tol)
        block = 1.0 + 0.0j
        for n in range(1, top + 1):
            block *= 1.0 - q ** (m * n)
        value *= block**e
    return value


def farkas_product_value(tau: complex, tol: float = 1e-15) -> complex:
    """prod over n not divisible by 3 of (1 - q**n), q = exp(2*pi*i*tau)."""
    tau = _require_upper_half(tau)
    q = cmath.exp(_TWO_PI_I * tau)
    top = _product_top(abs(q), tol)
    value = 1.0 + 0.0j
    for n in range(1, top + 1):
        if n % 3 != 0:
            value *= 1.0 - q**n
    return value


_LAMBERT_CONSTANTS = {
    "half": 0.5j,
    "quarter": 1j * (math.sqrt(2.0) / 2.0 - 0.5),
    "threequarter": 1j * (math.sqrt(2.0) / 2.0 + 0.5),
}


def _lambert_weight(variant: str, d: int) -> float:
    if variant == "half":
        r = d % 4
        if r == 1:
            return 1.0
        if r == 3:
            return -1.0
        return 0.0
    table = _SIN_QUARTER if variant == "quarter" else _SIN_THREEQUARTER
    rat, sq2 = table[d % 8]
    sign = 1.0 if d % 2 == 1 else -1.0  # (-1)**(d-1)
    return sign * (float(rat) + float(sq2) * math.sqrt(2.0) / 2.0)

def lambert_value(variant: str, tau: complex, tol: float = 1e-15) -> complex:
    """Constant term plus 2i * sum over d of weight(d) * q**d / (1 - q**d).

    The geometric kernels resum the divisor-weighted series coefficient-wise,
    so this evaluation is independent of the series builder.
    """
    if variant not in LAMBERT_VARIANTS:
        raise ValueError(f"unknown lambert variant {variant!r}")
    tau = _require_upper_half(tau)
    q = cmath.exp(_TWO_PI_I * tau)
    top = _product_top(abs(q), tol)
    total = _LAMBERT_CONSTANTS[variant]
    for d in range(1, top + 1):
        w = _lambert_weight(variant, d)
        if w != 0.0:
            qd = q**d
            total += 2j * w * qd / (1.0 - qd)
    return total
