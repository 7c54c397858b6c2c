"""The identity registry and its exact/numeric verification engines.

Every record carries a division-free identity as DSL text (quotients are
cross-multiplied; all ``pi`` factors are absorbed by the theta'/(2*pi*i)
normalization) or, for the zeta-dependent checks, the name of a numeric
procedure.  Records also carry nonvanishing guards (the denominators removed
by cross-multiplication), registered mutations that act as negative controls,
and the grading/cutoff the exact check runs at.

``verify_exact`` compares truncated series coefficient-by-coefficient in a
cyclotomic field, ``verify_numeric`` samples the identity on the upper half
plane, ``verify_record`` folds both modes into a single report, and
``verify_all`` runs a filtered registry deterministically.
"""

from __future__ import annotations

import fnmatch
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import dsl
from . import numeric as nm
from .numeric import SamplePlan
from .qseries import QSeries

__all__ = [
    "DEFAULT_CUTOFF_X",
    "DEFAULT_NUMERIC_TOL",
    "IdentityRecord",
    "Mutation",
    "RecordConfigurationError",
    "VerificationReport",
    "get_record",
    "mutated_record",
    "registry",
    "suite_json",
    "verify_all",
    "verify_exact",
    "verify_numeric",
    "verify_record",
]

# Exact verification depth, in x-exponents (the series cutoff is this times
# the record grading).
DEFAULT_CUTOFF_X = 100

# Scaled-residual tolerance for sampling a record numerically.
DEFAULT_NUMERIC_TOL = 1e-9

# Fixed sample points for the determinant check.
_DET_A_TAUS = (1j, 0.3 + 1.2j)


class RecordConfigurationError(ValueError):
    """A record/override combination that cannot be evaluated at all.

    Distinct from a verification failure: raised for incompatible gradings,
    missing modes, or unknown numeric check names.
    """


@dataclass(frozen=True)
class Mutation:
    """A registered single-flip corruption of a record (negative control).

    ``text`` replaces the DSL identity for exact-mode records;
    ``numeric_key`` replaces the numeric procedure for plan-based records.
    """

    label: str
    text: str = ""
    numeric_key: str = ""


@dataclass(frozen=True)
class IdentityRecord:
    """One verifiable identity.

    ``mode`` is "exact", "numeric", or "both".  ``grading`` and ``order`` are
    the monomial grading and cyclotomic order the exact check uses (inferred
    from the text when built through :func:`dsl.elaborate` or the registry
    helper).  ``guards`` are DSL expressions asserted to be nonzero series on
    the window (the denominators a cross-multiplied form removed).  When
    ``expect_nonzero`` is true the record passes when the difference series is
    NOT identically zero: such records document detected errata, and their
    reports carry the witness exponent.
    """

    name: str
    text: str = ""
    mode: str = "both"
    grading: int | None = None
    cutoff_x: int = DEFAULT_CUTOFF_X
    order: int | None = None
    comment: str = ""
    guards: tuple[str, ...] = ()
    expect_nonzero: bool = False
    mutations: tuple[Mutation, ...] = ()
    numeric_key: str = ""
    numeric_tol: float = DEFAULT_NUMERIC_TOL
    plan: SamplePlan = SamplePlan()

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "numeric", "both"):
            raise RecordConfigurationError(
                f"record {self.name!r}: unknown mode {self.mode!r}"
            )
        if self.mode in ("exact", "both") and not self.text:
            raise RecordConfigurationError(
                f"record {self.name!r}: exact mode needs identity text"
            )
        if self.mode == "numeric" and not (self.text or self.numeric_key):
            raise RecordConfigurationError(
                f"record {self.name!r}: numeric mode needs text or a numeric key"
            )

    @property
    def runs_exact(self) -> bool:
        return self.mode in ("exact", "both")

    @property
    def runs_numeric(self) -> bool:
        return self.mode in ("numeric", "both")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of running one record.

    When ``passed`` is false exactly one of ``first_bad_exponent`` (exact
    mode: smallest x-exponent with a nonzero coefficient) and
    ``worst_residual`` (numeric mode: largest scaled residual) is present.
    A passing expect_nonzero record also carries ``first_bad_exponent`` as
    the witness that the rejected variant really differs.  ``cutoff`` is the
    x-exponent depth of the exact pass (0 when no exact check ran).
    """

    name: str
    mode: str
    passed: bool
    cutoff: int = 0
    first_bad_exponent: Fraction | None = None
    worst_residual: float | None = None
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        payload: dict = {
            "name": self.name,
            "mode": self.mode,
            "pass": self.passed,
        }
        if self.first_bad_exponent is not None:
            payload["first_bad_exponent"] = str(self.first_bad_exponent)
        if self.worst_residual is not None:
            payload["worst_residual"] = self.worst_residual
        payload["elapsed_ms"] = round(self.elapsed_ms, 3)
        payload["cutoff"] = self.cutoff
        return payload


def suite_json(reports: Sequence[VerificationReport]) -> dict:
    """The aggregate JSON wrapper for a sequence of reports."""
    passed = sum(1 for r in reports if r.passed)
    return {
        "total": len(reports),
        "passed": passed,
        "failed": len(reports) - passed,
        "records": [r.to_json() for r in reports],
    }


# ---------------------------------------------------------------------------
# Verification engines
# ---------------------------------------------------------------------------


def _resolved_grading(record: IdentityRecord, *roots) -> int:
    min_grading, _ = dsl.expression_requirements(*roots)
    grading = record.grading if record.grading is not None else min_grading
    if grading % min_grading:
        raise RecordConfigurationError(
            f"record {record.name!r}: grading {grading} is not a multiple of the"
            f" required {min_grading}"
        )
    return grading


def _first_nonzero_exponent(series: QSeries) -> Fraction | None:
    lead = series.lead()
    if lead is None:
        return None
    return Fraction(lead, series.grading)


def verify_exact(
    record: IdentityRecord,
    cutoff_x: int | None = None,
    cache: dict | None = None,
) -> VerificationReport:
    """Exact series verification: build atoms, evaluate, compare to zero.

    ``cutoff_x`` overrides the record's verification depth (in x-exponents).
    ``cache`` maps (atom, grading, cutoff) to built series and may be shared
    across records.
    """
    if not record.text:
        raise RecordConfigurationError(
            f"record {record.name!r} has no identity text to check exactly"
        )
    start = time.perf_counter()
    ast = dsl.parse(record.text)
    guard_asts = tuple(dsl.parse_expr(g) for g in record.guards)
    grading = _resolved_grading(record, ast, *guard_asts)
    depth = record.cutoff_x if cutoff_x is None else int(cutoff_x)
    if depth < 1:
        raise RecordConfigurationError(
            f"record {record.name!r}: cutoff {depth} must be positive"
        )
    cutoff = depth * grading

    lhs = dsl.evaluate_exact(ast.lhs, grading, cutoff, cache)
    rhs = dsl.evaluate_exact(ast.rhs, grading, cutoff, cache)
    diff = lhs - rhs
    witness = _first_nonzero_exponent(diff)

    guards_hold = True
    for guard in guard_asts:
        if dsl.evaluate_exact(guard, grading, cutoff, cache).is_zero():
            guards_hold = False
            break

    first_bad: Fraction | None = None
    worst: float | None = None
    if record.expect_nonzero:
        passed = witness is not None and guards_hold
        first_bad = witness
        if not passed and witness is None:
            # the difference vanished through the whole window: report the
            # (degenerate) zero residual so the failure carries a value
            worst = 0.0
    else:
        passed = witness is None and guards_hold
        if witness is not None:
            first_bad = witness
        elif not guards_hold:
            worst = 0.0

    elapsed = (time.perf_counter() - start) * 1000.0
    return VerificationReport(
        name=record.name,
        mode="exact",
        passed=passed,
        cutoff=depth,
        first_bad_exponent=first_bad,
        worst_residual=worst,
        elapsed_ms=elapsed,
    )


def _scaled_point_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def _numeric_check_value(key: str, plan: SamplePlan, tol: float) -> float:
    """Worst residual of a named numeric procedure (or its mutation)."""
    base, _, variant_mod = key.partition(":")
    if base in ("constancy-quarter", "constancy-threequarter"):
        variant = base.removeprefix("constancy-")
        phase_override = 1.0 if variant_mod == "drop-phase" else None
        result = nm.check_elliptic_constancy(variant, plan, phase_override=phase_override)
        return max(result.worst_residual, result.closed_form_residual)
    if base == "det-a":
        flip = variant_mod == "flip-entry"
        worst = 0.0
        for tau in _DET_A_TAUS:
            if flip:
                a = nm.matrix_a(tau)
                a[0, 3] = -a[0, 3]
                a[3, 0] = -a[3, 0]
                scale = float(np.max(np.abs(a))) or 1.0
                worst = max(worst, float(abs(np.linalg.det(a))) / scale**4)
            else:
                worst = max(worst, nm.det_a_residual(tau))
        return worst
    raise RecordConfigurationError(f"unknown numeric check {key!r}")


def verify_numeric(
    record: IdentityRecord,
    plan: SamplePlan | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """Numeric verification: sample the identity's scaled residual.

    DSL-backed records are evaluated at the plan's tau samples; plan-based
    records dispatch to their named procedure.  Passes iff the worst residual
    stays below ``tol``.
    """
    if record.mode == "exact":
        raise RecordConfigurationError(
            f"record {record.name!r} is exact-only; it has no numeric mode"
        )
    start = time.perf_counter()
    plan = record.plan if plan is None else plan
    tol = record.numeric_tol if tol is None else float(tol)

    if record.numeric_key:
        worst = _numeric_check_value(record.numeric_key, plan, tol)
    else:
        ast = dsl.parse(record.text)
        worst = 0.0
        for _zeta, tau in plan.samples():
            lhs = dsl.evaluate_numeric(ast.lhs, tau)
            rhs = dsl.evaluate_numeric(ast.rhs, tau)
            worst = max(worst, _scaled_point_residual(lhs, rhs))

    passed = worst < tol
    elapsed = (time.perf_counter() - start) * 1000.0
    return VerificationReport(
        name=record.name,
        mode="numeric",
        passed=passed,
        cutoff=0,
        worst_residual=worst,
        elapsed_ms=elapsed,
    )


def verify_record(
    record: IdentityRecord,
    *,
    cutoff_x: int | None = None,
    plan: SamplePlan | None = None,
    tol: float | None = None,
    cache: dict | None = None,
) -> VerificationReport:
    """Run a record in its declared mode(s) and fold into one report.

    Mode "both" runs the exact check first; the numeric sampler only runs
    when the exact window is clean, so a failing report always carries
    exactly one of first_bad_exponent / worst_residual.
    """
    start = time.perf_counter()
    first_bad: Fraction | None = None
    worst: float | None = None
    cutoff_used = 0
    passed = True

    if record.runs_exact:
        exact = verify_exact(record, cutoff_x=cutoff_x, cache=cache)
        passed = exact.passed
        cutoff_used = exact.cutoff
        first_bad = exact.first_bad_exponent
        if not passed:
            worst = exact.worst_residual

    if passed and record.runs_numeric:
        numeric = verify_numeric(record, plan=plan, tol=tol)
        passed = numeric.passed
        worst = numeric.worst_residual

    elapsed = (time.perf_counter() - start) * 1000.0
    return VerificationReport(
        name=record.name,
        mode=record.mode,
        passed=passed,
        cutoff=cutoff_used,
        first_bad_exponent=first_bad,
        worst_residual=worst,
        elapsed_ms=elapsed,
    )


def verify_all(
    pattern: str | None = None,
    *,
    cutoff_x: int | None = None,
    jobs: int = 1,
    cache: dict | None = None,
) -> list[VerificationReport]:
    """Verify every registry record whose name matches ``pattern``.

    Reports come back ordered by record name regardless of ``jobs``; an
    unknown pattern yields an empty list.  Atom series are shared through one
    cache across records.
    """
    records = [
        r
        for r in registry()
        if pattern is None or fnmatch.fnmatchcase(r.name, pattern)
    ]
    shared = {} if cache is None else cache
    if jobs <= 1 or len(records) <= 1:
        return [verify_record(r, cutoff_x=cutoff_x, cache=shared) for r in records]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(verify_record, r, cutoff_x=cutoff_x, cache=shared)
            for r in records
        ]
        return [f.result() for f in futures]


def mutated_record(record: IdentityRecord, mutation: Mutation) -> IdentityRecord:
    """The record with one registered corruption applied."""
    changes: dict = {"name": f"{record.name}!{mutation.label}", "mutations": ()}
    if mutation.text:
        changes["text"] = mutation.text
    if mutation.numeric_key:
        changes["numeric_key"] = mutation.numeric_key
    if not mutation.text and not mutation.numeric_key:
        raise RecordConfigurationError(
            f"mutation {mutation.label!r} of {record.name!r} changes nothing"
        )
    return replace(record, **changes)


# ---------------------------------------------------------------------------
# The registry
# ---------------------------------------------------------------------------

_GRID_ENTRIES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def _negate_rhs_text(text: str) -> str:
    ast = dsl.parse(text)
    return dsl.print_ast(dsl.Identity(ast.lhs, dsl.Neg(ast.rhs)))


def _record(
    name: str,
    text: str,
    *,
    mode: str = "both",
    grading: int | None = None,
    cutoff_x: int = DEFAULT_CUTOFF_X,
    comment: str = "",
    guards: Sequence[str] = (),
    expect_nonzero: bool = False,
    mutations: Sequence[Mutation] | None = None,
    numeric_tol: float = DEFAULT_NUMERIC_TOL,
) -> IdentityRecord:
    """Build a registry record, inferring grading/order from the text.

    Unless mutations are given explicitly, a default negate-the-right-side
    control is registered (it fails whenever the sides are not identically
    zero).  Expect-nonzero records get no controls: their contract already is
    "this is not an identity".
    """
    ast = dsl.parse(text)
    guard_asts = tuple(dsl.parse_expr(g) for g in guards)
    min_grading, order = dsl.expression_requirements(ast, *guard_asts)
    if grading is None:
        grading = min_grading
    elif grading % min_grading:
        raise RecordConfigurationError(
            f"record {name!r}: grading {grading} is not a multiple of {min_grading}"
        )
    if mutations is None:
        mutations = () if expect_nonzero else (
            Mutation("negate-rhs", text=_negate_rhs_text(text)),
        )
    return IdentityRecord(
        name=name,
        text=text,
        mode=mode,
        grading=grading,
        cutoff_x=cutoff_x,
        order=order,
        comment=comment,
        guards=tuple(guards),
        expect_nonzero=expect_nonzero,
        mutations=tuple(mutations),
        numeric_tol=numeric_tol,
    )


_PROP_4_3_RHS = (
    "I * theta[0,0](4)^2 * theta[1,0](4) * theta[0,1](4)"
    " * (theta[0,0](4)^2 + 3*theta[1,0](4)^2)"
)

_QUARTIC_DIFF = "theta[1,1/4]^4 - theta[1,3/4]^4"
_QUARTIC_SUM = "theta[1,1/4]^4 + theta[1,3/4]^4"

_NONVANISHING_NOTE = (
    "guard asserts the cross-multiplier is not the zero series; its"
    " tau->i*infinity limit is deliberately not pinned (candidate constants"
    " 18-12*sqrt2 vs 12*sqrt2+18 disagree, and nonvanishing holds either way)"
)


def _thm_4_5_text(side: str, middle_factor: str) -> str:
    """Shared shape of the two quartic-sum derivative formulas.

    ``middle_factor`` is the lone scale-4 theta inside the brace; the reading
    with theta[0,1](4) verifies exactly, the theta[1,0](4) variant is the
    detected erratum kept as an expect-nonzero twin.
    """
    brace = (
        f"theta[1,0](2)^2*{middle_factor}"
        "*(theta[0,0](4)^2 + 3*theta[1,0](4)^2)"
    )
    if side == "quarter":
        return (
            f"dtheta[1,1/4] * ({_QUARTIC_SUM}) == 1/2*I * theta[1,1/4]"
            f" * theta[0,0](4) * ({brace} + 2*sqrt2*theta[1,3/4]^4*theta[0,0](2))"
        )
    return (
        f"dtheta[1,3/4] * ({_QUARTIC_SUM}) == -1/2*I * theta[1,3/4]"
        f" * theta[0,0](4) * ({brace} - 2*sqrt2*theta[1,1/4]^4*theta[0,0](2))"
    )


def _grid_records() -> list[IdentityRecord]:
    records = []
    for i, eps in enumerate(_GRID_ENTRIES):
        for j, eps_prime in enumerate(_GRID_ENTRIES):
            text = (
                f"theta[{eps},{eps_prime}]^2 =="
                f" theta[{eps},{2 * eps_prime}](2)*theta[0,0](2)"
                f" + theta[{eps + 1},{2 * eps_prime}](2)*theta[1,0](2)"
            )
            mutations: Sequence[Mutation] | None = None
            if eps == 1 and eps_prime == 1:
                # both sides vanish identically here, so negating the right
                # side is vacuous; flip one addend instead
                mutations = (
                    Mutation(
                        "flip-addend",
                        text=text.replace(
                            "+ theta[2,2](2)*theta[1,0](2)",
                            "- theta[2,2](2)*theta[1,0](2)",
                        ),
                    ),
                )
            records.append(
                _record(
                    f"lemma-2-1-grid-{i}{j}",
                    text,
                    comment=(
                        "square of a theta constant as a scale-2 bilinear"
                        f" combination, characteristic [{eps};{eps_prime}]"
                    ),
                    mutations=mutations,
                )
            )
    return records


def _build_registry() -> tuple[IdentityRecord, ...]:
    records: list[IdentityRecord] = []
    add = records.append

    # -- derivative product formulas (integer/half characteristics) --------
    add(_record(
        "jacobi",
        "dtheta[1,1] == 1/2*I * theta[0,0] * theta[1,0] * theta[0,1]",
        comment="normalization: -pi becomes i/2 under dtheta = theta'/(2*pi*i)",
    ))
    add(_record(
        "jacobi-eta",
        "eta(1)^3 == -I * dtheta[1,1]",
        comment="cube of the scale-1 eta atom against the odd derivative",
    ))
    add(_record(
        "jacobi-eta-cube",
        "etaq{(1,3); 1/8} == -I * dtheta[1,1]",
        comment=(
            "alternating-odd-weights series: the q^(1/8) prefactor carries the"
            " triangular-number shift, so coefficients are (-1)^n (2n+1) at"
            " q^(n(n+1)/2)"
        ),
    ))
    add(_record(
        "thm-1-1",
        "dtheta[1,1/2] == 1/2*I * theta[0,0](2)^2 * theta[1,1/2]",
        comment="normalization: -pi becomes i/2",
    ))

    # -- eta-quotient expansion of the half-characteristic derivative ------
    add(_record(
        "pro-series",
        "etaq{(2,9),(1,-3),(4,-3); 1/8} == -I * sqrt2 * dtheta[1,1/2]",
        comment=(
            "product side prod (1-q^(2n))^9 (1-q^n)^-3 (1-q^(4n))^-3 with the"
            " q^(1/8) shift; coefficients are the kronecker weights (-2/n)*n"
        ),
    ))
    add(_record(
        "pro-series-eta",
        "eta(2)^9 == -I * sqrt2 * dtheta[1,1/2] * eta(1)^3 * eta(4)^3",
        comment="same identity cross-multiplied into pure eta atoms",
    ))
    add(_record(
        "pro-series-scaled",
        "etaq{(16,9),(8,-3),(32,-3); 1} == -I * sqrt2 * dtheta[1,1/2](8)",
        comment=(
            "corollary of pro-series under tau -> 8*tau: the q^(1/8) prefactor"
            " becomes a clean q shift and all factor scales multiply by 8"
        ),
    ))

    # -- lattice-count generating functions --------------------------------
    add(_record(
        "s2-gf",
        "theta[0,0](2)^2 == -2*I * lambert(half)",
        comment=(
            "two-squares counts: -2i times the half-variant log-derivative"
            " series is 1 + 4 sum chi_{-4}(d) q^d/(1-q^d)"
        ),
    ))
    add(_record(
        "s12-gf",
        "theta[0,0](2) * theta[0,0](4) =="
        " -1/2*sqrt2*I * (lambert(quarter) + lambert(threequarter))",
        comment=(
            "x^2+2y^2 counts: the quarter/threequarter kernels sum to the"
            " odd character mod 8"
        ),
    ))

    # -- logarithmic-derivative expansions ----------------------------------
    add(_record(
        "lambert-half",
        "lambert(half) * theta[1,1/2] == dtheta[1,1/2]",
        comment="the half-variant series is theta'/(2*pi*i*theta) at [1;1/2]",
    ))
    add(_record(
        "lambert-quarter",
        "lambert(quarter) * theta[1,1/4] == dtheta[1,1/4]",
        comment="the quarter-variant series is theta'/(2*pi*i*theta) at [1;1/4]",
    ))
    add(_record(
        "lambert-threequarter",
        "lambert(threequarter) * theta[1,3/4] == dtheta[1,3/4]",
        comment="the threequarter-variant series is theta'/(2*pi*i*theta) at [1;3/4]",
    ))

    # -- quarter-characteristic derivative formulas -------------------------
    add(_record(
        "thm-1-2-quarter",
        "dtheta[1,1/4] == 1/2*I * theta[1,1/4] * theta[0,0](4)"
        " * (sqrt2*theta[0,0](2) - theta[0,0](4))",
        comment="normalization: -pi becomes i/2; sqrt2 lives in Q(zeta_8)",
    ))
    add(_record(
        "thm-1-2-threequarter",
        "dtheta[1,3/4] == 1/2*I * theta[1,3/4] * theta[0,0](4)"
        " * (sqrt2*theta[0,0](2) + theta[0,0](4))",
        comment="companion with the opposite inner sign",
    ))
    add(_record(
        "prop-4-1-diff",
        "dtheta[1,1/4]*theta[1,3/4] - dtheta[1,3/4]*theta[1,1/4] =="
        " -I * theta[0,0](4)^2 * theta[1,1/4] * theta[1,3/4]",
        comment="log-derivative difference, cross-multiplied; 2*pi becomes -i",
    ))
    add(_record(
        "prop-4-1-sum",
        "dtheta[1,1/4]*theta[1,3/4] + dtheta[1,3/4]*theta[1,1/4] =="
        " I * sqrt2 * theta[0,0](2) * theta[0,0](4) * theta[1,1/4] * theta[1,3/4]",
        comment="log-derivative sum, cross-multiplied; -2*sqrt2*pi becomes i*sqrt2",
    ))
    add(_record(
        "prop-4-3",
        "theta[1,1/4]^3*dtheta[1,1/4] - theta[1,3/4]^3*dtheta[1,3/4] == "
        + _PROP_4_3_RHS,
        comment="quartic-difference derivative combination; -2*pi becomes i",
        mutations=(
            Mutation(
                "negate-rhs",
                text=_negate_rhs_text(
                    "theta[1,1/4]^3*dtheta[1,1/4] - theta[1,3/4]^3*dtheta[1,3/4]"
                    " == " + _PROP_4_3_RHS
                ),
            ),
            Mutation(
                "coeff-3-to-2",
                text=(
                    "theta[1,1/4]^3*dtheta[1,1/4] - theta[1,3/4]^3*dtheta[1,3/4]"
                    " == " + _PROP_4_3_RHS.replace("3*theta[1,0](4)^2", "2*theta[1,0](4)^2")
                ),
            ),
        ),
    ))

    # -- proof sub-identities for the quartic combinations ------------------
    add(_record(
        "prop-4-3-lemma-sq-1",
        "theta[1/4,1/4]^2 == theta[1/4,1/2](2)*theta[0,0](2)"
        " + zeta(8)^5*theta[3/4,3/2](2)*theta[1,0](2)",
        comment="order-64 phases; scale-2 split of a squared eighth characteristic",
    ))
    add(_record(
        "prop-4-3-lemma-sq-2",
        "theta[1/4,3/4]^2 == theta[1/4,3/2](2)*theta[0,0](2)"
        " + zeta(8)^5*theta[3/4,1/2](2)*theta[1,0](2)",
        comment="companion square, second numerator characteristic",
    ))
    add(_record(
        "prop-4-3-lemma-sq-3",
        "theta[1/4,5/4]^2 == zeta(8)*theta[1/4,1/2](2)*theta[0,0](2)"
        " + zeta(8)^2*theta[3/4,3/2](2)*theta[1,0](2)",
        comment="companion square, third numerator characteristic",
    ))
    add(_record(
        "prop-4-3-lemma-sq-4",
        "theta[1/4,7/4]^2 == zeta(8)*theta[1/4,3/2](2)*theta[0,0](2)"
        " + zeta(8)^2*theta[3/4,1/2](2)*theta[1,0](2)",
        comment="companion square, fourth numerator characteristic",
    ))
    add(_record(
        "prop-4-3-aux1",
        "theta[1/4,0]*theta[1/4,1/2]*theta[1/4,1]*theta[1/4,3/2] =="
        " zeta(8)*theta[1/4,1](4)*theta[0,1](4)"
        "*(theta[0,0](4)^2 - theta[1,0](4)^2)",
        comment=(
            "four-fold product of eighth-characteristic constants; the brace"
            " closes with theta[1,0](4) squared (see the -printed twin)"
        ),
    ))
    add(_record(
        "prop-4-3-aux1-printed",
        "theta[1/4,0]*theta[1/4,1/2]*theta[1/4,1]*theta[1/4,3/2] =="
        " zeta(8)*theta[1/4,1](4)*theta[0,1](4)"
        "*(theta[0,0](4)^2 - theta[1,0](4))",
        mode="exact",
        expect_nonzero=True,
        comment=(
            "detected erratum: the unsquared theta[1,0](4) variant of"
            " prop-4-3-aux1 is not an identity (weight counting already"
            " forbids it); the witness exponent is 17/16"
        ),
    ))
    add(_record(
        "prop-4-3-aux2",
        "theta[0,0]*theta[0,1]*theta[1,0]^2*theta[1,1/2]^2 =="
        " 4*theta[0,0](4)*theta[1,0](4)*theta[0,1](4)^2"
        "*(theta[0,0](4)^2 - theta[1,0](4)^2)",
        comment="six-fold integer/half product collapsed to scale-4 constants",
    ))
    add(_record(
        "thm-4-5-aux",
        "theta[1,0]^2 == 2 * theta[0,0](2)*theta[1,0](2)",
        comment="square of the even-odd constant split at doubled scale",
    ))

    # -- the corollary pair with order-64 quartic combinations --------------
    add(_record(
        "cor-4-2-a",
        "(theta[1,1/4]^3*dtheta[1,1/4] - theta[1,3/4]^3*dtheta[1,3/4])"
        " * theta[1/4,0]*theta[1/4,1/2]*theta[1/4,1]*theta[1/4,3/2] =="
        " zeta(8)^3 * 1/16 * theta[0,0]*theta[0,1]*theta[1,0]^2*theta[1,1/2]^2"
        " * (theta[1/4,1/4]^4 - zeta(8)^3*theta[1/4,3/4]^4"
        " + zeta(8)^6*theta[1/4,5/4]^4 - zeta(8)*theta[1/4,7/4]^4)",
        guards=("theta[1/4,0]*theta[1/4,1/2]*theta[1/4,1]*theta[1/4,3/2]",),
        comment=(
            "cross-multiplied by the guard product; normalization"
            " pi/(8*zeta8^3) becomes zeta8^3/16"
        ),
    ))
    add(_record(
        "cor-4-2-b",
        "(theta[1,1/4]^3*dtheta[1,1/4] - theta[1,3/4]^3*dtheta[1,3/4])"
        " * theta[3/4,0]*theta[3/4,1/2]*theta[3/4,1]*theta[3/4,3/2] =="
        " zeta(8)^5 * 1/16 * theta[0,0]*theta[0,1]*theta[1,0]^2*theta[1,1/2]^2"
        " * (theta[3/4,1/4]^4 - zeta(8)*theta[3/4,3/4]^4"
        " + zeta(8)^2*theta[3/4,5/4]^4 - zeta(8)^3*theta[3/4,7/4]^4)",
        guards=("theta[3/4,0]*theta[3/4,1/2]*theta[3/4,1]*theta[3/4,3/2]",),
        comment=(
            "cross-multiplied by the guard product; normalization"
            " pi/(8*zeta8) becomes zeta8^5/16"
        ),
    ))

    # -- quartic difference/sum derivative formulas -------------------------
    add(_record(
        "thm-4-4-quarter",
        f"dtheta[1,1/4] * ({_QUARTIC_DIFF}) == I * theta[1,1/4]"
        " * theta[0,0](4)^2 * (theta[1,0](4)*theta[0,1](4)"
        "*(theta[0,0](4)^2 + 3*theta[1,0](4)^2) + theta[1,3/4]^4)",
        guards=(_QUARTIC_DIFF,),
        comment="cross-multiplied by the quartic difference (guard nonvanishing)",
    ))
    add(_record(
        "thm-4-4-threequarter",
        f"dtheta[1,3/4] * ({_QUARTIC_DIFF}) == I * theta[1,3/4]"
        " * theta[0,0](4)^2 * (theta[1,0](4)*theta[0,1](4)"
        "*(theta[0,0](4)^2 + 3*theta[1,0](4)^2) + theta[1,1/4]^4)",
        guards=(_QUARTIC_DIFF,),
        comment="companion with the quartics swapped in the brace",
    ))
    add(_record(
        "thm-4-5-quarter",
        _thm_4_5_text("quarter", "theta[0,1](4)"),
        guards=(_QUARTIC_SUM,),
        comment=(
            "quartic-sum derivative formula (reading that verifies; the"
            " -printed twin records the rejected variant); " + _NONVANISHING_NOTE
        ),
    ))
    add(_record(
        "thm-4-5-threequarter",
        _thm_4_5_text("threequarter", "theta[0,1](4)"),
        guards=(_QUARTIC_SUM,),
        comment=(
            "companion with the opposite outer sign; " + _NONVANISHING_NOTE
        ),
    ))
    add(_record(
        "thm-4-5-quarter-printed",
        _thm_4_5_text("quarter", "theta[1,0](4)"),
        mode="exact",
        expect_nonzero=True,
        comment=(
            "detected erratum: theta[1,0](4) in place of theta[0,1](4) is not"
            " an identity; the witness exponent is 5/4"
        ),
    ))
    add(_record(
        "thm-4-5-threequarter-printed",
        _thm_4_5_text("threequarter", "theta[1,0](4)"),
        mode="exact",
        expect_nonzero=True,
        comment=(
            "detected erratum, threequarter side; the witness exponent is 5/4"
        ),
    ))

    # -- three-term quartic relations ---------------------------------------
    add(_record(
        "sec5-1",
        "theta[1,0]*theta[1,1/2]^3 - theta[1,1/4]*theta[1,3/4]^3"
        " - theta[1,3/4]*theta[1,1/4]^3 == 0",
        comment="three-term relation among odd quarter constants",
        mutations=(
            Mutation(
                "flip-addend",
                text="theta[1,0]*theta[1,1/2]^3 + theta[1,1/4]*theta[1,3/4]^3"
                " - theta[1,3/4]*theta[1,1/4]^3 == 0",
            ),
        ),
    ))
    add(_record(
        "sec5-2",
        "theta[1,0]^2*theta[1,1/4]*theta[1,3/4] - theta[1,1/4]^2*theta[1,1/2]^2"
        " + theta[1,1/2]^2*theta[1,3/4]^2 == 0",
        comment="second three-term relation",
        mutations=(
            Mutation(
                "flip-addend",
                text="theta[1,0]^2*theta[1,1/4]*theta[1,3/4]"
                " + theta[1,1/4]^2*theta[1,1/2]^2"
                " + theta[1,1/2]^2*theta[1,3/4]^2 == 0",
            ),
        ),
    ))
    add(_record(
        "sec5-3",
        "theta[1,1/4]^4 - theta[1,3/4]^4 - theta[1,1/2]*theta[1,0]^3 == 0",
        comment="third three-term relation (the matrix pfaffian collapses to it)",
        mutations=(
            Mutation(
                "flip-addend",
                text="theta[1,1/4]^4 + theta[1,3/4]^4"
                " - theta[1,1/2]*theta[1,0]^3 == 0",
            ),
        ),
    ))

    # -- third-characteristic chain -----------------------------------------
    add(_record(
        "farkas-1-2",
        "6*dtheta[1,1/3]*farkasprod == etaq{(1,0); 1/12}"
        " * (zeta(6)*theta[1/3,1/3]^3 + theta[1/3,1]^3"
        " + zeta(6)^5*theta[1/3,5/3]^3)",
        grading=576,
        cutoff_x=60,
        comment=(
            "first link: six times the derivative against the restricted"
            " product equals the q^(1/12)-shifted cube combination"
        ),
    ))
    add(_record(
        "farkas-2-3",
        "sqrt3 * etaq{(1,0); 1/12} * theta[1/3,1](3) =="
        " zeta(12) * theta[1,1/3] * farkasprod",
        grading=576,
        cutoff_x=60,
        comment="second link: sqrt3 and zeta_12 both live in Q(zeta_12)",
    ))
    add(_record(
        "farkas-3-4",
        "zeta(12) * theta[1,1/3] == sqrt3 * theta[1/3,1](9)",
        grading=576,
        cutoff_x=60,
        comment="third link: scale-9 rewrite of the third characteristic",
    ))

    # -- the 5x5 grid of squared-characteristic splits -----------------------
    records.extend(_grid_records())

    # -- numeric-only records -------------------------------------------------
    records.append(IdentityRecord(
        name="prop-4-2-quarter",
        mode="numeric",
        numeric_key="constancy-quarter",
        numeric_tol=1e-8,
        plan=SamplePlan(seed=7, count=20),
        comment=(
            "zeta-dependent quartic quotient sampled for constancy and matched"
            " against its closed form -8*zeta8^3*(...)/(...)"
        ),
        mutations=(
            Mutation("drop-phase", numeric_key="constancy-quarter:drop-phase"),
        ),
    ))
    records.append(IdentityRecord(
        name="prop-4-2-threequarter",
        mode="numeric",
        numeric_key="constancy-threequarter",
        numeric_tol=1e-8,
        plan=SamplePlan(seed=7, count=20),
        comment=(
            "threequarter variant of the constancy check, closed form"
            " -8*zeta8*(...)/(...)"
        ),
        mutations=(
            Mutation("drop-phase", numeric_key="constancy-threequarter:drop-phase"),
        ),
    ))
    records.append(IdentityRecord(
        name="det-A-zero",
        mode="numeric",
        numeric_key="det-a",
        numeric_tol=1e-10,
        comment=(
            "4x4 skew matrix of odd-characteristic products has vanishing"
            " determinant (its pfaffian is the sec5-1 relation)"
        ),
        mutations=(
            Mutation("flip-entry", numeric_key="det-a:flip-entry"),
        ),
    ))

    records.sort(key=lambda r: r.name)
    names = [r.name for r in records]
    if len(set(names)) != len(names):
        raise RecordConfigurationError("duplicate record names in registry")
    return tuple(records)


_REGISTRY: tuple[IdentityRecord, ...] | None = None


def registry() -> tuple[IdentityRecord, ...]:
    """All records, ordered by name."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return _REGISTRY


def get_record(name: str) -> IdentityRecord:
    """Look up one record by its exact name."""
    for record in registry():
        if record.name == name:
            return record
    raise KeyError(f"no record named {name!r}")
