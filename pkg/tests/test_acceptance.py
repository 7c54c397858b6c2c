"""Acceptance gate: one test per shipping criterion.

Each test carries its stated runtime budget (asserted where one applies) and
uses only public package API plus the command-line surface.  The terminal
summary hook in conftest.py prints one PASS/FAIL line per criterion.
"""

import json
import math
import random
from dataclasses import replace
from fractions import Fraction
from time import perf_counter

import jsonschema

import test_cli
from thetaver import arith, cli, dsl
from thetaver import identities as ids
from thetaver import numeric as nm
from thetaver.thetaforms import (
    Characteristic,
    EtaQuotientSpec,
    eta_quotient,
    theta_constant,
    theta_min_grading,
    triple_product_theta,
)


def test_criterion_01_representation_counts_match_lattice():
    start = perf_counter()
    for n in range(5001):
        assert arith.s2_formula(n) == arith.s2_lattice(n), n
        assert arith.s12_formula(n) == arith.s12_lattice(n), n
    assert perf_counter() - start < 5.0


def test_criterion_02_theta_squares_generate_counts():
    start = perf_counter()
    cutoff = 501
    base = theta_constant(Characteristic(Fraction(0), Fraction(0), 1), 1, cutoff)
    doubled = theta_constant(Characteristic(Fraction(0), Fraction(0), 2), 1, cutoff)
    squares = base * base
    mixed = base * doubled
    for n in range(501):
        assert squares.coefficient(n).as_rational() == arith.s2_formula(n), n
        assert mixed.coefficient(n).as_rational() == arith.s12_formula(n), n
    assert perf_counter() - start < 10.0


def test_criterion_03_cube_product_alternating_odd_weights():
    start = perf_counter()
    cube = eta_quotient(EtaQuotientSpec(((1, 3),)), 1, 601)
    tri = {}
    n = 0
    while arith.triangular(n) <= 300:
        tri[arith.triangular(n)] = n
        n += 1
    for k in range(301):
        got = cube.coefficient(2 * k).as_rational()
        if k in tri:
            m = tri[k]
            assert got == (-1) ** m * (2 * m + 1), k
        else:
            assert got == 0, k
    assert perf_counter() - start < 5.0


def test_criterion_04_half_characteristic_product_series(atom_cache):
    start = perf_counter()
    head = ids.verify_exact(ids.get_record("thm-1-1"), cache=atom_cache)
    assert head.passed and head.cutoff == 100

    deep = ids.verify_exact(ids.get_record("pro-series"), cutoff_x=601)
    assert deep.passed and deep.cutoff == 601

    product = eta_quotient(EtaQuotientSpec(((2, 9), (1, -3), (4, -3))), 1, 601)
    for k in range(301):
        got = product.coefficient(2 * k).as_rational()
        root = math.isqrt(8 * k + 1)
        if root * root == 8 * k + 1:
            assert got == arith.kronecker_m2(root) * root, k
        else:
            assert got == 0, k
    spots = {0: 1, 1: 3, 3: -5, 6: -7, 10: 9, 2: 0, 4: 0, 5: 0}
    for k, want in spots.items():
        assert product.coefficient(2 * k).as_rational() == want, k
    assert perf_counter() - start < 30.0


def test_criterion_05_registry_exact_at_two_depths(atom_cache):
    start = perf_counter()
    first = ids.verify_all(cache=atom_cache)
    assert len(first) == 67
    assert all(r.passed for r in first), [r.name for r in first if not r.passed]
    deeper = ids.verify_all(cutoff_x=150, cache=atom_cache)
    assert all(r.passed for r in deeper), [r.name for r in deeper if not r.passed]
    assert perf_counter() - start < 300.0


def test_criterion_06_third_characteristic_chain(atom_cache):
    start = perf_counter()
    reports = ids.verify_all("farkas-*", cache=atom_cache)
    assert [r.name for r in reports] == ["farkas-1-2", "farkas-2-3", "farkas-3-4"]
    assert all(r.passed for r in reports)
    for report in reports:
        record = ids.get_record(report.name)
        assert record.grading == 576
        assert report.cutoff == 60
    assert perf_counter() - start < 120.0


def test_criterion_07_two_characteristic_grid(atom_cache):
    start = perf_counter()
    reports = ids.verify_all("lemma-2-1-grid-*", cache=atom_cache)
    assert len(reports) == 25
    assert all(r.passed for r in reports), [r.name for r in reports if not r.passed]
    assert perf_counter() - start < 120.0


def _theta_atoms(node, found):
    if isinstance(node, dsl.Identity):
        _theta_atoms(node.lhs, found)
        _theta_atoms(node.rhs, found)
    elif isinstance(node, dsl.Theta):
        found.add((node.eps, node.eps_prime, node.scale))
    elif isinstance(node, dsl.Neg):
        _theta_atoms(node.inner, found)
    elif isinstance(node, dsl.Pow):
        _theta_atoms(node.base, found)
    elif isinstance(node, (dsl.Add, dsl.Sub, dsl.Mul)):
        _theta_atoms(node.left, found)
        _theta_atoms(node.right, found)


def test_criterion_08_triple_product_oracle():
    found: set = set()
    for record in ids.registry():
        if record.text:
            _theta_atoms(dsl.parse(record.text), found)
        for guard in record.guards:
            _theta_atoms(dsl.parse_expr(guard), found)
    assert len(found) >= 20  # every characteristic the registry touches
    for eps, eps_prime, scale in sorted(found):
        ch = Characteristic(eps, eps_prime, scale)
        grading = theta_min_grading(ch)
        window = 50 * grading
        # the product form spends eps^2*scale/4 of its depth on the
        # prefactor shift, so build past the comparison window
        build = (50 + 6) * grading
        summed = theta_constant(ch, grading, build)
        product = triple_product_theta(ch, grading, build)
        assert min(summed.cutoff, product.cutoff) >= window, (eps, eps_prime, scale)
        assert summed.truncate(window) == product.truncate(window), (
            eps, eps_prime, scale,
        )


def test_criterion_09_numeric_suite():
    plan = nm.SamplePlan(seed=7, count=20)
    for variant in ("quarter", "threequarter"):
        result = nm.check_elliptic_constancy(variant, plan)
        assert result.worst_residual < 1e-8, variant
        assert result.closed_form_residual < 1e-8, variant
    for name in ("prop-4-2-quarter", "prop-4-2-threequarter", "det-A-zero"):
        report = ids.verify_numeric(ids.get_record(name))
        assert report.passed, name

    for tau in (1j, 0.3 + 1.2j):
        assert nm.det_a_residual(tau) < 1e-10, tau

    fe_plan = nm.SamplePlan(seed=3, count=50)
    shifts = [(0, 1), (1, 0), (1, 1), (-1, 2), (2, -1)]
    chars = [
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(1, 4)),
        (Fraction(1, 4), Fraction(3, 4)),
        (Fraction(1, 3), Fraction(2, 3)),
    ]
    worst = 0.0
    for idx, (zeta_s, tau) in enumerate(fe_plan.samples()):
        eps, epsp = chars[idx % len(chars)]
        m, n = shifts[idx % len(shifts)]
        worst = max(
            worst,
            nm.check_quasi_periodicity(eps, epsp, zeta_s, tau, m, n),
            nm.check_half_period(eps, epsp, zeta_s, tau, m, n),
        )
    assert worst < 1e-10, worst

    for eps, epsp in (
        (0, 0), (1, 0), (0, 1), (1, 1),
        (Fraction(1, 4), Fraction(3, 4)), (1, Fraction(1, 4)),
    ):
        for tau in (1j, 1 + 1.5j):
            assert nm.zero_location_residual(eps, epsp, tau) < 1e-9, (eps, epsp)


def test_criterion_10_negative_controls(atom_cache):
    exact_mutants = numeric_mutants = 0
    for record in ids.registry():
        for mutation in record.mutations:
            mutant = ids.mutated_record(record, mutation)
            if mutant.runs_exact:
                exact_mutants += 1
                report = ids.verify_exact(mutant, cache=atom_cache)
                assert not report.passed, mutant.name
                assert isinstance(report.first_bad_exponent, Fraction), mutant.name
            else:
                numeric_mutants += 1
                report = ids.verify_numeric(mutant)
                assert not report.passed, mutant.name
                assert report.worst_residual >= mutant.numeric_tol, mutant.name
    assert exact_mutants + numeric_mutants == 65
    assert numeric_mutants == 3


def test_criterion_11_dsl_round_trip_file_fuzz(tmp_path, atom_cache):
    # parse-print round trip over every registry text and guard
    for record in ids.registry():
        if record.text:
            printed = dsl.print_ast(dsl.parse(record.text))
            assert dsl.parse(printed) == dsl.parse(record.text), record.name
        for guard in record.guards:
            printed = dsl.print_ast(dsl.parse_expr(guard))
            assert dsl.parse_expr(printed) == dsl.parse_expr(guard), record.name

    # a file elaborated from the registry reproduces the built-in verdicts
    plain = [
        r for r in ids.registry()
        if r.runs_exact and not r.expect_nonzero
    ]
    path = tmp_path / "registry.thid"
    path.write_text("\n\n".join(r.text for r in plain) + "\n")
    parsed = dsl.parse_file(path.read_text())
    assert len(parsed) == len(plain)
    for record, (line, ast) in zip(plain, parsed):
        elaborated = dsl.elaborate(ast, name=f"registry.thid:{line}")
        report = ids.verify_exact(elaborated, cache=atom_cache)
        builtin = ids.verify_exact(record, cache=atom_cache)
        assert report.passed == builtin.passed is True, record.name

    # the expect-nonzero twins elaborate to failing plain identities,
    # matching the built-in witness verdicts
    for name in ("prop-4-3-aux1-printed", "thm-4-5-quarter-printed"):
        record = ids.get_record(name)
        elaborated = dsl.elaborate(dsl.parse(record.text), name=f"{name}-plain")
        report = ids.verify_exact(elaborated, cache=atom_cache)
        builtin = ids.verify_exact(record, cache=atom_cache)
        assert builtin.passed and not report.passed
        assert report.first_bad_exponent == builtin.first_bad_exponent

    # fuzz: malformed inputs always raise positioned errors, never crash
    rng = random.Random(20260814)
    pool = [
        "theta", "dtheta", "eta", "etaq", "farkasprod", "lambert",
        "zeta", "sqrt2", "sqrt3", "I",
        "[", "]", "(", ")", "{", "}", ",", ";", "==", "^", "*", "+", "-",
        "1", "2", "0", "1/2", "3/4", "17", "quarter", "x", "$", "\n", " ",
    ]
    crashes = 0
    parsed_ok = 0
    for _ in range(10_000):
        text = "".join(rng.choice(pool) for _ in range(rng.randint(1, 12)))
        try:
            dsl.parse(text)
            parsed_ok += 1
        except dsl.ParseError as exc:
            assert exc.line >= 1 and exc.column >= 1, text
        except Exception:  # pragma: no cover - the criterion forbids this
            crashes += 1
    assert crashes == 0
    assert parsed_ok < 1000  # the pool is overwhelmingly malformed


def test_criterion_12_cli_json_determinism(capsys, monkeypatch):
    code = cli.main(["verify-all", "--json"])
    first = capsys.readouterr().out
    assert code == 0
    payload = json.loads(first)
    jsonschema.validate(payload, test_cli.SUITE_SCHEMA)
    assert payload["total"] == 67
    assert payload["failed"] == 0

    monkeypatch.setenv("THETA_CLI_THREADS", "4")
    code = cli.main(["verify-all", "--json"])
    second = capsys.readouterr().out
    assert code == 0
    assert test_cli.strip_timings(json.loads(first)) == test_cli.strip_timings(
        json.loads(second)
    )
