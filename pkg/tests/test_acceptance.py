"""Acceptance criteria 1-8, one test each.

Every test records a PASS/FAIL line (printed, and repeated in the pytest
terminal summary).  Run this file directly to get only those lines:

    python3 tests/test_acceptance.py
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import given, settings

from acceptance_log import record
from kkw_boundary import reference as ref
from kkw_boundary.clifford import cl_trace
from kkw_boundary.engine import VANISH_REASON, _traced, gravity_report, phi
from kkw_boundary.oracle import crosscheck_phi, make_context
from kkw_boundary.rational import PoleRational, pi_minus, pi_plus, rat_diff_xi, rat_partial_fractions
from kkw_boundary.scalars import F0, F1, KAPPA, GaussianRational, Marked, ScalarPoly
from kkw_boundary.symbols import (
    build_symbol,
    f_dependent_q6,
    pi_plus_sigma_m2_pieces,
    reference_b1,
    reference_b2,
    reference_pi_plus_dxn_sigma_m1,
    reference_pi_plus_sigma_m1,
    verify_f_independence,
    verify_inverse_leading,
    verify_q_minus4,
)
from strategies import clifford, clifford_pair, pole_rationals, scalar_polys

ORACLE_CONFIGS = [(6, 1, 3, "none"), (5, 1, 3, "none"), (6, 2, 2, "left-multiply-f")]


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def omega4(coeff):
    return Marked(coeff, 1, {4: 1})


def _finish(number, title, failures):
    record(number, title, not failures, "; ".join(failures))
    assert not failures, "; ".join(failures)


def _cases(report):
    return {c.label: c for c in report.cases}


def _expect(failures, name, got, want):
    if got != want:
        failures.append(f"{name}: got {got}, expected {want}")


def test_criterion_1_six_dimensional_cases():
    t0 = time.perf_counter()
    rep = phi(6, 1, 3)
    elapsed = time.perf_counter() - t0
    cases = _cases(rep)
    failures = []
    if cases["aI"].vanished != VANISH_REASON or not cases["aI"].integral.coeff.is_zero():
        failures.append("aI does not vanish with a recorded reason")
    _expect(failures, "aII", cases["aII"].integral, omega4(KAPPA * g(Fraction(-15, 16))))
    _expect(failures, "aIII", cases["aIII"].integral, omega4(KAPPA * g(Fraction(25, 16))))
    _expect(failures, "b", cases["b"].integral, omega4(KAPPA * g(Fraction(-25, 8), Fraction(-35, 16))))
    _expect(failures, "total", rep.total, omega4(KAPPA * g(Fraction(15, 16), Fraction(-35, 16))))
    # case c: either matches the printed value, or the recomputed value is oracle-confirmed
    # and the total stays the sum of the reported cases
    c_ok = cases["c"].integral == omega4(KAPPA * g(Fraction(55, 16)))
    if not c_ok:
        oracle = crosscheck_phi(6, 1, 3, ctx=make_context(6), report=rep, strict=False)
        total = sum((c.integral for c in rep.cases), Marked(0, 1, {4: 1}))
        c_passed = next(x["passed"] for x in oracle.cases if x["label"] == "c")
        if not (c_passed and total == rep.total):
            failures.append(f"c: {cases['c'].integral} neither matches nor is oracle-confirmed")
    if elapsed > 1.0:
        failures.append(f"exact computation took {elapsed:.2f} s")
    _finish(1, "phi(6,1,3) per-case values and total", failures)


def test_criterion_2_intermediate_integrands():
    failures = []
    rep = _cases(phi(6, 1, 3))
    for label in ("aII", "aIII", "b", "c"):
        _expect(failures, f"trace {label}", rep[label].trace, ref.TRACES[(6, 1, 3, "none", label)])
    for label in ("aII", "aIII"):
        _expect(failures, f"integrand {label}", rep[label].integrand_trace, ref.INTEGRANDS[(6, 1, 3, "none", label)])
    pieces = pi_plus_sigma_m2_pieces()
    d_sigma3 = rat_diff_xi(build_symbol("Dinv3", -3).value)
    _expect(failures, "case c, B2 half", _traced(pieces["B2"] * d_sigma3, 6), ref.TRACE_C_B2)
    _expect(failures, "case c, B1 half", _traced(pieces["B1"] * d_sigma3, 6), ref.TRACE_C_B1)
    main = _cases(phi(5, 1, 3))["main"]
    _expect(failures, "n=5 trace", main.trace, ref.TRACES[(5, 1, 3, "none", "main")])
    s = build_symbol("Dinv2", -2).value
    _expect(failures, "f1 trace of aII", _traced(pi_plus(s) * rat_diff_xi(s, 2), 6), ref.TRACE_F1_AII)
    _finish(2, "intermediate trace integrands", failures)


def test_criterion_3_five_dimensional_case_and_constant():
    failures = []
    rep = phi(5, 1, 3)
    want = Marked(ScalarPoly.const(g(0, Fraction(3, 4))), 1, {3: 1})
    _expect(failures, "phi(5,1,3)", rep.total, want)
    lhs = ref.ACTION_CONSTANT_5 * rep.total
    _expect(failures, "16 i kappa/(3 pi Omega3) * Phi", lhs, Marked(KAPPA * -4, 0, {}))
    if not gravity_report(rep)["passed"]:
        failures.append("gravity report checks fail")
    _finish(3, "phi(5,1,3) and the five-dimensional constant", failures)


def test_criterion_4_perturbed_computation():
    failures = []
    rep = phi(6, 2, 2, "left-multiply-f")
    cases = _cases(rep)
    if cases["aI"].vanished != VANISH_REASON:
        failures.append("aI does not vanish")
    _expect(failures, "aII", cases["aII"].integral, omega4(F0 * KAPPA * g(Fraction(-5, 8)) + F1 * g(0, 3)))
    _expect(failures, "aIII", cases["aIII"].integral, omega4(F0 * KAPPA * g(Fraction(5, 8))))
    _expect(failures, "b + c", cases["b"].integral + cases["c"].integral, omega4(0))
    _expect(failures, "total", rep.total, omega4(F1 * g(0, 3)))
    _finish(4, "phi(6,2,2) with f multiplied on the left", failures)


def test_criterion_5_symbol_identities():
    failures = []
    if not verify_inverse_leading(6).passed:
        failures.append("verify_inverse_leading")
    q4 = verify_q_minus4(6)
    if not q4.passed:
        failures.append(
            f"verify_q_minus4 residual {q4.residual} "
            f"(plain-derivative reading matches: {q4.details['matches_with_plain_derivative']})"
        )
    s1 = build_symbol("Dinv1", -1)
    _expect(failures, "pi+ sigma_-1", pi_plus(s1.value), reference_pi_plus_sigma_m1())
    _expect(failures, "pi+ dxn sigma_-1", pi_plus(s1.dxn), reference_pi_plus_dxn_sigma_m1())
    _expect(failures, "pi+ sigma_-2(D^-1)", pi_plus(build_symbol("Dinv1", -2).value), reference_b1() - reference_b2())
    if not verify_f_independence().passed:
        failures.append("verify_f_independence")
    q6 = f_dependent_q6()
    _expect(failures, "f-dependent q_-6", q6.symbol, PoleRational.norm_power(3, (-F0,)))
    if not q6.consistent_with_interior:
        failures.append("sphere integral of the f-dependent trace")
    _finish(5, "symbol-level identities", failures)


def test_criterion_6_gravitational_assembly():
    failures = []
    _expect(failures, "(7i/8 - 3/8)(-5/2)", ref.BOUNDARY_COEFF_6 * g(Fraction(-5, 2)), g(Fraction(15, 16), Fraction(-35, 16)))
    report = gravity_report(phi(6, 1, 3))
    for c in report["checks"]:
        if not c["passed"]:
            failures.append(c["name"])
    # the corollary constants are exact inverses
    phi_coeff = Marked(ScalarPoly.const(ref.BOUNDARY_COEFF_6 * g(Fraction(-5, 2))), 1, {4: 1})
    _expect(failures, "boundary constant * Phi/kappa", ref.BOUNDARY_CONSTANT_6 * phi_coeff, Marked(-5, 0, {}))
    interior = ref.INTERIOR_CONSTANT_6 * ref.INTERIOR_WRES_6
    _expect(failures, "interior constant * Wres coefficient", interior, Marked(ScalarPoly.const(g(Fraction(1, 16))), -1, {}))
    _finish(6, "gravitational assembly identities", failures)


def test_criterion_7_property_suites():
    failures = []

    @settings(max_examples=1000, deadline=None, database=None)
    @given(clifford_pair())
    def cyclicity(pair):
        x, y = pair
        assert cl_trace(x * y, 6) == cl_trace(y * x, 6)

    @settings(max_examples=500, deadline=None, database=None)
    @given(pole_rationals(with_p=True))
    def projectors(x):
        p, m = pi_plus(x), pi_minus(x)
        assert p + m == x and pi_plus(p) == p and pi_minus(m) == m and pi_plus(m).is_zero()

    @settings(max_examples=200, deadline=None, database=None)
    @given(pole_rationals(proper=False))
    def recombination(x):
        assert rat_partial_fractions(x).recombine() == x

    @settings(max_examples=200, deadline=None, database=None)
    @given(clifford(), clifford(with_p=False), clifford(with_p=False))
    def confluence(x, y, z):
        assert (x * y) * z == x * (y * z)

    @settings(max_examples=200, deadline=None, database=None)
    @given(scalar_polys(), scalar_polys(), scalar_polys())
    def ring(p, q, r):
        assert (p * q) * r == p * (q * r) and p * (q + r) == p * q + p * r and p + q == q + p

    @settings(max_examples=200, deadline=None, database=None)
    @given(scalar_polys())
    def json_roundtrip(p):
        import json

        m = Marked(p, 1, {4: 1})
        text = json.dumps(m.to_json(), sort_keys=True)
        assert Marked.from_json(json.loads(text)) == m
        assert json.dumps(Marked.from_json(json.loads(text)).to_json(), sort_keys=True) == text

    for check in (cyclicity, projectors, recombination, confluence, ring, json_roundtrip):
        try:
            check()
        except Exception as exc:  # noqa: BLE001
            failures.append(f"{check.__name__}: {type(exc).__name__}")
    _finish(7, "property suites", failures)


def test_criterion_8_oracle_agreement():
    failures = []
    t0 = time.perf_counter()
    for n, p1, p2, pert in ORACLE_CONFIGS:
        rep = phi(n, p1, p2, pert)
        for seed in (0, 1, 2):
            res = crosscheck_phi(n, p1, p2, pert, ctx=make_context(n, seed), tol=1e-8, directions=5, report=rep, strict=False)
            for c in res.cases:
                if not c["passed"] or c["spread"] >= 1e-9:
                    failures.append(f"({n},{p1},{p2},{pert}) seed {seed} case {c['label']}")
            if not res.total["passed"]:
                failures.append(f"({n},{p1},{p2},{pert}) seed {seed} total")
    elapsed = time.perf_counter() - t0
    if elapsed > 30:
        failures.append(f"oracle sweep took {elapsed:.1f} s")
    _finish(8, f"oracle agreement, 3 seeds x 5 directions ({elapsed:.1f} s)", failures)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
