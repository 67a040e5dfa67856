import pytest

from kkw_boundary.clifford import A, B
from kkw_boundary.rational import PoleRational, pi_plus, rat_diff_xi
from kkw_boundary.scalars import F0, KAPPA, GaussianRational, I, Marked
from kkw_boundary.symbols import (
    SUPPORTED,
    UnsupportedSymbol,
    build_symbol,
    f_dependent_q6,
    jets_consistent,
    perturb_left_multiply_f,
    pi_plus_sigma_m2_pieces,
    reference_b1,
    reference_b2,
    reference_dxi2_sigma_m3,
    reference_dxi_dxn_sigma_m3,
    reference_dxi_pi_plus_sigma_m1,
    reference_dxi_sigma_m3,
    reference_pi_plus_dxn_sigma_m1,
    reference_pi_plus_sigma_m1,
    verify_f_independence,
    verify_inverse_leading,
    verify_q_minus4,
)
from kkw_boundary.symbols import _q_minus4_recursion, _sigma_m4_published, _sigma_m4_raw


@pytest.mark.parametrize("tag,order", sorted(SUPPORTED))
def test_every_supported_symbol_builds(tag, order):
    s = build_symbol(tag, order)
    assert s.order == order
    assert jets_consistent(s)


def test_unsupported():
    with pytest.raises(UnsupportedSymbol):
        build_symbol("Dinv1", -3)
    with pytest.raises(UnsupportedSymbol):
        build_symbol("Dinv3", -4, n=5)


def test_leading_symbols():
    c = PoleRational.const(A) + PoleRational.xi() * B
    assert build_symbol("Dinv1", -1).value == c * PoleRational.norm_power(1) * I
    assert build_symbol("Dinv2", -2).value == PoleRational.norm_power(1)


@pytest.mark.parametrize("n", [5, 6])
def test_inverse_leading(n):
    assert verify_inverse_leading(n).passed


def test_inverse_leading_detects_corruption():
    v = verify_inverse_leading(6, corrupt=True)
    assert not v.passed and v.residual == "-2"


def test_raw_and_simplified_order_minus4_agree():
    assert _sigma_m4_raw() == _sigma_m4_published()


def test_recursion_differs_only_by_derivative_convention():
    v = verify_q_minus4(6)
    assert v.details["matches_with_plain_derivative"]
    assert v.details["frame_traces_agree"]
    assert _q_minus4_recursion(convention="plain") == _sigma_m4_published()


def test_recursion_control_without_christoffel_term():
    assert not verify_q_minus4(6, gamma_n=GaussianRational(0), convention="plain").passed


def test_projections_of_order_minus1():
    s = build_symbol("Dinv1", -1)
    assert pi_plus(s.value) == reference_pi_plus_sigma_m1()
    assert pi_plus(s.dxn) == reference_pi_plus_dxn_sigma_m1()
    assert rat_diff_xi(pi_plus(s.value)) == reference_dxi_pi_plus_sigma_m1()


def test_order_minus2_projection_pieces():
    pieces = pi_plus_sigma_m2_pieces()
    assert pieces["B1"] == reference_b1(1) == reference_b1(2)
    assert pieces["B2"] == reference_b2()
    assert pi_plus(build_symbol("Dinv1", -2).value) == pieces["total"]


def test_derivatives_of_order_minus3():
    s = build_symbol("Dinv3", -3)
    assert rat_diff_xi(s.value) == reference_dxi_sigma_m3()
    assert rat_diff_xi(s.value, 2) == reference_dxi2_sigma_m3()
    assert rat_diff_xi(s.dxn) == reference_dxi_dxn_sigma_m3()


def test_left_multiplication_by_f():
    s = perturb_left_multiply_f(build_symbol("Dinv2", -2))
    assert s.value == build_symbol("Dinv2", -2).value * F0
    assert s.tag == "fDinv2"
    assert build_symbol("fDinv2", -2) == s


def test_f_independence():
    v = verify_f_independence()
    assert v.passed and v.details["control_nonzero"]


def test_f_dependent_q6():
    q = f_dependent_q6()
    assert q.symbol == PoleRational.norm_power(3, (-F0,))
    assert q.fiber_trace == PoleRational.norm_power(3, (F0 * -8,))
    assert q.sphere_integral == Marked(F0 * -8, 0, {5: 1})
    assert q.consistent_with_interior


def test_order_one_of_d_squared():
    # i((5/2) kappa xi - (1/2) kappa A B)
    s = build_symbol("D2", 1).value
    half = GaussianRational(1) / 2
    expected = (PoleRational.xi() * KAPPA * (I * 5 * half)) - PoleRational.const((A * B).scale(KAPPA * I * half))
    assert s == expected

