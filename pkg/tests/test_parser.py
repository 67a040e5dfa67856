import pytest
from hypothesis import given
from hypothesis import strategies as st

from kkw_boundary.parser import ParseError, SemanticError, evaluate_text, parse_expr


@pytest.mark.parametrize(
    "text,expected",
    [
        ("tr(P*A)", "-4*kappa*u"),
        ("piplus(1/((xi-i)*(xi+i)))", "-i/(2*(xi-i))"),
        ("int((2*i-6*xi)/((xi-i)^3*(xi+i)^3))", "(3/4)*pi*i"),
        ("int(1/((xi-i)*(xi+i)))", "pi"),
        ("B*A", "-A*B"),
        ("(1+2*i)*(1-2*i)", "5"),
        ("dxn(f0*kappa)", "kappa*f1"),
        ("dxn(1/(xi-i))", "i*kappa/(2*(xi-i)^2)"),
        ("dxi(1/((xi-i)*(xi+i)))", "-2*xi/((xi-i)^2*(xi+i)^2)"),
        ("piminus(1/((xi-i)*(xi+i)))", "i/(2*(xi+i))"),
        ("1/2 + 1/3", "5/6"),
    ],
)
def test_evaluation(text, expected):
    assert evaluate_text(text) == expected


def test_trace_uses_dimension():
    assert evaluate_text("tr(1)", n=5) == "4"
    assert evaluate_text("tr(1)", n=6) == "8"


@pytest.mark.parametrize(
    "text,pos",
    [("1/xi", 2), ("tr(A", 4), ("A +", 3), ("foo(A)", 0), ("A $ B", 2), ("1/(xi-2)", 3)],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.position == pos


@pytest.mark.parametrize("text", ["int(xi/((xi-i)*(xi+i)))", "P*P", "piplus(xi)", "dxn(P)", "1/0"])
def test_semantic_errors(text):
    with pytest.raises(SemanticError):
        parse_expr(text)


ROUND_TRIP = [
    "tr(P*A)",
    "piplus(1/((xi-i)*(xi+i)))",
    "dxi(i*(A+xi*B)/((xi-i)^2*(xi+i)^2))",
    "dxn(i*(A+xi*B)/((xi-i)*(xi+i)))",
    "kappa*(3*A*B - P*A)/((xi-i)^4*(xi+i)^3)",
    "(1/2)*f0 - (3/4)*i*f1*kappa",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip(text):
    v = parse_expr(text)
    again = parse_expr(v.render())
    assert again == v
    assert again.render() == v.render()


atoms = st.sampled_from(["A", "B", "xi", "kappa", "u", "f0", "i", "2", "1/(xi-i)", "1/(xi+i)^2", "(1/3)"])


@given(st.lists(st.tuples(atoms, atoms, st.sampled_from(["+", "-"])), min_size=1, max_size=4))
def test_round_trip_random(parts):
    text = "0 " + " ".join(f"{op} {a}*{b}" for a, b, op in parts)
    v = parse_expr(text)
    assert parse_expr(v.render()) == v
