"""A small expression language over the exact algebra.

    expr   := term (('+'|'-') term)*
    term   := unary (('*' unary) | ('/' denom))*
    unary  := '-' unary | factor
    factor := base ('^' nat)?
    base   := atom | '(' expr ')' | fn '(' expr ')'
    atom   := A | B | P | xi | kappa | u | f0 | f1 | i | pi | nat
    fn     := tr | piplus | piminus | dxi | dxn | int
    denom  := nat | '(' xi ('-'|'+') i ')' ('^' nat)? | '(' denom ('*' denom)* ')'

Division is only allowed by products of integers and the pole factors
(xi - i), (xi + i); anything else is rejected while parsing.

Each node evaluates to a value together with its x_n-derivative, so `dxn`
is the Leibniz rule applied to: dxn A = P, dxn f0 = f1, and
dxn (xi -+ i)^-a = +-(i a kappa/2) (xi -+ i)^-(a+1), the poles sitting at
+-i sqrt(h).  P and f1 have no stored derivative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .clifford import A, B, P, PDegreeOverflow
from .rational import ImproperRational, NotIntegrable, PoleRational, integrate_line, pi_half, rat_diff_xi
from .scalars import F0, F1, KAPPA, U, GaussianRational, I, Marked, ScalarPoly

FUNCTIONS = ("tr", "piplus", "piminus", "dxi", "dxn", "int")
ATOMS = ("A", "B", "P", "xi", "kappa", "u", "f0", "f1", "i", "pi")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{pointer}")


class SemanticError(ValueError):
    """Well-formed input whose evaluation is undefined (e.g. a divergent integral)."""


@dataclass(frozen=True)
class Value:
    """A PoleRational times pi^pi_power."""

    rat: PoleRational
    pi: int = 0

    def _align(self, other: "Value"):
        if self.rat.is_zero():
            return Value(self.rat, other.pi), other
        if other.rat.is_zero():
            return self, Value(other.rat, self.pi)
        if self.pi != other.pi:
            raise SemanticError("cannot add terms with different powers of pi")
        return self, other

    def __add__(self, other):
        a, b = self._align(other)
        return Value(a.rat + b.rat, a.pi)

    def __neg__(self):
        return Value(-self.rat, self.pi)

    def __mul__(self, other):
        return Value(self.rat * other.rat, self.pi + other.pi)

    def render(self) -> str:
        if self.pi == 0:
            return str(self.rat)
        r = self.rat
        if r.is_zero():
            return "0"
        if r.a == 0 and r.b == 0 and len(r.numerator) == 1 and r.numerator[0].is_scalar():
            return str(Marked(r.numerator[0].coeff("1"), self.pi))
        factor = "pi" if self.pi == 1 else f"pi^{self.pi}"
        return f"({r})*{factor}"

    def simplest(self):
        """The value as a ScalarPoly, CliffordElement or PoleRational when pi is absent."""
        if self.pi:
            return self
        r = self.rat
        if r.a == 0 and r.b == 0 and len(r.numerator) <= 1:
            c = r.numerator[0] if r.numerator else None
            if c is None:
                return ScalarPoly()
            return c.coeff("1") if c.is_scalar() else c
        return r

    def __str__(self):
        return self.render()


_ZERO = Value(PoleRational())


def _const(c) -> Value:
    return Value(PoleRational.const(c))


@dataclass(frozen=True)
class JetValue:
    value: Value
    dxn: Value | None

    def __add__(self, other):
        d = None if self.dxn is None or other.dxn is None else self.dxn + other.dxn
        return JetValue(self.value + other.value, d)

    def __neg__(self):
        return JetValue(-self.value, None if self.dxn is None else -self.dxn)

    def __mul__(self, other):
        if self.dxn is None or other.dxn is None:
            d = None
        else:
            d = self.dxn * other.value + self.value * other.dxn
        return JetValue(self.value * other.value, d)

    def map(self, fn):
        return JetValue(fn(self.value), None if self.dxn is None else fn(self.dxn))


def _atom(name: str) -> JetValue:
    if name == "A":
        return JetValue(_const(A), _const(P))
    if name == "B":
        return JetValue(_const(B), _ZERO)
    if name == "P":
        return JetValue(_const(P), None)
    if name == "xi":
        return JetValue(Value(PoleRational.xi()), _ZERO)
    if name == "kappa":
        return JetValue(_const(KAPPA), _ZERO)
    if name == "u":
        return JetValue(_const(U), _ZERO)
    if name == "f0":
        return JetValue(_const(F0), _const(F1))
    if name == "f1":
        return JetValue(_const(F1), None)
    if name == "i":
        return JetValue(_const(I), _ZERO)
    if name == "pi":
        return JetValue(Value(PoleRational.const(1), 1), _ZERO)
    raise KeyError(name)


def _pole_jet(sign: str, a: int) -> JetValue:
    """(xi - i)^-a for sign '-', (xi + i)^-a for sign '+'."""
    if sign == "-":
        v = PoleRational.const(1).divide_pole(a, 0)
        d = PoleRational.const(KAPPA * (I * GaussianRational(Fraction(a, 2)))).divide_pole(a + 1, 0)
    else:
        v = PoleRational.const(1).divide_pole(0, a)
        d = PoleRational.const(KAPPA * (-I * GaussianRational(Fraction(a, 2)))).divide_pole(0, a + 1)
    return JetValue(Value(v), Value(d))


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex) if m.lastindex else m.end()
            if m.group(1):
                self.tokens.append(("num", m.group(1), start))
            elif m.group(2):
                word = m.group(2)
                if word in FUNCTIONS:
                    self.tokens.append(("fn", word, start))
                elif word in ATOMS:
                    self.tokens.append(("atom", word, start))
                else:
                    raise ParseError(f"unknown name {word!r}", start, text)
            elif m.group(3):
                self.tokens.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    # -- token helpers --
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] not in ("op", "atom"):
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def is_op(self, value: str) -> bool:
        tok = self.peek()
        return tok[0] == "op" and tok[1] == value

    def nat(self) -> int:
        tok = self.take()
        if tok[0] != "num":
            raise ParseError("expected a natural number", tok[2], self.text)
        return int(tok[1])

    # -- grammar --
    def parse(self) -> JetValue:
        v = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return v

    def expr(self) -> JetValue:
        v = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v + (-rhs)
        return v

    def term(self) -> JetValue:
        v = self.unary()
        while self.is_op("*") or self.is_op("/"):
            op = self.take()[1]
            if op == "*":
                v = self._mul(v, self.unary())
            else:
                v = self._mul(v, self.denom())
        return v

    def _mul(self, x: JetValue, y: JetValue) -> JetValue:
        try:
            return x * y
        except PDegreeOverflow as exc:
            raise SemanticError(str(exc)) from exc

    def unary(self) -> JetValue:
        if self.is_op("-"):
            self.take()
            return -self.unary()
        return self.factor()

    def factor(self) -> JetValue:
        v = self.base()
        if self.is_op("^"):
            self.take()
            k = self.nat()
            out = JetValue(_const(1), _ZERO)
            for _ in range(k):
                out = self._mul(out, v)
            v = out
        return v

    def base(self) -> JetValue:
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return JetValue(_const(int(tok[1])), _ZERO)
        if tok[0] == "atom":
            self.take()
            return _atom(tok[1])
        if tok[0] == "fn":
            self.take()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return self.apply(tok[1], arg, tok[2])
        if self.is_op("("):
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], self.text)

    def denom(self) -> JetValue:
        """Parse a denominator and return its reciprocal."""
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            k = int(tok[1])
            if k == 0:
                raise SemanticError("division by zero")
            inv = JetValue(_const(GaussianRational(1) / k), _ZERO)
            return self._maybe_power(inv)
        if not self.is_op("("):
            raise ParseError("denominators must be integers or products of (xi-i), (xi+i)", tok[2], self.text)
        self.take()
        # pole factor?
        t = self.tokens[self.i : self.i + 4]
        if (
            len(t) == 4
            and t[0][:2] == ("atom", "xi")
            and t[1][0] == "op"
            and t[1][1] in "+-"
            and t[2][:2] == ("atom", "i")
            and t[3][:2] == ("op", ")")
        ):
            self.i += 4
            a = 1
            if self.is_op("^"):
                self.take()
                a = self.nat()
            return _pole_jet(t[1][1], a)
        v = self.denom()
        while self.is_op("*"):
            self.take()
            v = self._mul(v, self.denom())
        tok = self.peek()
        if not self.is_op(")"):
            raise ParseError("denominators must be integers or products of (xi-i), (xi+i)", tok[2], self.text)
        self.take()
        return self._maybe_power(v)

    def _maybe_power(self, v: JetValue) -> JetValue:
        if self.is_op("^"):
            self.take()
            k = self.nat()
            out = JetValue(_const(1), _ZERO)
            for _ in range(k):
                out = out * v
            return out
        return v

    def apply(self, fn: str, arg: JetValue, pos: int) -> JetValue:
        try:
            if fn == "tr":
                return arg.map(lambda v: Value(v.rat.trace(self.n), v.pi))
            if fn in ("piplus", "piminus"):
                side = "plus" if fn == "piplus" else "minus"
                return arg.map(lambda v: Value(pi_half(v.rat, side), v.pi))
            if fn == "dxi":
                return arg.map(lambda v: Value(rat_diff_xi(v.rat, 1), v.pi))
            if fn == "dxn":
                if arg.dxn is None:
                    raise SemanticError("x_n-derivative not available (P and f1 have no stored derivative)")
                return JetValue(arg.dxn, None)
            if fn == "int":
                return arg.map(_integrate)
        except (ImproperRational, NotIntegrable, PDegreeOverflow) as exc:
            raise SemanticError(f"{fn} at position {pos}: {exc}") from exc
        raise ParseError(f"unknown function {fn!r}", pos, self.text)


def _integrate(v: Value) -> Value:
    res = integrate_line(v.rat)
    return Value(PoleRational.const(res.coefficient), v.pi + res.pi_power)


def parse_expr(text: str, n: int = 6) -> Value:
    """Parse and evaluate `text`; the fiber dimension n is used by tr."""
    return _Parser(text, n).parse().value


def evaluate_text(text: str, n: int = 6) -> str:
    return parse_expr(text, n).render()
