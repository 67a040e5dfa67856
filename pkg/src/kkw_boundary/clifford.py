"""Symbol algebra generated by A = c(xi'), B = c(dx_n), P = d_xn c(xi').

Relations: AB + BA = 0, A^2 = -u, B^2 = -1, AP + PA = -kappa*u, BP + PB = 0.
P is kept abstract; every product is rewritten to the canonical monomials
1, A, B, AB, P, PA, PB, PAB (P first, then A, then B).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .scalars import KAPPA, U, GaussianRational, ScalarPoly, join_signed, monomial_factors, render_term

MONOMIALS = ("1", "A", "B", "AB", "P", "PA", "PB", "PAB")
_TEXT = {"1": "1", "A": "A", "B": "B", "AB": "A*B", "P": "P", "PA": "P*A", "PB": "P*B", "PAB": "P*A*B"}


class PDegreeOverflow(ArithmeticError):
    """A product would contain P twice; no rule for P^2 exists in this algebra."""


def _word_key(word: str) -> str:
    return word if word else "1"


@lru_cache(maxsize=None)
def reduce_word(word: str) -> tuple:
    """Rewrite a word over {A, B, P} to canonical form.

    Returns a tuple of (monomial, ScalarPoly) pairs with nonzero coefficients.
    """
    if word.count("P") > 1:
        raise PDegreeOverflow(f"word {word!r} has P-degree {word.count('P')}")
    acc: dict[str, ScalarPoly] = {}

    def add(mono: str, coeff: ScalarPoly):
        s = acc.get(mono, ScalarPoly()) + coeff
        if s.is_zero():
            acc.pop(mono, None)
        else:
            acc[mono] = s

    p = word.find("P")
    if p > 0:
        left = word[p - 1]
        # XP -> -PX, plus -kappa*u when X = A
        for mono, c in reduce_word(word[: p - 1] + "P" + left + word[p + 1 :]):
            add(mono, -c)
        if left == "A":
            for mono, c in reduce_word(word[: p - 1] + word[p + 1 :]):
                add(mono, -(KAPPA * U) * c)
        return tuple(sorted(acc.items(), key=lambda t: MONOMIALS.index(t[0])))

    prefix = "P" if p == 0 else ""
    body = word[1:] if p == 0 else word
    sign = 1
    letters = list(body)
    # bubble B's to the right: BA -> -AB
    changed = True
    while changed:
        changed = False
        for k in range(len(letters) - 1):
            if letters[k] == "B" and letters[k + 1] == "A":
                letters[k], letters[k + 1] = "A", "B"
                sign = -sign
                changed = True
    na = letters.count("A")
    nb = letters.count("B")
    coeff = ScalarPoly.const(sign) * ((-U) ** (na // 2)) * ScalarPoly.const((-1) ** (nb // 2))
    mono = _word_key(prefix + "A" * (na % 2) + "B" * (nb % 2))
    add(mono, coeff)
    return tuple(acc.items())


def _table():
    table = {}
    for m1 in MONOMIALS:
        for m2 in MONOMIALS:
            w = (m1 if m1 != "1" else "") + (m2 if m2 != "1" else "")
            try:
                table[m1, m2] = reduce_word(w)
            except PDegreeOverflow:
                table[m1, m2] = None
    return table


_MUL = _table()


class CliffordElement:
    """Linear combination of the eight canonical monomials over ScalarPoly."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Mapping[str, object] | None = None):
        clean = {}
        for mono, c in (coeffs or {}).items():
            if mono not in MONOMIALS:
                raise ValueError(f"unknown monomial {mono!r}")
            c = ScalarPoly.coerce(c)
            if not c.is_zero():
                clean[mono] = c
        self.coeffs = clean
        self._hash = None

    @classmethod
    def scalar(cls, value) -> "CliffordElement":
        return cls({"1": ScalarPoly.coerce(value)})

    @classmethod
    def gen(cls, name: str) -> "CliffordElement":
        return cls({name: ScalarPoly.const(1)})

    @classmethod
    def coerce(cls, value) -> "CliffordElement":
        if isinstance(value, CliffordElement):
            return value
        return cls.scalar(value)

    def coeff(self, mono: str) -> ScalarPoly:
        return self.coeffs.get(mono, ScalarPoly())

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_scalar(self) -> bool:
        return set(self.coeffs) <= {"1"}

    def p_degree(self) -> int:
        return 1 if any(m.startswith("P") for m in self.coeffs) else 0

    def __add__(self, other):
        other = CliffordElement.coerce(other)
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            s = out[mono] + c if mono in out else c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return _raw(out)

    __radd__ = __add__

    def __neg__(self):
        return _raw({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-CliffordElement.coerce(other))

    def __rsub__(self, other):
        return CliffordElement.coerce(other) - self

    def scale(self, c) -> "CliffordElement":
        if not isinstance(c, (GaussianRational, ScalarPoly)):
            c = GaussianRational.coerce(c)
        return CliffordElement({m: v * c for m, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, ScalarPoly)):
            return self.scale(other)
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return cl_mul(self, other)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.scale(other)

    def subs(self, assignments) -> "CliffordElement":
        return CliffordElement({m: c.subs(assignments) for m, c in self.coeffs.items()})

    def map_coeffs(self, fn) -> "CliffordElement":
        return CliffordElement({m: fn(c) for m, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            if isinstance(other, (int, GaussianRational, ScalarPoly)):
                other = CliffordElement.scalar(other)
            else:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def __repr__(self):
        return f"CliffordElement({self})"

    def __str__(self):
        return self.render()

    def flat_terms(self):
        """(coefficient, scalar factors, monomial text) triples in canonical order."""
        for mono in MONOMIALS:
            if mono not in self.coeffs:
                continue
            for exp, c in self.coeffs[mono].sorted_terms():
                yield c, exp, mono

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for c, exp, mono in self.flat_terms():
            tail = monomial_factors(exp) + ([] if mono == "1" else [_TEXT[mono]])
            parts.append(render_term(c, [], tail))
        return join_signed(parts)


def _raw(coeffs: dict) -> CliffordElement:
    e = CliffordElement.__new__(CliffordElement)
    e.coeffs = coeffs
    e._hash = None
    return e


def cl_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    out: dict[str, ScalarPoly] = {}
    for m1, c1 in x.coeffs.items():
        for m2, c2 in y.coeffs.items():
            prod = _MUL[m1, m2]
            if prod is None:
                raise PDegreeOverflow(f"product {_TEXT[m1]} * {_TEXT[m2]} has P-degree 2")
            c12 = c1 * c2
            for mono, c in prod:
                term = c12 * c
                out[mono] = out[mono] + term if mono in out else term
    return CliffordElement(out)


def spinor_dim(n: int) -> int:
    if n < 1:
        raise ValueError("dimension must be positive")
    return 2 ** (n // 2)


def cl_trace(x: CliffordElement, n: int) -> ScalarPoly:
    """Fiber trace: tr(1) = d, tr(PA) = -kappa*u*d/2, all other monomials traceless."""
    d = spinor_dim(n)
    return x.coeff("1") * d - x.coeff("PA") * (KAPPA * U) * GaussianRational(d) * _HALF


_HALF = GaussianRational(1) / 2

A = CliffordElement.gen("A")
B = CliffordElement.gen("B")
P = CliffordElement.gen("P")
ONE = CliffordElement.scalar(1)


def frame_identify_p(x: CliffordElement) -> CliffordElement:
    """Replace P by (kappa/2) A, the identification valid in the adapted frame."""
    out = CliffordElement()
    half_kappa = KAPPA * _HALF
    for mono, c in x.coeffs.items():
        if mono.startswith("P"):
            rest = mono[1:]
            word = cl_mul(A, CliffordElement.gen(rest) if rest else ONE)
            out = out + word.scale(c * half_kappa)
        else:
            out = out + CliffordElement({mono: c})
    return out
