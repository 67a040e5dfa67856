"""Exact coefficient ring: Gaussian rationals and polynomials in the formal
boundary constants kappa = h'(0), u = |xi'|^2, f0 = f(x0), f1 = d_xn f(x0).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

BASIS = ("kappa", "u", "f0", "f1")
_ZERO_EXP = (0, 0, 0, 0)

Number = Union[int, Fraction, "GaussianRational"]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot make an exact rational from {value!r}")


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(value)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (GaussianRational, int, Fraction)):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        return render_coefficient(self)

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data: Mapping) -> "GaussianRational":
        return cls(Fraction(data["re"]), Fraction(data["im"]))


I = GaussianRational(0, 1)
ONE = GaussianRational(1)
ZERO = GaussianRational(0)


def _rational_text(q: Fraction, wrap: bool) -> str:
    text = str(q)
    if wrap and q.denominator != 1:
        return f"({text})"
    return text


def render_coefficient(c: GaussianRational) -> str:
    """Standalone text of a Gaussian rational, e.g. ``(3/4)*i`` or ``(1/2-i)``."""
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        return _imag_text(c.im)
    im = _imag_text(c.im)
    sep = "" if im.startswith("-") else "+"
    return f"({c.re}{sep}{im})"


def _imag_text(q: Fraction) -> str:
    sign = "-" if q < 0 else ""
    mag = abs(q)
    if mag == 1:
        return f"{sign}i"
    return f"{sign}{_rational_text(mag, True)}*i"


def _coeff_factors(c: GaussianRational) -> tuple[str, list[str], list[str]]:
    """Split a coefficient into (sign, leading factors, trailing factors).

    A purely real or purely imaginary coefficient renders as a signed
    magnitude with an optional trailing ``i``; a mixed one as a bracket.
    """
    if c.im == 0 or c.re == 0:
        q = c.re if c.im == 0 else c.im
        sign = "-" if q < 0 else ""
        mag = abs(q)
        lead = [] if mag == 1 else [_rational_text(mag, True)]
        trail = [] if c.im == 0 else ["i"]
        return sign, lead, trail
    return "", [render_coefficient(c)], []


def render_term(c: GaussianRational, middle: list[str], tail: list[str] = ()) -> str:
    """Render ``c * middle * tail`` with the imaginary unit after ``middle``.

    ``middle`` holds commuting markers such as ``pi``; ``tail`` holds the
    remaining factors (variables, Clifford monomials).
    """
    sign, lead, trail = _coeff_factors(c)
    factors = lead + list(middle) + trail + list(tail)
    if not factors:
        return f"{sign}1"
    return sign + "*".join(factors)


class ScalarPoly:
    """Polynomial in (kappa, u, f0, f1) with Gaussian-rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, GaussianRational] | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = GaussianRational.coerce(c)
                if len(exp) != len(BASIS) or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp!r}")
                if not c.is_zero():
                    clean[tuple(exp)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, value) -> "ScalarPoly":
        return cls({_ZERO_EXP: GaussianRational.coerce(value)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ScalarPoly":
        exp = [0, 0, 0, 0]
        exp[BASIS.index(name)] = power
        return cls({tuple(exp): ONE})

    @classmethod
    def coerce(cls, value) -> "ScalarPoly":
        if isinstance(value, ScalarPoly):
            return value
        return cls.const(value)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(exp == _ZERO_EXP for exp in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get(_ZERO_EXP, ZERO)

    def variables(self) -> set[str]:
        return {BASIS[k] for exp in self.terms for k, e in enumerate(exp) if e}

    def __add__(self, other):
        other = ScalarPoly.coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in out:
                s = out[exp] + c
                if s.is_zero():
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return _raw_poly(out)

    __radd__ = __add__

    def __neg__(self):
        return _raw_poly({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ScalarPoly.coerce(other))

    def __rsub__(self, other):
        return ScalarPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.coerce(other)
            if c.is_zero():
                return ScalarPoly()
            return _raw_poly({exp: v * c for exp, v in self.terms.items()})
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[exp] = out[exp] + c1 * c2 if exp in out else c1 * c2
        return _raw_poly({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ScalarPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def subs(self, assignments: Mapping[str, object]) -> "ScalarPoly":
        """Substitute exact values for some basis constants."""
        values = {BASIS.index(k): GaussianRational.coerce(v) for k, v in assignments.items()}
        out = ScalarPoly()
        for exp, c in self.terms.items():
            coeff = c
            new_exp = list(exp)
            for k, v in values.items():
                if exp[k]:
                    coeff = coeff * v ** exp[k]
                    new_exp[k] = 0
            out = out + ScalarPoly({tuple(new_exp): coeff})
        return out

    def evaluate(self, assignments: Mapping[str, float]) -> complex:
        """Floating evaluation; every constant that occurs must be assigned."""
        total = 0j
        for exp, c in self.terms.items():
            term = complex(c)
            for k, e in enumerate(exp):
                if e:
                    name = BASIS[k]
                    if name not in assignments:
                        raise KeyError(f"no value assigned to {name}")
                    term *= complex(assignments[name]) ** e
            total += term
        return total

    def divide_exact(self, monomial: "ScalarPoly") -> "ScalarPoly":
        """Divide by a single-term polynomial; raises if not exact."""
        if len(monomial.terms) != 1:
            raise ValueError("divisor must be a single term")
        (mexp, mc), = monomial.terms.items()
        out = {}
        for exp, c in self.terms.items():
            new = tuple(a - b for a, b in zip(exp, mexp))
            if any(e < 0 for e in new):
                raise ValueError(f"{self} is not divisible by {monomial}")
            out[new] = c / mc
        return ScalarPoly(out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = ScalarPoly.const(other)
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        # total degree first, then lexicographic in the basis order
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))

    def __repr__(self):
        return f"ScalarPoly({self})"

    def __str__(self):
        return self.render()

    def render(self, middle: list[str] = ()) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            parts.append(render_term(c, list(middle), monomial_factors(exp)))
        return join_signed(parts)

    def to_json(self) -> list:
        return [
            {"coeff": c.to_json(), **{name: e for name, e in zip(BASIS, exp)}}
            for exp, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data) -> "ScalarPoly":
        terms = {}
        for item in data:
            exp = tuple(int(item.get(name, 0)) for name in BASIS)
            terms[exp] = GaussianRational.from_json(item["coeff"])
        return cls(terms)


def _raw_poly(terms: dict) -> ScalarPoly:
    p = ScalarPoly.__new__(ScalarPoly)
    p.terms = terms
    p._hash = None
    return p


def monomial_factors(exp) -> list[str]:
    out = []
    for name, e in zip(BASIS, exp):
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append(f"{name}^{e}")
    return out


def join_signed(parts: list[str]) -> str:
    text = parts[0]
    for p in parts[1:]:
        text += p if p.startswith("-") else "+" + p
    return text


def scalar_arith(op: str, a: ScalarPoly, b: ScalarPoly | None = None) -> ScalarPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_subst(p: ScalarPoly, assignments: Mapping[str, object]) -> ScalarPoly:
    return p.subs(assignments)


def scalar_eval_float(p: ScalarPoly, assignments: Mapping[str, float]) -> complex:
    missing = set(BASIS) - set(assignments)
    if missing:
        raise KeyError(f"unassigned basis constants: {sorted(missing)}")
    return p.evaluate(assignments)


KAPPA = ScalarPoly.var("kappa")
U = ScalarPoly.var("u")
F0 = ScalarPoly.var("f0")
F1 = ScalarPoly.var("f1")


class Marked:
    """A ScalarPoly times pi^p times a product of sphere volumes Omega_k^e.

    Transcendental markers never enter the algebra; they ride along as
    exponents so that reported constants stay exact.
    """

    __slots__ = ("coeff", "pi", "omega")

    def __init__(self, coeff, pi: int = 0, omega: Mapping[int, int] | None = None):
        self.coeff = ScalarPoly.coerce(coeff)
        self.pi = pi
        self.omega = {k: e for k, e in sorted((omega or {}).items()) if e}

    def _markers(self):
        return (self.pi, tuple(self.omega.items()))

    def __add__(self, other: "Marked") -> "Marked":
        if self.coeff.is_zero():
            return other
        if other.coeff.is_zero():
            return self
        if self._markers() != other._markers():
            raise ValueError("cannot add values with different pi/Omega markers")
        return Marked(self.coeff + other.coeff, self.pi, self.omega)

    def __neg__(self):
        return Marked(-self.coeff, self.pi, self.omega)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Marked):
            omega = dict(self.omega)
            for k, e in other.omega.items():
                omega[k] = omega.get(k, 0) + e
            return Marked(self.coeff * other.coeff, self.pi + other.pi, omega)
        return Marked(self.coeff * ScalarPoly.coerce(other), self.pi, self.omega)

    __rmul__ = __mul__

    def inverse(self) -> "Marked":
        """Inverse of a single-term value (constant times monomial is not allowed)."""
        if not self.coeff.is_constant() or self.coeff.is_zero():
            raise ValueError("only nonzero constant coefficients can be inverted")
        return Marked(
            ScalarPoly.const(ONE / self.coeff.constant_value()),
            -self.pi,
            {k: -e for k, e in self.omega.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, Marked):
            return NotImplemented
        if self.coeff.is_zero() and other.coeff.is_zero():
            return True
        return self.coeff == other.coeff and self._markers() == other._markers()

    def __hash__(self):
        return hash((self.coeff, self._markers()))

    def marker_factors(self) -> list[str]:
        out = []
        for name, e in [("pi", self.pi)] + [(f"Omega{k}", e) for k, e in self.omega.items()]:
            if e == 1:
                out.append(name)
            elif e:
                out.append(f"{name}^{e}")
        return out

    def __repr__(self):
        return f"Marked({self})"

    def __str__(self):
        if self.coeff.is_zero():
            return "0"
        if any(e < 0 for e in [self.pi, *self.omega.values()]):
            pos = Marked(self.coeff, max(self.pi, 0), {k: e for k, e in self.omega.items() if e > 0})
            neg = Marked(1, max(-self.pi, 0), {k: -e for k, e in self.omega.items() if e < 0})
            return f"{pos}/({'*'.join(neg.marker_factors())})"
        return self.coeff.render(self.marker_factors())

    def to_json(self) -> dict:
        data = {"terms": self.coeff.to_json(), "pi": self.pi}
        if self.omega:
            if len(self.omega) == 1:
                (k, e), = self.omega.items()
                data["omega"] = k if e == 1 else {str(k): e}
            else:
                data["omega"] = {str(k): e for k, e in self.omega.items()}
        if len(self.coeff.terms) == 1:
            # flattened single-term form
            term = data["terms"][0]
            data = {**{k: v for k, v in term.items()}, **data}
        data["text"] = str(self)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "Marked":
        omega = data.get("omega", {})
        if isinstance(omega, int):
            omega = {omega: 1}
        return cls(
            ScalarPoly.from_json(data["terms"]),
            int(data.get("pi", 0)),
            {int(k): int(e) for k, e in omega.items()},
        )
