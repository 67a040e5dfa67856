"""Floating-point cross-check of the exact engine.

Nothing here touches the exact algebra except to read off the engine's
answers at the end.  Clifford elements become explicit gamma matrices, pi^+
becomes a trapezoidal Cauchy integral around +i, x_n- and xi_n-derivatives
become Cauchy integrals on small circles, and line integrals go through
adaptive quadrature.

The geometry is the first-order collar model: with s(x) = 1 + kappa x/2,
c(xi) = s(x) c0(xi') + xi_n c(dx_n) and |xi|^2 = s(x)^2 + xi_n^2, so that
d/dx c(xi') = (kappa/2) c0(xi') and d/dx |xi|^2 = kappa at x = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import factorial

import numpy as np
from scipy.integrate import quad_vec

from .clifford import MONOMIALS, CliffordElement
from .scalars import ScalarPoly

RELATION_TOL = 1e-12
PI_PLUS_NODES = 64
PI_PLUS_RADIUS = 0.5
X_NODES = 8
X_RADIUS = 0.1
XI_NODES = 24
XI_RADIUS = 0.25


class RelationCheckFailed(RuntimeError):
    """The gamma-matrix construction violates the Clifford relations."""


class ToleranceNotReached(RuntimeError):
    """Quadrature could not certify the requested tolerance."""


class MismatchReport(AssertionError):
    """Exact and numeric values disagree; carries both."""

    def __init__(self, label: str, exact: complex, numeric: complex, tol: float):
        self.label = label
        self.exact = exact
        self.numeric = numeric
        self.tol = tol
        super().__init__(f"{label}: exact {exact:.12g} vs numeric {numeric:.12g} (tol {tol:g})")

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "exact": [self.exact.real, self.exact.imag],
            "numeric": [self.numeric.real, self.numeric.imag],
            "tol": self.tol,
        }


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _kron(names) -> np.ndarray:
    return reduce(np.kron, (_PAULI[c] for c in names))


def hermitian_gammas(n: int) -> list[np.ndarray]:
    """n mutually anticommuting Hermitian involutions of size 2^(n//2)."""
    m = n // 2
    out = []
    for k in range(m):
        out.append(_kron("Z" * k + "X" + "I" * (m - k - 1)))
        out.append(_kron("Z" * k + "Y" + "I" * (m - k - 1)))
    if n % 2:
        out.append(_kron("Z" * m))
    return out


def _random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@dataclass(frozen=True)
class NumericContext:
    n: int
    d: int
    gamma: tuple
    xi_prime: np.ndarray
    kappa_val: float
    f0_val: float
    f1_val: float
    seed: int
    direction: int = 0

    @property
    def A_mat(self) -> np.ndarray:
        return sum(x * g for x, g in zip(self.xi_prime, self.gamma[:-1]))

    @property
    def B_mat(self) -> np.ndarray:
        return self.gamma[-1]

    @property
    def P_mat(self) -> np.ndarray:
        return 0.5 * self.kappa_val * self.A_mat

    def assignments(self) -> dict:
        return {"kappa": self.kappa_val, "u": 1.0, "f0": self.f0_val, "f1": self.f1_val}

    def with_direction(self, index: int) -> "NumericContext":
        """Same representation, a fresh random unit xi' (index 0 is the original)."""
        if index == 0:
            return self
        rng = np.random.default_rng([self.seed, index])
        v = rng.standard_normal(self.n - 1)
        return NumericContext(
            self.n, self.d, self.gamma, v / np.linalg.norm(v), self.kappa_val, self.f0_val, self.f1_val, self.seed, index
        )


def make_context(n: int, seed: int = 0, kappa_val: float = 0.3, f0_val: float = 0.7, f1_val: float = -1.1) -> NumericContext:
    if n not in (5, 6):
        raise ValueError("the oracle supports n = 5 and n = 6")
    rng = np.random.default_rng(seed)
    d = 2 ** (n // 2)
    U = _random_unitary(rng, d)
    gamma = tuple(1j * (U @ g @ U.conj().T) for g in hermitian_gammas(n))
    eye = np.eye(d)
    for a in range(n):
        for b in range(n):
            anti = gamma[a] @ gamma[b] + gamma[b] @ gamma[a]
            if np.max(np.abs(anti + 2 * (a == b) * eye)) > RELATION_TOL:
                raise RelationCheckFailed(f"gamma_{a} gamma_{b} anticommutator off by {np.max(np.abs(anti)):.3g}")
    v = rng.standard_normal(n - 1)
    xi_prime = v / np.linalg.norm(v)
    if abs(np.linalg.norm(xi_prime) - 1) > RELATION_TOL:
        raise RelationCheckFailed("xi' is not a unit vector")
    return NumericContext(n, d, gamma, xi_prime, kappa_val, f0_val, f1_val, seed)


# -- instantiation of exact elements (used for trace agreement only) --

def instantiate(x: CliffordElement, ctx: NumericContext) -> np.ndarray:
    gens = {"A": ctx.A_mat, "B": ctx.B_mat, "P": ctx.P_mat}
    values = ctx.assignments()
    out = np.zeros((ctx.d, ctx.d), dtype=complex)
    for mono in MONOMIALS:
        c = x.coeff(mono)
        if c.is_zero():
            continue
        m = np.eye(ctx.d, dtype=complex)
        for ch in mono if mono != "1" else "":
            m = m @ gens[ch]
        out += c.evaluate(values) * m
    return out


def numeric_trace(x: CliffordElement, ctx: NumericContext) -> complex:
    return complex(np.trace(instantiate(x, ctx)))


def evaluate_scalar(p: ScalarPoly, ctx: NumericContext) -> complex:
    return p.evaluate(ctx.assignments())


# -- quadrature --

def numeric_integrate(f, tol: float = 1e-8, split: float = 1.0) -> complex:
    """Integral of f over the real line.

    [-split, split] is integrated directly; the two tails are mapped to (0, 1]
    by xi = +-1/s, which is exact for integrands decaying like xi^-2 or faster.
    """

    def inner(t):
        v = f(t)
        return np.array([v.real, v.imag])

    def outer(s):
        t = split / s
        v = (f(t) + f(-t)) * split / (s * s)
        return np.array([v.real, v.imag])

    target = tol / 8
    a, ea = quad_vec(inner, -split, split, epsabs=target, epsrel=0, limit=400)
    b, eb = quad_vec(outer, 0.0, 1.0, epsabs=target, epsrel=0, limit=400)
    err = ea + eb
    if not np.isfinite(err) or err > tol / 2:
        raise ToleranceNotReached(f"quadrature error estimate {err:.3g} exceeds {tol / 2:.3g}")
    return complex(a[0] + b[0], a[1] + b[1])


# -- the collar model --

class CollarModel:
    """Matrix-valued symbols of D^-1, D^-2, D^-3 near the boundary point."""

    def __init__(self, ctx: NumericContext, sigma4: str = "published"):
        self.ctx = ctx
        self.k = ctx.kappa_val
        self.A0 = ctx.A_mat
        self.B = ctx.B_mat
        self.P = ctx.P_mat
        self.eye = np.eye(ctx.d, dtype=complex)
        self.sigma0 = -1.25 * self.k * self.B
        # printed closed form and its composite carry i on the second group;
        # the composition formula with D_x = -i d/dx does not
        self.second = 1j if sigma4 in ("published", "raw") else 1.0

    def _s(self, x):
        return 1 + 0.5 * self.k * x

    def c(self, x, z):
        return self._s(x) * self.A0 + z * self.B

    def L(self, x, z):
        return self._s(x) ** 2 + z * z

    def f(self, x):
        return self.ctx.f0_val + self.ctx.f1_val * x

    def symbol(self, tag: str, order: int, x, z) -> np.ndarray:
        base = tag[1:] if tag.startswith("f") else tag
        out = self._symbol(base, order, x, z)
        if tag.startswith("f"):
            out = self.f(np.asarray(x)[..., None, None]) * out
        return out

    def _symbol(self, tag, order, x, z):
        # x and z broadcast against each other; matrices live in the last two axes
        x = np.asarray(x)[..., None, None]
        z = np.asarray(z)[..., None, None]
        c, L, k, B = self.c(x, z), self.L(x, z), self.k, self.B
        if (tag, order) == ("Dinv1", -1):
            return 1j * c / L
        if (tag, order) == ("Dinv3", -3):
            return 1j * c / L**2
        if (tag, order) == ("Dinv2", -2):
            return self.eye / L
        if (tag, order) == ("Dinv1", -2):
            return (c @ self.sigma0 @ c + c @ B @ self.P) / L**2 - k * (c @ B @ c) / L**3
        if (tag, order) == ("Dinv3", -4):
            sigma2 = 0.5 * k * (c @ self.A0 @ B) - 2.5 * k * z * c - 1.25 * k * L * B
            group = L * (B @ self.P) - 2 * k * (B @ c) + 2 * z * (c @ self.P) + 4 * z * k * self.eye
            return (c @ sigma2 @ c + self.second * (c @ group)) / L**4
        if (tag, order) == ("Dinv2", -3):
            return -1j * (2.5 * k * z * self.eye - 0.5 * k * (self.A0 @ B)) / L**2 - 2j * k * z * self.eye / L**3
        raise KeyError((tag, order))

    def jet(self, tag: str, order: int, z, dx: int = 0, dxi: int = 0) -> np.ndarray:
        """d_xi^dxi d_x^dx of a symbol at x = 0 for an array of xi values.

        Both derivatives are Cauchy integrals on small circles, evaluated on
        a single broadcast grid: (x nodes, xi nodes, points, d, d).
        """
        z = np.asarray(z, dtype=complex)
        if dx:
            tx = 2 * np.pi * np.arange(X_NODES) / X_NODES
            xs = X_RADIUS * np.exp(1j * tx)
            wx = factorial(dx) * np.exp(-1j * dx * tx) / (X_NODES * X_RADIUS**dx)
        else:
            xs, wx = np.zeros(1), np.ones(1)
        if dxi:
            tz = 2 * np.pi * np.arange(XI_NODES) / XI_NODES
            zs = XI_RADIUS * np.exp(1j * tz)
            wz = factorial(dxi) * np.exp(-1j * dxi * tz) / (XI_NODES * XI_RADIUS**dxi)
        else:
            zs, wz = np.zeros(1), np.ones(1)
        grid = self.symbol(tag, order, xs[:, None, None], zs[None, :, None] + z[None, None, :])
        return np.einsum("a,b,ab...->...", wx, wz, grid)


class PiPlus:
    """pi^+ of a function given on a circle around +i, with xi-derivatives."""

    def __init__(self, g):
        theta = 2 * np.pi * np.arange(PI_PLUS_NODES) / PI_PLUS_NODES
        self.eta = 1j + PI_PLUS_RADIUS * np.exp(1j * theta)
        self.w = (self.eta - 1j) / PI_PLUS_NODES
        self.values = g(self.eta)

    def __call__(self, z: float, deriv: int = 0) -> np.ndarray:
        kern = self.w * (-1) ** deriv * factorial(deriv) / (z - self.eta) ** (deriv + 1)
        return np.tensordot(kern, self.values, axes=1)


def numeric_case(model: CollarModel, left: str, right: str, r: int, l: int, k: int, j: int, tol: float) -> complex:
    """One term of the boundary sum at a fixed xi', evaluated numerically."""
    coeff = (-1j) ** (j + k + 1) / factorial(j + k + 1)
    plus = PiPlus(lambda eta: model.jet(left, r, eta, dx=j))

    def integrand(z):
        right_val = model.jet(right, l, np.array([z]), dx=k, dxi=j + 1)[0]
        return coeff * complex(np.trace(plus(z, k) @ right_val))

    return numeric_integrate(integrand, tol)


# -- end-to-end comparison --


def _rel_close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


@dataclass
class CrosscheckResult:
    n: int
    p: tuple
    perturbation: str
    seed: int
    tol: float
    cases: list = field(default_factory=list)
    total: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": list(self.p),
            "perturbation": self.perturbation,
            "seed": self.seed,
            "tol": self.tol,
            "passed": self.passed,
            "cases": self.cases,
            "total": self.total,
            "mismatches": [m.to_json() for m in self.mismatches],
        }


def crosscheck_phi(
    n: int,
    p1: int,
    p2: int,
    perturbation: str = "none",
    ctx: NumericContext | None = None,
    tol: float = 1e-8,
    directions: int = 5,
    sigma4: str = "published",
    report=None,
    strict: bool = True,
) -> CrosscheckResult:
    """Recompute every case of the boundary sum numerically and compare.

    Each case is evaluated at `directions` random unit xi'; the exact value
    must match each of them within tol (relative, floor 1) and the spread over
    directions must stay below tol as well.
    """
    from .engine import operator_tags, phi

    if ctx is None:
        ctx = make_context(n)
    if report is None:
        report = phi(n, p1, p2, perturbation, sigma4)
    left, right = operator_tags(p1, p2, perturbation)
    out = CrosscheckResult(n, (p1, p2), perturbation, ctx.seed, tol)
    models = [CollarModel(ctx.with_direction(i), sigma4) for i in range(directions)]
    totals = np.zeros(directions, dtype=complex)
    for case in report.cases:
        s = case.spec
        exact = evaluate_scalar(case.integral.coeff, ctx) * np.pi ** case.integral.pi
        if s.alpha:
            values = np.zeros(directions, dtype=complex)
        else:
            values = np.array([numeric_case(m, left, right, s.r, s.l, s.k, s.j, tol / 4) for m in models])
        totals += values
        spread = float(np.max(np.abs(values - values[0]))) if directions > 1 else 0.0
        ok = all(_rel_close(v, exact, tol) for v in values) and spread <= tol * max(1.0, abs(exact))
        out.cases.append(
            {
                "label": case.label,
                "exact": [exact.real, exact.imag],
                "numeric": [values[0].real, values[0].imag],
                "spread": spread,
                "passed": bool(ok),
            }
        )
        if not ok:
            worst = values[int(np.argmax(np.abs(values - exact)))]
            out.mismatches.append(MismatchReport(case.label, exact, complex(worst), tol))
    exact_total = evaluate_scalar(report.total.coeff, ctx) * np.pi ** report.total.pi
    spread = float(np.max(np.abs(totals - totals[0]))) if directions > 1 else 0.0
    ok = all(_rel_close(v, exact_total, tol) for v in totals)
    out.total = {
        "exact": [exact_total.real, exact_total.imag],
        "numeric": [totals[0].real, totals[0].imag],
        "spread": spread,
        "passed": bool(ok),
    }
    if not ok:
        out.mismatches.append(MismatchReport("total", exact_total, complex(totals[0]), tol))
    if strict and out.mismatches:
        raise out.mismatches[0]
    return out
