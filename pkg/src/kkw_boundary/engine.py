"""The boundary term Phi of the lower-dimensional volume.

For operators with symbols sigma_r (left, of order -p1) and sigma_l (right, of
order -p2), Phi at a boundary point is

    sum  (-i)^(|alpha|+j+k+1) / (alpha! (j+k+1)!)
         * int_{|xi'|=1} int_R tr[ d_xn^j d_xi'^alpha d_xi^k pi^+ sigma_r
                                   * d_x'^alpha d_xi^(j+1) d_xn^k sigma_l ] dxi_n

over r - k - |alpha| + l - j - 1 = -n, r <= -p1, l <= -p2.  After the trace
every integrand is free of xi', so the sphere integral contributes the
marker Omega_{n-2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import reference as ref
from .rational import PoleRational, integrate_line, pi_plus, rat_diff_xi
from .scalars import KAPPA, GaussianRational, I, Marked, ScalarPoly
from .symbols import UnsupportedSymbol, build_symbol

PERTURBATIONS = ("none", "left-multiply-f")
VANISH_REASON = "tangential derivatives of the symbols vanish at x0"
UNIT = {"u": 1}


class UnsupportedConfiguration(ValueError):
    """(n, p1, p2) needs symbols or derivatives outside the builder table."""


@dataclass(frozen=True, order=True)
class CaseSpec:
    r: int
    l: int
    k: int = 0
    j: int = 0
    alpha: int = 0

    def admissible(self, n: int, p1: int, p2: int) -> bool:
        return (
            self.r - self.k - self.alpha + self.l - self.j - 1 == -n
            and self.r <= -p1
            and self.l <= -p2
            and min(self.k, self.j, self.alpha) >= 0
        )


@dataclass
class CaseResult:
    spec: CaseSpec
    label: str
    n: int
    integrand_trace: PoleRational
    trace: PoleRational
    integral: Marked
    form: str = "direct"
    vanished: str | None = None
    reference: Marked | None = None
    match: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def multiplier(self) -> dict:
        return {"pi_power": 1, "omega_index": self.n - 2}

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "r": self.spec.r,
            "l": self.spec.l,
            "k": self.spec.k,
            "j": self.spec.j,
            "alpha": self.spec.alpha,
            "form": self.form,
            "trace": str(self.trace),
            "integrand": str(self.integrand_trace),
            "integral": self.integral.to_json(),
            "multiplier": self.multiplier,
        }
        if self.vanished:
            out["vanished"] = self.vanished
        if self.reference is not None:
            out["reference"] = self.reference.to_json()
            out["match"] = self.match
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class PhiReport:
    n: int
    p: tuple
    perturbation: str
    sigma4: str
    cases: list
    total: Marked
    reference_total: Marked | None = None
    total_match: bool | None = None
    groups: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    oracle: dict | None = None

    @property
    def mismatches(self) -> list:
        out = [c for c in self.cases if c.match is False]
        return out

    def all_match(self) -> bool:
        if self.mismatches or self.total_match is False:
            return False
        if any(g["match"] is False for g in self.groups):
            return False
        if self.oracle is not None and not self.oracle.get("passed", True):
            return False
        return True

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "p": list(self.p),
            "perturbation": self.perturbation,
            "sigma4": self.sigma4,
            "cases": [c.to_json() for c in self.cases],
            "total": self.total.to_json(),
        }
        if self.reference_total is not None:
            out["reference_total"] = self.reference_total.to_json()
            out["total_match"] = self.total_match
        if self.groups:
            out["groups"] = [
                {"labels": list(g["labels"]), "sum": g["sum"].to_json(), "reference": g["reference"].to_json(), "match": g["match"]}
                for g in self.groups
            ]
        out["mismatches"] = [
            {"label": c.label, "computed": str(c.integral), "reference": str(c.reference)} for c in self.mismatches
        ]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.oracle is not None:
            out["oracle"] = self.oracle
        return out


def operator_tags(p1: int, p2: int, perturbation: str = "none") -> tuple[str, str]:
    if perturbation not in PERTURBATIONS:
        raise ValueError(f"unknown perturbation {perturbation!r}; expected one of {PERTURBATIONS}")
    left = f"Dinv{p1}"
    if perturbation == "left-multiply-f":
        left = "f" + left
    return left, f"Dinv{p2}"


def enumerate_cases(n: int, p1: int, p2: int, perturbation: str = "none") -> list[CaseSpec]:
    """All admissible (r, l, k, j, alpha), leading order pairs first."""
    if p1 < 1 or p2 < 1 or p1 + p2 > n:
        raise UnsupportedConfiguration(f"need p1, p2 >= 1 and p1 + p2 <= n, got ({p1}, {p2}) with n = {n}")
    budget = n - 1 - p1 - p2  # = k + j + alpha + (extra order drop)
    specs = []
    for dr in range(budget + 1):
        for dl in range(budget - dr + 1):
            rest = budget - dr - dl
            for alpha in range(rest + 1):
                for j in range(rest - alpha + 1):
                    k = rest - alpha - j
                    specs.append(CaseSpec(-p1 - dr, -p2 - dl, k, j, alpha))
    specs.sort(key=lambda s: (-(s.r + s.l), -s.r, -s.alpha, -s.j, -s.k))
    left, right = operator_tags(p1, p2, perturbation)
    for s in specs:
        if s.alpha:
            continue
        try:
            ls = build_symbol(left, s.r, n)
            rs = build_symbol(right, s.l, n)
        except UnsupportedSymbol as exc:
            raise UnsupportedConfiguration(str(exc)) from exc
        if s.j > 1 or s.k > 1 or (s.j and ls.dxn is None) or (s.k and rs.dxn is None):
            raise UnsupportedConfiguration(f"case {s} needs x_n-derivatives beyond the stored jets")
    return specs


def case_label(spec: CaseSpec, p1: int, p2: int) -> str:
    leading = spec.r == -p1 and spec.l == -p2
    if leading:
        if spec.alpha:
            return "aI"
        if spec.j:
            return "aII"
        if spec.k:
            return "aIII"
        return "main"
    if spec.r == -p1 and spec.l == -p2 - 1 and not (spec.k or spec.j or spec.alpha):
        return "b"
    if spec.r == -p1 - 1 and spec.l == -p2 and not (spec.k or spec.j or spec.alpha):
        return "c"
    return f"r{spec.r}l{spec.l}k{spec.k}j{spec.j}a{spec.alpha}"


def case_coefficient(spec: CaseSpec) -> GaussianRational:
    m = spec.j + spec.k + spec.alpha + 1
    return (-I) ** m / (factorial(spec.alpha) * factorial(spec.j + spec.k + 1))


def _traced(x: PoleRational, n: int) -> PoleRational:
    t = x.subs(UNIT).trace(n).subs(UNIT)
    if not t.is_scalar():
        raise AssertionError("trace left a non-scalar Clifford part")
    return t


def _integral(x: PoleRational, n: int) -> Marked:
    return Marked(integrate_line(x).scalar(), 1, {n - 2: 1})


def eval_case(
    spec: CaseSpec,
    n: int,
    left_tag: str,
    right_tag: str,
    p: tuple | None = None,
    sigma4: str = "published",
) -> CaseResult:
    p1, p2 = p if p is not None else (-spec.r, -spec.l)
    label = case_label(spec, p1, p2)
    zero = PoleRational()
    if spec.alpha:
        return CaseResult(spec, label, n, zero, zero, Marked(0, 1, {n - 2: 1}), vanished=VANISH_REASON)
    coeff = case_coefficient(spec)
    left = build_symbol(left_tag, spec.r, n, sigma4)
    right = build_symbol(right_tag, spec.l, n, sigma4)
    lv = left.dxn if spec.j else left.value
    rv = right.dxn if spec.k else right.value
    if lv is None or rv is None:
        raise UnsupportedConfiguration(f"case {spec} needs an unavailable x_n-derivative")
    lplus = rat_diff_xi(pi_plus(lv), spec.k)
    rder = rat_diff_xi(rv, spec.j + 1)
    direct_trace = _traced(lplus * rder, n)
    direct_integrand = direct_trace * coeff
    by_parts = spec.j == 0 and spec.k == 0 and spec.l < -p2
    if by_parts:
        # int pi^+ s_r * d_xi s_l = - int d_xi(pi^+ s_r) * s_l
        trace = _traced(rat_diff_xi(lplus, 1) * rv, n)
        integrand = trace * (-coeff)
        integral = _integral(integrand, n)
        if integral != _integral(direct_integrand, n):
            raise AssertionError(f"integration by parts changed case {label}")
        return CaseResult(spec, label, n, integrand, trace, integral, form="by-parts")
    return CaseResult(spec, label, n, direct_integrand, direct_trace, _integral(direct_integrand, n))


def _key(n, p1, p2, perturbation):
    return (n, p1, p2, perturbation)


def phi(n: int, p1: int, p2: int, perturbation: str = "none", sigma4: str = "published") -> PhiReport:
    specs = enumerate_cases(n, p1, p2, perturbation)
    left, right = operator_tags(p1, p2, perturbation)
    key = _key(n, p1, p2, perturbation)
    refs = ref.CASE_VALUES.get(key, {})
    cases = []
    total = Marked(0, 1, {n - 2: 1})
    for s in specs:
        res = eval_case(s, n, left, right, (p1, p2), sigma4)
        if res.label in refs:
            res.reference = refs[res.label]
            res.match = res.integral == res.reference
        cases.append(res)
        total = total + res.integral
    report = PhiReport(n, (p1, p2), perturbation, sigma4, cases, total)
    if key in ref.TOTALS:
        report.reference_total = ref.TOTALS[key]
        report.total_match = total == report.reference_total
    for labels, value in ref.GROUP_SUMS.get(key, {}).items():
        s = Marked(0, 1, {n - 2: 1})
        for c in cases:
            if c.label in labels:
                s = s + c.integral
        report.groups.append({"labels": labels, "sum": s, "reference": value, "match": s == value})
    _annotate(report)
    return report


def _split_f(value: Marked) -> tuple[Marked, Marked]:
    f1_free = value.coeff.subs({"f1": 0})
    return Marked(f1_free, value.pi, value.omega), Marked(value.coeff - f1_free, value.pi, value.omega)


def _annotate(report: PhiReport) -> None:
    key = (report.n, *report.p, report.perturbation)
    if report.sigma4 != "published" and report.n == 6 and report.p == (1, 3):
        report.notes.append(
            f"sigma_-4(D^-3) taken from the '{report.sigma4}' form; reference values assume the printed closed form"
        )
    if key == (6, 2, 2, "left-multiply-f"):
        report.notes.append("Omega_{n-2} = Omega4 is used throughout for n = 6")
        for c in report.cases:
            if c.label == "aII" and c.reference is not None:
                f0c, f1c = _split_f(c.integral)
                c.notes.append(f"f0 part {f0c} (reference {ref.F0_PART_AII}, match {f0c == ref.F0_PART_AII})")
                c.notes.append(f"f1 part {f1c} (reference {ref.F1_PART_AII}, match {f1c == ref.F1_PART_AII})")
    if key == (5, 1, 3, "none"):
        for c in report.cases:
            if c.label == "main":
                raw = integrate_line(c.trace).scalar()
                c.notes.append(f"integral of the bare trace (no (-i) case coefficient): {Marked(raw, 1, {3: 1})}")
    for c in report.cases:
        if c.match is False:
            c.notes.append(f"computed {c.integral} differs from reference {c.reference}")


# -- gravitational action assembly --


def _ratio(num: ScalarPoly, den: ScalarPoly) -> ScalarPoly:
    """num / den for a single-term den dividing num exactly."""
    if len(den.terms) != 1:
        raise ValueError("denominator must be a single term")
    (exp, c), = den.terms.items()
    mono = ScalarPoly({exp: GaussianRational(1)})
    return num.divide_exact(mono) * (GaussianRational(1) / c)


def extrinsic_curvature(n: int) -> ScalarPoly:
    """K(x0) = -(n-1)/2 kappa for the collar metric g = g_boundary/h + dx_n^2."""
    return KAPPA * GaussianRational(Fraction(-(n - 1), 2))


def gravity_report(report: PhiReport, n: int | None = None) -> dict:
    n = report.n if n is None else n
    K = extrinsic_curvature(n)
    i_gr_b = K * 2  # times Vol(boundary)
    total = report.total
    out = {
        "n": n,
        "p": list(report.p),
        "K_x0": str(K),
        "I_Gr_b": f"{i_gr_b}*Vol",
        "Phi": str(total),
    }
    checks = []
    if report.perturbation == "none" and not total.coeff.is_zero():
        try:
            coeff_K = _ratio(total.coeff, K)
            out["boundary_coefficient"] = str(Marked(coeff_K, 1, {n - 2: 1})) + "*int K"
        except ValueError:
            out["boundary_coefficient"] = None  # Phi carries no factor of kappa
        constant = Marked(_ratio(i_gr_b, total.coeff), -1, {n - 2: -1})
        out["boundary_constant"] = str(constant)
        if n == 6:
            checks.append(_check("K(x0) matches the tabulated value", K == KAPPA * ref.K_COEFF[6]))
            checks.append(_check("I_Gr,b = -5 kappa Vol", i_gr_b == ref.I_GR_B[6]))
            checks.append(
                _check(
                    "boundary coefficient (7i/8 - 3/8) * K reproduces Phi",
                    Marked(KAPPA * ref.BOUNDARY_COEFF_6 * ref.K_COEFF[6], 1, {4: 1}) == total,
                )
            )
            checks.append(
                _check(
                    "boundary constant equals 16/((7i-3) pi Omega4)",
                    constant == ref.BOUNDARY_CONSTANT_6,
                )
            )
            s_coeff = ScalarPoly.const(GaussianRational(Fraction(1, 16)))  # (1/(16 pi)) int s
            interior = Marked(_ratio(s_coeff, ref.INTERIOR_WRES_6.coeff), -1, {5: -1})
            out["interior"] = {
                "Wres_i": f"{ref.INTERIOR_WRES_6}*int s (documented, not computed)",
                "I_Gr_i_constant": str(interior),
            }
            checks.append(_check("interior constant equals -3/(80 pi Omega5)", interior == ref.INTERIOR_CONSTANT_6))
        if n == 5:
            checks.append(_check("I_Gr,b = -4 kappa Vol", i_gr_b == ref.I_GR_B[5]))
            checks.append(_check("boundary constant equals 16 i kappa/(3 pi Omega3)", constant == ref.ACTION_CONSTANT_5))
            lhs = ref.ACTION_CONSTANT_5 * total
            checks.append(_check("16 i kappa/(3 pi Omega3) * Phi = -4 kappa", lhs == Marked(KAPPA * -4, 0, {})))
            out["tabulated_constant_times_Phi"] = str(lhs)
    if report.perturbation == "left-multiply-f":
        out["boundary_term"] = f"{total} integrated over the boundary (f1 = d f/d x_n at x_n = 0)"
        out["interior"] = {"Wres_i": "-(5 Omega5/3) int f s (documented, not computed)"}
    out["checks"] = checks
    out["passed"] = all(c["passed"] for c in checks)
    return out


def _check(name: str, ok: bool) -> dict:
    return {"name": name, "passed": bool(ok)}
