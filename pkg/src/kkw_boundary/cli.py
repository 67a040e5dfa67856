"""Command-line front end.

Exit status: 0 when everything ran and matched, 2 when a computed value
disagrees with a reference value (the report is still written), 1 on usage
or internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .parser import ParseError, SemanticError, parse_expr
from .parser import __doc__ as GRAMMAR

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _p_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}")
    return a, b


def _common(sp, need_p=True):
    sp.add_argument("--n", type=int, default=6, help="manifold dimension (5 or 6)")
    if need_p:
        sp.add_argument("--p", type=_p_pair, default=(1, 3), help="orders p1,p2 of the two inverse powers")
        sp.add_argument("--perturb", choices=("none", "left-multiply-f"), default="none")
        sp.add_argument(
            "--sigma4",
            choices=("published", "recursion", "raw"),
            default="published",
            help="form of the order -4 symbol of D^-3",
        )
    sp.add_argument("--format", choices=("json", "md"), default="md")
    sp.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="kkw-boundary", description="Exact boundary-term computations with a numeric oracle.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_ArgumentParser)

    sp = sub.add_parser("phi", help="compute every case of the boundary sum and the total")
    _common(sp)
    sp.add_argument("--oracle", action="store_true", help="also run the numeric cross-check")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = sub.add_parser("case", help="compute a single case")
    _common(sp)
    sp.add_argument("--label", required=True, help="case label, e.g. aII, b, c, main")

    sp = sub.add_parser("verify", help="symbol identities, reference comparisons and oracle sweeps")
    sp.add_argument("--all", action="store_true", help="run every configuration and three seeds")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--format", choices=("json", "md"), default="md")
    sp.add_argument("--out")

    sp = sub.add_parser("report", help="gravitational-action assembly for a boundary sum")
    _common(sp)

    sp = sub.add_parser("eval", help="evaluate an expression in the exact algebra")
    sp.add_argument("expr")
    sp.add_argument("--n", type=int, default=6)

    sub.add_parser("selftest", help="quick internal consistency checks")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


# -- markdown --

def phi_markdown(report) -> str:
    n, (p1, p2) = report.n, report.p
    lines = [f"# Boundary sum, n = {n}, (p1, p2) = ({p1}, {p2}), perturbation: {report.perturbation}", ""]
    if report.sigma4 != "published":
        lines += [f"Order -4 symbol form: {report.sigma4}", ""]
    lines += ["| case | r | l | k | j | alpha | form | value | reference | match |", "|---|---|---|---|---|---|---|---|---|---|"]
    for c in report.cases:
        s = c.spec
        value = "0 (vanishes)" if c.vanished else str(c.integral)
        ref = "" if c.reference is None else str(c.reference)
        match = "" if c.match is None else ("yes" if c.match else "NO")
        lines.append(f"| {c.label} | {s.r} | {s.l} | {s.k} | {s.j} | {s.alpha} | {c.form} | {value} | {ref} | {match} |")
    lines += ["", f"Total: {report.total}"]
    if report.reference_total is not None:
        lines.append(f"Reference total: {report.reference_total} ({'match' if report.total_match else 'MISMATCH'})")
    for g in report.groups:
        lines.append(f"Sum of {' + '.join(g['labels'])}: {g['sum']} ({'match' if g['match'] else 'MISMATCH'})")
    traces = [c for c in report.cases if not c.vanished]
    if traces:
        lines += ["", "## Integrands", ""]
        for c in traces:
            lines.append(f"- {c.label}: trace `{c.trace}`; integrand `{c.integrand_trace}`")
    notes = list(report.notes) + [f"{c.label}: {n}" for c in report.cases for n in c.notes]
    if notes:
        lines += ["", "## Notes", ""] + [f"- {n}" for n in notes]
    if report.oracle is not None:
        o = report.oracle
        lines += ["", f"## Oracle (seed {o['seed']}, tol {o['tol']:g}): {'pass' if o['passed'] else 'FAIL'}", ""]
        for c in o["cases"]:
            lines.append(f"- {c['label']}: spread {c['spread']:.2e}, {'pass' if c['passed'] else 'FAIL'}")
    return "\n".join(lines)


def gravity_markdown(g: dict) -> str:
    lines = [f"# Gravitational action, n = {g['n']}, (p1, p2) = {tuple(g['p'])}", ""]
    for key in ("K_x0", "I_Gr_b", "Phi", "boundary_coefficient", "boundary_constant", "tabulated_constant_times_Phi", "boundary_term"):
        if g.get(key) is not None:
            lines.append(f"- {key}: {g[key]}")
    if "interior" in g:
        for k, v in g["interior"].items():
            lines.append(f"- interior {k}: {v}")
    lines += ["", "## Checks", ""]
    for c in g["checks"]:
        lines.append(f"- {c['name']}: {'pass' if c['passed'] else 'FAIL'}")
    return "\n".join(lines)


# -- verbs --

def cmd_phi(args) -> int:
    from .engine import phi
    from .oracle import crosscheck_phi, make_context

    report = phi(args.n, *args.p, args.perturb, args.sigma4)
    if args.oracle:
        ctx = make_context(args.n, args.seed)
        report.oracle = crosscheck_phi(
            args.n, *args.p, args.perturb, ctx=ctx, tol=args.tol, sigma4=args.sigma4, report=report, strict=False
        ).to_json()
    _emit(_dump(report.to_json()) if args.format == "json" else phi_markdown(report), args.out)
    return EXIT_OK if report.all_match() else EXIT_MISMATCH


def cmd_case(args) -> int:
    from .engine import phi

    report = phi(args.n, *args.p, args.perturb, args.sigma4)
    found = [c for c in report.cases if c.label == args.label]
    if not found:
        raise UsageError(f"no case {args.label!r}; available: {', '.join(c.label for c in report.cases)}")
    c = found[0]
    if args.format == "json":
        text = _dump(c.to_json())
    else:
        text = "\n".join(
            [
                f"# Case {c.label} (n = {args.n}, p = {args.p})",
                "",
                f"- trace: `{c.trace}`",
                f"- integrand: `{c.integrand_trace}`",
                f"- value: {c.integral}",
                f"- reference: {c.reference}" if c.reference is not None else "- reference: none",
            ]
            + [f"- note: {n}" for n in c.notes]
        )
    _emit(text, args.out)
    return EXIT_MISMATCH if c.match is False else EXIT_OK


CONFIGS = ((6, 1, 3, "none"), (5, 1, 3, "none"), (6, 2, 2, "left-multiply-f"))


def run_verification(seeds, tol: float) -> dict:
    from .engine import gravity_report, phi
    from .oracle import crosscheck_phi, make_context
    from .symbols import f_dependent_q6, verify_f_independence, verify_inverse_leading, verify_q_minus4

    t0 = time.perf_counter()
    symbol_checks = [
        verify_inverse_leading(6).to_json(),
        verify_inverse_leading(5).to_json(),
        verify_q_minus4(6).to_json(),
        verify_f_independence().to_json(),
    ]
    q6 = f_dependent_q6()
    symbol_checks.append({"name": "f_dependent_q6", "passed": q6.consistent_with_interior, "details": q6.to_json()})
    configs = []
    for n, p1, p2, pert in CONFIGS:
        rep = phi(n, p1, p2, pert)
        entry = {"config": [n, p1, p2, pert], "report": rep.to_json(), "gravity": gravity_report(rep), "oracle": []}
        for seed in seeds:
            res = crosscheck_phi(n, p1, p2, pert, ctx=make_context(n, seed), tol=tol, report=rep, strict=False)
            entry["oracle"].append(res.to_json())
        entry["matches_reference"] = rep.all_match()
        entry["oracle_passed"] = all(o["passed"] for o in entry["oracle"])
        configs.append(entry)
    passed = (
        all(c["passed"] for c in symbol_checks)
        and all(c["matches_reference"] and c["oracle_passed"] and c["gravity"]["passed"] for c in configs)
    )
    return {
        "symbol_checks": symbol_checks,
        "configs": configs,
        "passed": passed,
        "oracle_passed": all(c["oracle_passed"] for c in configs),
        "seconds": round(time.perf_counter() - t0, 3),
    }


def verify_markdown(v: dict) -> str:
    lines = ["# Verification", "", "## Symbol identities", ""]
    for c in v["symbol_checks"]:
        lines.append(f"- {c['name']}: {'pass' if c['passed'] else 'FAIL'}")
    for c in v["configs"]:
        n, p1, p2, pert = c["config"]
        rep = c["report"]
        lines += ["", f"## n = {n}, p = ({p1}, {p2}), {pert}", ""]
        lines.append(f"- total: {rep['total']['text']}")
        if "reference_total" in rep:
            lines.append(f"- reference total: {rep['reference_total']['text']}")
        for m in rep["mismatches"]:
            lines.append(f"- MISMATCH {m['label']}: computed {m['computed']}, reference {m['reference']}")
        lines.append(f"- gravity checks: {'pass' if c['gravity']['passed'] else 'FAIL'}")
        for o in c["oracle"]:
            lines.append(f"- oracle seed {o['seed']}: {'pass' if o['passed'] else 'FAIL'}")
    lines += ["", f"Overall: {'pass' if v['passed'] else 'MISMATCH'} (oracle {'pass' if v['oracle_passed'] else 'FAIL'}, {v['seconds']} s)"]
    return "\n".join(lines)


def cmd_verify(args) -> int:
    seeds = [args.seed, args.seed + 1, args.seed + 2] if args.all else [args.seed]
    v = run_verification(seeds, args.tol)
    _emit(_dump(v) if args.format == "json" else verify_markdown(v), args.out)
    if not v["oracle_passed"]:
        return EXIT_ERROR
    return EXIT_OK if v["passed"] else EXIT_MISMATCH


def cmd_report(args) -> int:
    from .engine import gravity_report, phi

    rep = phi(args.n, *args.p, args.perturb, args.sigma4)
    g = gravity_report(rep)
    _emit(_dump(g) if args.format == "json" else gravity_markdown(g), args.out)
    return EXIT_OK if g["passed"] and rep.all_match() else EXIT_MISMATCH


def cmd_eval(args) -> int:
    print(parse_expr(args.expr, args.n).render())
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .clifford import A, B, P, cl_trace
    from .engine import phi
    from .oracle import make_context, numeric_trace

    checks = [
        ("tr(P*A)", parse_expr("tr(P*A)").render() == "-4*kappa*u"),
        ("piplus", parse_expr("piplus(1/((xi-i)*(xi+i)))").render() == "-i/(2*(xi-i))"),
        ("int", parse_expr("int((2*i-6*xi)/((xi-i)^3*(xi+i)^3))").render() == "(3/4)*pi*i"),
        ("trace rule", cl_trace(A * B * A * B, 6).subs({"u": 1}).constant_value() == -8),
        ("numeric trace", abs(numeric_trace(P * A, make_context(6, 1)) + 1.2) < 1e-12),
        ("phi(6,1,3)", phi(6, 1, 3).total_match),
    ]
    del B
    for name, ok in checks:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_ERROR


COMMANDS = {"phi": cmd_phi, "case": cmd_case, "verify": cmd_verify, "report": cmd_report, "eval": cmd_eval, "selftest": cmd_selftest}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "n", 6) not in (5, 6):
            raise UsageError("--n must be 5 or 6")
        return COMMANDS[args.verb](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        print(ap.format_usage(), file=sys.stderr, end="")
        print("\nexpression grammar:" + GRAMMAR.split("\n\n")[1].rstrip(), file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, SemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        from .engine import UnsupportedConfiguration

        if isinstance(exc, UnsupportedConfiguration):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        raise


def main() -> None:
    sys.exit(run())
