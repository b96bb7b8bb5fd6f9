"""Command-line front end: ``mockdim <subcommand> [options]``.

Numbers are printed with 12 significant digits; ``--json`` switches to a
machine-readable record on stdout.  Exit status is 0 exactly when every
check requested by the command passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import checks, curves, dimformula, heckealg, kloosterman, lattice, mockform


def fmt(x) -> str:
    if isinstance(x, complex):
        if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
            x = x.real
        else:
            return f"{x.real:.12g}{x.imag:+.12g}j"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def num(x):
    """JSON-friendly number rounded to 12 significant digits."""
    if isinstance(x, complex):
        if abs(x.imag) > 1e-12 * max(1.0, abs(x.real)):
            return {"re": float(f"{x.real:.12g}"), "im": float(f"{x.imag:.12g}")}
        x = x.real
    return float(f"{float(x):.12g}")


@dataclass
class CommandResult:
    status: int
    text: list = field(default_factory=list)
    record: dict | None = None

    def emit(self, as_json: bool, stream=None):
        stream = stream or sys.stdout
        if as_json:
            stream.write(json.dumps(self.record, indent=2, sort_keys=True) + "\n")
        else:
            stream.write("\n".join(self.text) + "\n")


# -- subcommands ------------------------------------------------------------------

def cmd_curve(args) -> CommandResult:
    E = curves.curve(args.level)
    nf = curves.newform_coefficients(E, args.terms)
    L = mockform.lattice_for(E)
    lval = curves.l_value_at_1(E)
    rec = {"level": E.conductor, "ainvs": list(E.ainvs), "discriminant": E.discriminant,
           "j_invariant": str(E.j_invariant), "points_f2": curves.count_points_mod_p(E, 2),
           "coefficients": [int(x) for x in nf.coefficients(args.terms)[1:]],
           "atkin_lehner": {str(Q): e for Q, e in nf.atkin_lehner.items()},
           "l_value": num(lval), "omega1": num(L.omega1), "omega2": num(L.omega2)}
    text = [f"curve of conductor {E.conductor}: a-invariants {list(E.ainvs)}",
            f"  discriminant {E.discriminant}, j = {E.j_invariant}",
            f"  #E(F_2) = {rec['points_f2']}",
            f"  a(n), n <= {args.terms}: {rec['coefficients']}",
            f"  Atkin-Lehner eigenvalues: {nf.atkin_lehner}",
            f"  L(E,1) = {fmt(lval)}",
            f"  periods: omega1 = {fmt(L.omega1)}, omega2 = {fmt(L.omega2)}"]
    return CommandResult(0, text, rec)


def cmd_zeta_value(args) -> CommandResult:
    E = curves.curve(args.level)
    L = mockform.lattice_for(E)
    if args.z is None:
        z = curves.l_value_at_1(E)
        label = "L(E,1)"
    else:
        z = complex(args.z.replace(" ", ""))
        label = fmt(z)
    v = lattice.completed_zeta_eval(L, z)
    rec = {"level": args.level, "z": num(complex(z)), "value": num(v)}
    text = [f"zeta^(Lambda_E; {label}) = {fmt(v)}  [N={args.level}]"]
    status = 0
    if args.z is None and args.level in checks.ZETA_AT_L:
        expected = checks.ZETA_AT_L[args.level]
        res = abs(v - float(expected))
        rec.update(expected=str(expected), residual=num(res))
        text.append(f"  expected {expected}, residual {fmt(res)}")
        status = 0 if res < 1e-6 else 1
    return CommandResult(status, text, rec)


def cmd_constants(args) -> CommandResult:
    E = curves.curve(args.level)
    c0 = mockform.constant_term(E)
    cusp = mockform.all_cusp_constants(E)
    rec = {"level": args.level, "c_E": num(c0), "cusp_constants": {str(Q): num(v) for Q, v in cusp.items()}}
    text = [f"c_E(0) = {fmt(c0)}  [N={args.level}]"]
    text += [f"c_E,{Q}(0) = {fmt(v)}" for Q, v in cusp.items()]
    status = 0
    if len(heckealg.primefactors(args.level)) == 1:
        res = mockform.constant_C_E(E)
        rec.update(C_E=num(res.value), residual=num(res.residual), points_f2=res.points_f2)
        text.append(f"C_E = {fmt(res.value)}  (#E(F_2) = {res.points_f2}), "
                    f"residual vs -24/(p-1): {fmt(res.residual)}")
        status = 0 if res.residual < 1e-6 else 1
    return CommandResult(status, text, rec)


def cmd_op(args) -> CommandResult:
    word = heckealg.OperatorWord.parse(args.word)
    cd = heckealg.constant_calculus_apply(heckealg.zhat_cuspdata(args.level), word)
    rec = {"level": cd.level, "word": str(word), "cusps": {
        str(Q): {"polar": {str(n): str(c) for n, c in sorted(e.polar.items())},
                 "constant": e.constant.to_record()} for Q, e in sorted(cd.cusps.items())}}
    text = [f"Z^_E | {word}  (level {args.level} -> {cd.level})"]
    text += [f"  cusp W_{Q}: {e!r}" for Q, e in sorted(cd.cusps.items())]
    return CommandResult(0, text, rec)


def cmd_kloosterman(args) -> CommandResult:
    v = kloosterman.kloosterman_sum(args.m, args.n, args.c)
    rec = {"m": args.m, "n": args.n, "c": args.c, "value": num(v)}
    return CommandResult(0, [f"K({args.m},{args.n},{args.c}) = {fmt(v)}"], rec)


def cmd_poincare(args) -> CommandResult:
    res = kloosterman.poincare_coefficient(args.index, args.coeff, args.level, c_max=args.cmax)
    rec = {"level": args.level, "index": args.index, "coeff": args.coeff, "c_max": args.cmax,
           "value": num(res.value), "tail": num(res.tail), "tol": args.tol}
    text = [f"P_{args.index} coefficient of q^{args.coeff} [N={args.level}] = {fmt(res.value)}",
            f"  tail estimate {fmt(res.tail)} at c_max = {args.cmax}"]
    status = 0
    if res.tail > args.tol:
        text.append(f"  FAIL: tail estimate exceeds tolerance {fmt(args.tol)}; increase --cmax")
        status = 1
    return CommandResult(status, text, rec)


def cmd_dim(args) -> CommandResult:
    t = dimformula.DimensionTable.load(args.input)
    if args.level is not None and args.level != t.level:
        raise SystemExit(f"table level {t.level} does not match --level {args.level}")
    N = t.level
    rec = {"level": N, "table": t.to_record()}
    text = [f"dimension table of level {N}: dim V_1^G = {t.dim_v1_fixed}, {len(t.twisted)} twisted entries"]
    if len(heckealg.primefactors(N)) == 1:
        closed = dimformula.closed_form_prime_symbolic(t)
        asm = dimformula.assemble_character_prime(t).total
        agree = closed == asm
        rec.update(closed_form=closed.to_record(), assembly=asm.to_record(), agree=agree,
                   residual=(closed - asm).to_record(), S=dimformula.sigma_sum(t))
        text += [f"  closed form: {closed!r}", f"  assembly:    {asm!r}",
                 f"  residual:    {closed - asm!r}",
                 f"  S = {rec['S']}, paths agree: {agree}"]
        if N in dimformula.PRIME_CE:
            val = dimformula.dim_formula_prime(t).value
            rec["value"] = str(val)
            text.append(f"  dim V_1 + dim V_1^orb = {val} = {fmt(float(val))}")
        return CommandResult(0 if agree else 1, text, rec)
    consts = dimformula.numeric_constants(N)
    res = dimformula.dim_formula_composite(t, consts)
    p1, p2 = heckealg.primefactors(N)
    sym = dimformula.assemble_character(t, (p2, p1)).total == res.assembly
    rec.update(assembly=res.assembly.to_record(), printed=res.printed.to_record(),
               residual=res.residual.to_record(), assembly_value=num(res.assembly_value),
               printed_value=num(res.printed_value), numeric_residual=num(res.numeric_residual),
               symmetric=sym)
    text += [f"  (b) assembly: {res.assembly!r} = {fmt(res.assembly_value)}",
             f"  (a) printed:  {res.printed!r} = {fmt(res.printed_value)}",
             f"  (a) - (b) = {fmt(res.numeric_residual)} (reported, the assembly is authoritative)",
             f"  assembly p1 <-> p2 symmetric: {sym}"]
    return CommandResult(0 if sym else 1, text, rec)


def run_verify_suite(selector: str, seed: int = 0, **options) -> CommandResult:
    """Run one invariant suite (or "all") and collect per-check residuals."""
    results = checks.run_suite(selector, seed=seed, **options)
    text = [f"verify {selector} (seed {seed})"]
    for c in results:
        tag = "info" if c.report_only else ("pass" if c.passed else "FAIL")
        line = f"  [{tag}] {c.name}: residual {fmt(float(c.residual))}"
        if not c.report_only:
            line += f" (tol {fmt(float(c.tol))})"
        if c.detail:
            line += f"; {c.detail}"
        text.append(line)
    failed = sum(not c.passed for c in results)
    text.append(f"{len(results) - failed}/{len(results)} checks passed")
    rec = {"suite": selector, "seed": seed, "checks": [
        {"name": c.name, "residual": num(float(c.residual)), "tol": c.tol, "passed": c.passed,
         "report_only": c.report_only, "detail": c.detail} for c in results]}
    return CommandResult(0 if failed == 0 else 1, text, rec)


def cmd_verify(args) -> CommandResult:
    options = {}
    if args.cmax is not None:
        options["c_max"] = args.cmax
    if args.tables is not None:
        options["n_tables"] = args.tables
    return run_verify_suite(args.suite, args.seed, **options)


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a machine-readable record")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random sweeps (default 0)")
    parser = argparse.ArgumentParser(prog="mockdim", parents=[common],
                                     description="Weierstrass mock modular forms and orbifold dimension formulas")
    sub = parser.add_subparsers(dest="command", required=True)
    levels = dict(type=int, choices=curves.LEVELS, required=True)

    p = sub.add_parser("curve", parents=[common], help="curve data, newform and periods")
    p.add_argument("--level", **levels)
    p.add_argument("--terms", type=int, default=20)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("zeta-value", parents=[common], help="completed zeta at L(E,1) or at --z")
    p.add_argument("--level", **levels)
    p.add_argument("--z", help="complex argument such as 0.3+0.1j")
    p.set_defaults(func=cmd_zeta_value)

    p = sub.add_parser("constants", parents=[common], help="constant terms and C_E")
    p.add_argument("--level", **levels)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("op", parents=[common], help="cusp data of Z^_E under an operator word")
    p.add_argument("--word", required=True, help='comma-separated atoms, e.g. "W11,T3,B1"')
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("kloosterman", parents=[common], help="Kloosterman sum K(m,n,c)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_kloosterman)

    p = sub.add_parser("poincare", parents=[common], help="Poincare series coefficient")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--index", type=int, required=True, help="order m of the pole q^-m")
    p.add_argument("--coeff", type=int, required=True, help="coefficient index n >= 1")
    p.add_argument("--cmax", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-2, help="maximal accepted tail estimate")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("dim", parents=[common], help="evaluate the dimension formulas for a table")
    p.add_argument("--input", required=True, help="JSON dimension table")
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all", choices=checks.SUITES + ("all",))
    p.add_argument("--cmax", type=int, help="c-range of the Poincare suite")
    p.add_argument("--tables", type=int, help="random tables per prime in the dimensions suite")
    p.set_defaults(func=cmd_verify)
    return parser


def dispatch(argv=None) -> CommandResult:
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    return args.func(args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    try:
        result = args.func(args)
    except (ValueError, ArithmeticError, NotImplementedError, OSError) as exc:
        print(f"mockdim {args.command}: error: {exc}", file=sys.stderr)
        return 2
    result.emit(args.json)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
