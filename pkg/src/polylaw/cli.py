"""Command-line front end.

Subcommands: ``e-coeff``, ``pi``, ``invdim``, ``factor``, ``verify-all``.
Exit status: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Sequence

from . import divpow, genmat, lawkit, suites
from .exactalg import ParseError, render
from .freering import parse_free

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


def _config(args) -> suites.RunConfig:
    gens = tuple(s.strip() for s in args.gens.split(",") if s.strip())
    try:
        return suites.RunConfig(n=args.n, gens=gens, maxdeg=args.maxdeg, maxwordlen=args.maxwordlen,
                                seed=args.seed, inject_fault=getattr(args, "inject_fault", False))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, cfg: suites.RunConfig, command: str, result: dict, text_lines: List[str]) -> None:
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "config": cfg.as_dict(), "result": result}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def cmd_echarcoeff(args) -> int:
    cfg = _config(args)
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    f = parse_free(args.f, cfg.gens)
    value = genmat.char_coeff(genmat.embed_generic(f, ctx), args.i)
    rendered = render(value)
    _emit(args, cfg, "e-coeff", {"f": str(f), "i": args.i, "value": rendered}, [rendered])
    return 0


def cmd_pi(args) -> int:
    cfg = _config(args)
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    u = divpow.parse_dp(args.element, cfg.n, cfg.gens, strict=True)
    rendered = render(genmat.pi_image(u, ctx))
    _emit(args, cfg, "pi", {"element": str(u), "value": rendered}, [rendered])
    return 0


def cmd_invdim(args) -> int:
    cfg = _config(args)
    rows = suites.graded_table(cfg)
    lines = [f"n={cfg.n} gens={','.join(cfg.gens)}",
             "multidegree  invariant_dim  e_span_rank  ab_rank  pi_rank  status"]
    ok = True
    for row in rows:
        vals = (row["invariant_dim"], row["e_span_rank"], row["ab_rank"], row["pi_rank"])
        row["agree"] = len(set(vals)) == 1
        ok = ok and row["agree"]
        deg = "(" + ",".join(map(str, row["multidegree"])) + ")"
        lines.append(f"{deg:<12} {vals[0]:>13} {vals[1]:>12} {vals[2]:>8} {vals[3]:>8}  "
                     f"{'ok' if row['agree'] else 'MISMATCH'}")
    lines.append("all columns agree" if ok else "MISMATCH found")
    _emit(args, cfg, "invdim", {"rows": rows, "passed": ok}, lines)
    return 0 if ok else 1


def cmd_factor(args) -> int:
    cfg = _config(args)
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    try:
        law = lawkit.parse_fixture(args.fixture, cfg.gens, cfg.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if law.n != cfg.n:
        ctx = genmat.GenericContext(law.n, cfg.gens)
    tests = [parse_free(t, cfg.gens) for t in (args.test or suites.test_elements(cfg))]
    result = {"fixture": law.name, "ring": law.ring.name}
    lines = [f"fixture {law.name} (degree {law.n}, values in {law.ring.name})"]
    try:
        phi = lawkit.factor_law(law, ctx, cap=cfg.maxwordlen)
    except lawkit.LawError as exc:
        result.update({"passed": False, "error": str(exc), "witness": exc.witness,
                       "phi": [], "tests": [], "welldefined": None})
        lines.append(f"FAIL {exc}")
        _emit(args, cfg, "factor", result, lines)
        return 1
    if cfg.inject_fault:
        phi = phi.perturbed(genmat.esym(law.n, (cfg.gens[0],)))
    table = []
    for s in cfg.gens:
        for i in range(1, law.n + 1):
            sym = genmat.esym(i, (s,))
            val = phi.value(sym)
            table.append({"symbol": str(sym), "value": law.ring.to_json(val)})
            lines.append(f"phi({sym}) = {law.ring.render(val)}")
    checks = []
    for c in lawkit.verify_factorization(law, phi, ctx, tests):
        checks.append({"f": c.f, "p_value": law.ring.to_json(c.p_value),
                       "phi_value": law.ring.to_json(c.phi_value), "denominator": c.denominator,
                       "expression": c.expression, "det_identity": c.det_identity,
                       "scalar_identity": c.scalar_identity, "diagram": c.diagram,
                       "passed": c.passed})
        lhs = law.ring.render(c.p_value) if c.denominator == 1 else \
            f"{c.denominator}*({law.ring.render(c.p_value)})"
        lines.append(f"test {c.f}: p = {lhs}, phi(det) = {law.ring.render(c.phi_value)} "
                     f"{'PASS' if c.passed else 'FAIL'}")
    rels = lawkit.all_relations(ctx, min(cfg.maxdeg, 4))
    wd = lawkit.check_welldefined(phi, rels)
    lines.append(f"well-defined on {len(rels)} relations: {'PASS' if wd else 'FAIL ' + str(wd.witness)}")
    ok = all(c["passed"] for c in checks) and wd.passed
    lines.append("PASS" if ok else "FAIL")
    result.update({"passed": ok, "phi": table, "tests": checks,
                   "welldefined": {"passed": wd.passed, "relations": len(rels), "witness": wd.witness}})
    _emit(args, cfg, "factor", result, lines)
    return 0 if ok else 1


def cmd_verify_all(args) -> int:
    cfg = _config(args)
    results = suites.run_all(cfg)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  checked={r.checked}")
        for f in r.failures:
            lines.append(f"      failing: {f}")
    npass = sum(r.passed for r in results)
    lines.append(f"suites: {npass} passed, {len(results) - npass} failed")
    result = {"suites": [{"name": r.name, "passed": r.passed, "checked": r.checked,
                          "failures": r.failures} for r in results],
              "passed": npass, "failed": len(results) - npass}
    _emit(args, cfg, "verify-all", result, lines)
    return 0 if npass == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="matrix size / divided-power degree")
    common.add_argument("--gens", default="x,y", help="comma-separated generator labels")
    common.add_argument("--maxdeg", type=int, default=4, help="total-degree bound")
    common.add_argument("--maxwordlen", type=int, default=3, help="word-length bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="polylaw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("e-coeff", parents=[common], help="characteristic coefficient e_i(j_n(f))")
    p.add_argument("--f", required=True, help="element of the free ring, e.g. 'x*y + 1'")
    p.add_argument("--i", type=int, required=True)
    p.set_defaults(func=cmd_echarcoeff)

    p = sub.add_parser("pi", parents=[common], help="image of a divided-power element in A_S(n)")
    p.add_argument("element", help="e.g. 'd(1,1)*d(x,1)'")
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("invdim", parents=[common], help="graded dimension table")
    p.set_defaults(func=cmd_invdim)

    p = sub.add_parser("factor", parents=[common], help="factor a law through the determinant")
    p.add_argument("--fixture", required=True, help="e.g. det:n=2, norm:d=2, power:n=2,c=3")
    p.add_argument("--test", action="append", help="test element (repeatable)")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("verify-all", parents=[common], help="run every property suite")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"polylaw: parse error: {exc}", file=sys.stderr)
        return 2
    except divpow.DegreeMismatch as exc:
        print(f"polylaw: degree mismatch: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"polylaw: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
