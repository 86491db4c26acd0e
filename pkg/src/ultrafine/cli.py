"""Command-line entry point: ``ultrafine <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 validation error, 4 infeasible
problem, 5 non-convergence. ``ULTRAFINE_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analyzer, legendre, sepvalue
from .catalog import NAMES, catalog
from .core import ProductObservable, ValidationError, as_operator
from .io import (FIG1_HEADER, SCAN_HEADER, csv_text, load_operator, load_pair,
                 operator_to_dict, write_csv)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_INFEASIBLE, EXIT_NONCONVERGED = 0, 2, 3, 4, 5


class NonConvergence(RuntimeError):
    pass


def _default_seed() -> int:
    try:
        return int(os.environ.get("ULTRAFINE_SEED", "0"))
    except ValueError:
        return 0


def _read_op(arg: str):
    """Load an operator file, or ``catalog:<name>:<C|L>`` for a built-in one."""
    if arg.startswith("catalog:"):
        parts = arg.split(":")
        if len(parts) != 3 or parts[2] not in ("C", "L"):
            raise ValidationError(f"expected catalog:<name>:<C|L>, got {arg!r}")
        entry = catalog(parts[1])
        return getattr(entry, parts[2])
    return load_operator(arg)


def _product(op, flag):
    if not isinstance(op, ProductObservable):
        raise ValidationError(f"{flag} must be given in factor form for this command")
    return op


def _vec(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _emit(args, report: dict, lines):
    if args.json:
        print(json.dumps(report, indent=1, sort_keys=True))
    else:
        for line in lines:
            print(line)


# subcommands -------------------------------------------------------------------

def cmd_bound(args):
    if args.closed_form:
        if args.observables:
            raise ValidationError("--closed-form applies only to the built-in Z(x)Z / X(x)X pair")
        eps = legendre.xxzz_closed_form(args.c, args.l)
        report = {"c": args.c, "l": args.l, "epsilon": eps, "method": "closed-form"}
    else:
        if args.observables:
            C, L = load_pair(args.observables)
        else:
            entry = catalog("xxzz")
            C, L = entry.C, entry.L
        res = legendre.eps_bound(args.c, args.l, as_operator(C), as_operator(L),
                                 restarts=args.restarts, seed=args.seed)
        eps = res.epsilon
        report = {"c": args.c, "l": args.l, "epsilon": eps, "alpha": res.alphaStar,
                  "beta": res.betaStar, "evaluations": res.evaluations,
                  "certified": res.certified, "warning": res.warning, "method": "legendre"}
    _emit(args, report, [f"{eps:.10g}"])


def cmd_fig1(args):
    rows = legendre.fig1_grid(args.resolution)
    if args.out:
        write_csv(rows, FIG1_HEADER, args.out)
        _emit(args, {"rows": len(rows), "out": args.out}, [f"wrote {len(rows)} rows to {args.out}"])
    else:
        sys.stdout.write(csv_text(rows, FIG1_HEADER))


def cmd_sep_max(args):
    X = as_operator(_read_op(args.op))
    res = sepvalue.sep_max(X, restarts=args.restarts, seed=args.seed)
    t = res.optimizer[0]
    report = {"value": res.value, "a": _vec(t.a), "b": _vec(t.b),
              "restarts": res.restarts, "converged": res.converged}
    _emit(args, report, [f"g_sep = {res.value:.10g}", f"converged = {str(res.converged).lower()}"])
    if not res.converged:
        raise NonConvergence("see-saw hit the iteration limit")


def cmd_witness(args):
    rep = sepvalue.is_witness(as_operator(_read_op(args.op)), restarts=args.restarts, seed=args.seed)
    report = {"sepMin": rep.sepMin, "minEigenvalue": rep.minEigenvalue, "isWitness": rep.isWitness}
    _emit(args, report, [f"sep_min = {rep.sepMin:.10g}",
                         f"min_eigenvalue = {rep.minEigenvalue:.10g}",
                         f"is_witness = {str(rep.isWitness).lower()}"])


def cmd_uew(args):
    L = as_operator(_read_op(args.L))
    C = as_operator(_read_op(args.C))
    rep = sepvalue.uew_evaluate(L, C, args.c, args.l, restarts=args.restarts, seed=args.seed)
    report = {"c": args.c, "g_c": rep.gc, "primal": rep.primal.value,
              "gap": rep.primal.certifiedGap, "mu": rep.dual.muStar,
              "hyperplane_min": rep.hyperplaneMin, "flags": list(rep.primal.flags),
              "optimizer": [{"weight": t.weight, "a": _vec(t.a), "b": _vec(t.b)}
                            for t in rep.primal.optimizer]}
    lines = [f"g_c = {rep.gc:.10g}", f"primal_dual_gap = {rep.primal.certifiedGap:.3e}",
             f"hyperplane_min = {rep.hyperplaneMin:.10g}"]
    if args.l is not None:
        report.update(l=args.l, detected=rep.detected)
        lines.append(f"detected = {str(rep.detected).lower()}")
    _emit(args, report, lines)


def cmd_scan(args):
    C = as_operator(_read_op(args.C))
    L = as_operator(_read_op(args.L))
    if args.steps < 1:
        raise ValidationError("--steps must be positive")
    grid = np.linspace(args.lambda_min, args.lambda_max, args.steps)
    res = analyzer.lambda_scan(C, L, grid, workers=args.threads)
    rows = list(res.rows())
    if args.out:
        write_csv(rows, SCAN_HEADER, args.out)
        _emit(args, {"rows": len(rows), "out": args.out,
                     "extremal_always_product": res.extremal_always_product()},
              [f"wrote {len(rows)} rows to {args.out}",
               f"extremal_always_product = {str(res.extremal_always_product()).lower()}"])
    else:
        sys.stdout.write(csv_text(rows, SCAN_HEADER))


def cmd_analyze(args):
    C = _product(_read_op(args.C), "--C")
    L = _product(_read_op(args.L), "--L")
    v = analyzer.usefulness_verdict(C, L)
    report = {"kind": v.kind, "witnessSlopes": v.witnessSlopes, "evidence": v.evidence,
              "local_commutators_nonzero": list(v.data["local_commutators_nonzero"])}
    if "search" in v.data:
        report["max_extremal_negativity"] = v.data["search"]["negativity"]
    lines = [f"verdict = {v.kind}", f"evidence = {v.evidence}"]
    if v.witnessSlopes:
        lines.append(f"slopes = {v.witnessSlopes[0]:.10g} {v.witnessSlopes[1]:.10g}")
    _emit(args, report, lines)


def cmd_catalog(args):
    entry = catalog(args.name)
    doc = {"name": entry.name, "C": operator_to_dict(entry.C, name="C"),
           "L": operator_to_dict(entry.L, name="L"), "metadata": entry.metadata}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for key in ("C", "L"):
            (out / f"{key}.json").write_text(json.dumps(doc[key], indent=1), encoding="utf-8")
        (out / "pair.json").write_text(json.dumps(doc, indent=1), encoding="utf-8")
        _emit(args, {"out": str(out), "files": ["C.json", "L.json", "pair.json"]},
              [f"wrote {out / 'C.json'}, {out / 'L.json'}, {out / 'pair.json'}"])
    else:
        print(json.dumps(doc, indent=1))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=_default_seed())
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="ultrafine", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bound", parents=[common], help="Legendre lower bound on the geometric measure")
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--l", type=float, required=True)
    s.add_argument("--observables", help="pair document with C and L (default: Z(x)Z, X(x)X)")
    s.add_argument("--closed-form", action="store_true")
    s.set_defaults(func=cmd_bound, default_restarts=legendre.DEFAULT_RESTARTS)

    s = sub.add_parser("fig1", parents=[common], help="closed-form bound on a grid (CSV)")
    s.add_argument("--resolution", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fig1, default_restarts=1)

    s = sub.add_parser("sep-max", parents=[common], help="maximum over separable states")
    s.add_argument("--op", required=True)
    s.set_defaults(func=cmd_sep_max, default_restarts=sepvalue.DEFAULT_RESTARTS)

    s = sub.add_parser("witness", parents=[common], help="check the witness property")
    s.add_argument("--op", required=True)
    s.set_defaults(func=cmd_witness, default_restarts=sepvalue.DEFAULT_RESTARTS)

    s = sub.add_parser("uew", parents=[common], help="ultrafine witness threshold on Tr(C rho) = c")
    s.add_argument("--L", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--l", type=float)
    s.set_defaults(func=cmd_uew, default_restarts=sepvalue.DEFAULT_RESTARTS)

    s = sub.add_parser("scan", parents=[common], help="spectra of C + lambda L (CSV)")
    s.add_argument("--C", required=True)
    s.add_argument("--L", required=True)
    s.add_argument("--lambda-min", type=float, default=-5.0)
    s.add_argument("--lambda-max", type=float, default=5.0)
    s.add_argument("--steps", type=int, default=201)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan, default_restarts=1)

    s = sub.add_parser("analyze", parents=[common], help="can C and L detect entanglement?")
    s.add_argument("--C", required=True)
    s.add_argument("--L", required=True)
    s.set_defaults(func=cmd_analyze, default_restarts=1)

    s = sub.add_parser("catalog", parents=[common], help="emit a built-in observable pair")
    s.add_argument("name", choices=NAMES)
    s.add_argument("--out", help="directory for C.json, L.json and pair.json")
    s.set_defaults(func=cmd_catalog, default_restarts=1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.restarts is None:
        args.restarts = args.default_restarts
    if args.restarts < 1 or args.threads < 1:
        parser.print_usage(sys.stderr)
        print("ultrafine: error: --restarts and --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except sepvalue.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NonConvergence as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (ValidationError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
