"""Command-line entry point: ``cbtkraw <command> [options]``.

Exit codes: 0 success, 1 an acceptance criterion failed (``verify-all``),
2 invalid input, 3 the u-matrix solver failed, 4 a parameter condition check
failed (``params``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import acceptance, export
from .errors import DomainError, SolverError
from .hypergeo import eval_f1n, polynomial_table
from .kernel import build_kernel, check_detailed_balance, eigen_check
from .ortho import adjudicate_norm_formulas, dual_gram_matrix, gram_matrix
from .params import ModelParams, check_geometry, check_orthogonality_conditions, solve_spectral
from .sim import SimConfig, run
from .tolerances import DEFAULT, names as tolerance_names, with_overrides

EXIT_FAIL, EXIT_INPUT, EXIT_SOLVER, EXIT_CONDITION = 1, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _common(parser):
    parser.add_argument("--config", help="JSON model manifest (schema cbt-krawtchouk/v1)")
    parser.add_argument("--n", type=int, help="number of success categories")
    parser.add_argument("--N", type=int, help="number of dice")
    parser.add_argument("--alpha", type=_floats, help="first-roll probabilities a1,a2,...")
    parser.add_argument("--beta", type=_floats, help="second-roll probabilities b1,b2,...")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--seed", type=int, help="unsigned 64-bit RNG seed")
    parser.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help=f"override a tolerance; names: {', '.join(tolerance_names())}")


def build_parser():
    parser = argparse.ArgumentParser(prog="cbtkraw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="solve eta, u, eta_bar and check every parameter relation")
    _common(p)

    p = sub.add_parser("eval", help="evaluate P_m(x) with the solved u-matrix")
    _common(p)
    p.add_argument("--m", type=_ints, required=True, help="degree m1,m2,...")
    p.add_argument("--x", type=_ints, required=True, help="state x1,x2,...")

    p = sub.add_parser("kernel", help="transition kernel with balance residuals")
    _common(p)

    p = sub.add_parser("ortho", help="brute-force Gram matrix")
    _common(p)
    p.add_argument("--dual", action="store_true", help="sum over degrees with the dual weight")

    p = sub.add_parser("eigen", help="eigen residuals for every degree")
    _common(p)

    p = sub.add_parser("adjudicate", help="compare squared norms with candidate closed forms")
    _common(p)

    p = sub.add_parser("simulate", help="Monte Carlo run of the dice process")
    _common(p)
    p.add_argument("--steps", type=int, default=10_100, help="transitions per chain")
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--chains", type=int, default=100)
    p.add_argument("--initial", type=_ints, help="initial state (default all zeros)")

    p = sub.add_parser("verify-all", help="run every acceptance criterion")
    _common(p)
    p.add_argument("--skip", action="append", default=[], metavar="STAGE",
                   help=f"skip a stage; stages: {', '.join(acceptance.STAGES)}")
    return parser


def _tolerances(args):
    overrides = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        overrides[name.strip()] = value
    try:
        return with_overrides(DEFAULT, overrides)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _model(args, required=True):
    data = export.load_config(args.config) if args.config else {}
    for key in ("N", "alpha", "beta", "n", "seed"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.seed is None and "seed" in data:
        args.seed = int(data["seed"])
    if not required and not {"alpha", "beta"} & data.keys():
        return None
    data.setdefault("N", 6)
    return export.model_from(data)


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_params(args, tol):
    model = _model(args)
    sp = solve_spectral(model, tol)
    report = check_orthogonality_conditions(sp, tol)
    geometry = float(np.max(check_geometry(sp.u))) if model.n > 1 else 0.0
    residuals = dict(report.residuals, geometry=geometry)
    passed = report.passed and geometry < tol.geometry
    if args.format == "json":
        doc = export.document("spectral-params", params=model.to_dict(), spectral=sp.to_dict(),
                              conditions={"tolerance": report.tolerance, "passed": passed,
                                          "residuals": residuals})
        _emit(args, export.dumps(doc))
    else:
        rows = [["Dn", sp.Dn]]
        for name in ("eta", "eta_bar", "omega", "eigen_factors", "delta"):
            rows += [[f"{name}[{i}]", float(v)] for i, v in enumerate(getattr(sp, name))]
        rows += [[f"u[{i}][{j}]", float(sp.u[i, j])] for i in range(model.n) for j in range(model.n)]
        rows += [[f"residual:{k}", float(v)] for k, v in residuals.items()]
        _emit(args, export.table_csv(["name", "value"], rows))
    return 0 if passed else EXIT_CONDITION


def cmd_eval(args, tol):
    model = _model(args)
    sp = solve_spectral(model, tol)
    value = eval_f1n(args.m, args.x, model.N, sp.u)
    if args.format == "json":
        _emit(args, export.dumps(export.document("polynomial-value", params=model.to_dict(),
                                                 m=args.m, x=args.x, value=value)))
    else:
        _emit(args, export.table_csv(["m", "x", "value"],
                                     [[export.state_label(args.m), export.state_label(args.x), value]]))
    return 0


def cmd_kernel(args, tol):
    model = _model(args)
    kern = build_kernel(model, tol)
    if args.format == "json":
        doc = export.kernel_json(kern)
        doc["detailed_balance"] = check_detailed_balance(kern)
        doc["column_sum_residual"] = kern.column_sum_residual()
        _emit(args, export.dumps(doc))
    else:
        _emit(args, export.kernel_csv(kern))
    return 0


def cmd_ortho(args, tol):
    model = _model(args)
    sp = solve_spectral(model, tol)
    report = (dual_gram_matrix if args.dual else gram_matrix)(sp, model.N, tol=tol)
    if args.format == "json":
        _emit(args, export.dumps(export.document("gram-dual" if args.dual else "gram",
                                                 params=model.to_dict(), **report.to_dict())))
    else:
        _emit(args, export.gram_csv(report))
    return 0


def cmd_eigen(args, tol):
    model = _model(args)
    sp = solve_spectral(model, tol)
    kern = build_kernel(model, tol)
    rep = eigen_check(kern, sp, polynomial_table(sp.u, kern.enumeration), tol)
    if args.format == "json":
        _emit(args, export.dumps(export.document("eigen", params=model.to_dict(), **rep.to_dict())))
    else:
        rows = [[export.state_label(m), float(l), float(r)]
                for m, l, r in zip(rep.degrees, rep.eigenvalues, rep.residuals)]
        _emit(args, export.table_csv(["degree", "eigenvalue", "residual"], rows))
    return 0 if rep.passed else EXIT_CONDITION


def cmd_adjudicate(args, tol):
    model = _model(args)
    sp = solve_spectral(model, tol)
    rep = adjudicate_norm_formulas(sp, model.N, tol=tol)
    if args.format == "json":
        _emit(args, export.dumps(export.document("norm-adjudication", params=model.to_dict(),
                                                 **rep.to_dict())))
    else:
        names = list(rep.candidates)
        rows = [[export.state_label(m), float(rep.brute_force[i])]
                + [float(rep.candidates[k][i]) for k in names] for i, m in enumerate(rep.degrees)]
        _emit(args, export.table_csv(["degree", "brute_force"] + names, rows))
    return 0


def cmd_simulate(args, tol):
    model = _model(args)
    config = SimConfig(model, steps=args.steps, burn_in=args.burn_in,
                       seed=args.seed if args.seed is not None else 0,
                       initial_state=tuple(args.initial) if args.initial else None,
                       chains=args.chains)
    report = run(config, tol)
    if args.format == "json":
        _emit(args, export.dumps(export.document("simulation", seed=config.seed, chains=config.chains,
                                                 steps=config.steps, burn_in=config.burn_in,
                                                 **report.to_dict())))
    else:
        from .combinatorics import enumerate_simplex
        _emit(args, export.occupancy_csv(report, enumerate_simplex(model.n, model.N)))
    return 0


def _paint(text, ok):
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def cmd_verify_all(args, tol):
    model = _model(args, required=False)
    skip = {s for item in args.skip for s in item.split(",") if s}
    unknown = skip - set(acceptance.STAGES)
    if unknown:
        raise UsageError(f"unknown stage(s) {sorted(unknown)}; known: {acceptance.STAGES}")
    results = acceptance.run_all(tol, model, skip)
    ok = all(r.passed for r in results)
    if args.format == "json":
        _emit(args, export.dumps(export.document("verify-all", passed=ok, skipped=sorted(skip),
                                                 criteria=[r.to_dict() for r in results])))
    else:
        rows = [[r.number, r.stage, "pass" if r.passed else "fail", r.seconds, r.detail] for r in results]
        _emit(args, export.table_csv(["criterion", "stage", "result", "seconds", "detail"], rows))
    for r in results:
        print(_paint(r.line(), r.passed), file=sys.stderr)
    return 0 if ok else EXIT_FAIL


COMMANDS = {
    "params": cmd_params,
    "eval": cmd_eval,
    "kernel": cmd_kernel,
    "ortho": cmd_ortho,
    "eigen": cmd_eigen,
    "adjudicate": cmd_adjudicate,
    "simulate": cmd_simulate,
    "verify-all": cmd_verify_all,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        tol = _tolerances(args)
        return COMMANDS[args.command](args, tol)
    except (UsageError, DomainError, json.JSONDecodeError) as exc:
        print(f"cbtkraw: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"cbtkraw: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
