"""Command-line front end.

Exit codes: 0 success or Holds, 1 Violated (or no sensitivity witness),
2 usage, input or domain error, 3 demo regression, 4 solver failure or an
inconclusive check.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .catalog import CompositeEstimator, parse_family, parse_interval, resolve_estimator, user_expression
from .demos import DEMOS, run_demo
from .domains import Interval, ParameterDomain
from .errors import DataParseError, EmptyData, PsiEstError, SolverError
from .expr import parse as parse_expr
from .io import FORMATS, dumps_stable, ingest_data
from .solver import DEFAULT_CONFIG, PsiFunction, SolverConfig, estimate_weighted
from .verify.report import Property, Verdict, fmt_real
from .verify.sensitivity import SensitivityQuery, find_sensitivity_witness
from .verify.suites import default_seed, property_from_name, run_suite

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_REGRESSION, EXIT_SOLVER = 0, 1, 2, 3, 4


class UsageError(PsiEstError):
    pass


def _add_psi_args(p: argparse.ArgumentParser, repeat: bool = False) -> None:
    p.add_argument("--psi", action="append" if repeat else "store",
                   help="family descriptor, e.g. 'normal(sigma=1)', 'alpha-density', 'sign', "
                        "'sqrt-mean', 'quasi-arith(f=\"ln(x)\")', or a reference estimator "
                        "(kappa, max, mid-range)")
    p.add_argument("--psi-expr", help="psi as an expression in x and t")
    p.add_argument("--theta", default="(-inf, inf)", help="parameter interval for --psi-expr")
    p.add_argument("--x-domain", default="(-inf, inf)", help="observation interval for --psi-expr")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_CONFIG.bracket_tol, help="relative bracket tolerance")
    p.add_argument("--zero-tol", type=float, default=DEFAULT_CONFIG.zero_tol)
    p.add_argument("--max-iter", type=int, default=DEFAULT_CONFIG.max_iterations)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psiest",
        description="Weighted generalized psi-estimators and checks of their properties.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate from a data file")
    _add_psi_args(est)
    est.add_argument("--data", required=True, help="csv (header with x[,weight]) or jsonl file")
    est.add_argument("--format", choices=FORMATS, default=None, help="default: from the file suffix")
    est.add_argument("--weights", help="weight column name, or inline comma separated weights")
    _add_solver_args(est)

    chk = sub.add_parser("check", help="run a seeded property suite")
    chk.add_argument("property", help="e.g. MeanType, weight-line-monotone, Bisymmetry2x2")
    _add_psi_args(chk)
    chk.add_argument("--trials", type=int, default=1000)
    chk.add_argument("--seed", type=int, default=None, help="default 42 or $PSIEST_SEED")
    _add_solver_args(chk)

    sen = sub.add_parser("sensitivity", help="search replication counts (k, m) with u < T < v")
    _add_psi_args(sen, repeat=True)
    sen.add_argument("--g-expr", help="composite map in t1..tN over the --psi components")
    sen.add_argument("--theta0", default="(-inf, inf)", help="range interval of the composite map")
    for name in ("x", "y", "u", "v"):
        sen.add_argument(f"--{name}", type=float, required=True)
    sen.add_argument("--max-total", type=int, default=512)
    _add_solver_args(sen)

    demo = sub.add_parser("demo", help="reproduce a worked example")
    demo.add_argument("id", choices=sorted(DEMOS))
    demo.add_argument("--json", action="store_true")
    return parser


def _resolve_one(text: str | None, args):
    if args.psi_expr is not None:
        if text is not None:
            raise UsageError("give either --psi or --psi-expr, not both")
        return user_expression(args.psi_expr, ParameterDomain(*parse_interval(args.theta)),
                               Interval(*parse_interval(args.x_domain)))
    if text is None:
        raise UsageError("--psi or --psi-expr is required")
    return resolve_estimator(text)


def _config(args) -> SolverConfig:
    return SolverConfig(bracket_tol=args.tol, zero_tol=args.zero_tol, max_iterations=args.max_iter)


def _emit(obj: dict, lines: Sequence[str], as_json: bool) -> None:
    if as_json:
        print(dumps_stable(obj))
    else:
        print("\n".join(lines))


def _parse_weights(raw: str | None):
    if raw is None:
        return None
    parts = [p.strip() for p in raw.split(",")]
    try:
        return [float(p) for p in parts]
    except ValueError:
        if len(parts) == 1:
            return raw
        raise UsageError(f"--weights must be a column name or a list of numbers, got {raw!r}") from None


def cmd_estimate(args) -> int:
    psi = _resolve_one(args.psi, args)
    if not isinstance(psi, PsiFunction):
        raise UsageError("estimate needs a psi family, not a reference estimator")
    fmt = args.format or ("jsonl" if str(args.data).endswith((".jsonl", ".ndjson")) else "csv")
    sample = ingest_data(args.data, fmt, _parse_weights(args.weights), psi.observation_domain)
    res = estimate_weighted(psi, sample, _config(args))
    obj = {
        "psi": psi.name,
        "n": sample.n,
        "theta_hat": res.theta_hat,
        "status": res.status.value,
        "residual": res.residual,
        "bracket": list(res.bracket),
        "iterations": res.iterations,
    }
    lines = [
        fmt_real(res.theta_hat),
        f"status {res.status.value}, residual {fmt_real(res.residual)}, "
        f"bracket [{fmt_real(res.bracket[0])}, {fmt_real(res.bracket[1])}], {res.iterations} iterations",
    ]
    _emit(obj, lines, args.json)
    return EXIT_OK


_VERDICT_EXIT = {Verdict.HOLDS: EXIT_OK, Verdict.VIOLATED: EXIT_VIOLATED, Verdict.INCONCLUSIVE: EXIT_SOLVER}


def cmd_check(args) -> int:
    prop = property_from_name(args.property)
    est = _resolve_one(args.psi, args)
    seed = default_seed() if args.seed is None else args.seed
    rep = run_suite(prop, est, args.trials, seed, _config(args))
    obj = rep.to_dict()
    lines = [f"{rep.property.value}: {rep.status.value} ({rep.trials} trials, seed {rep.seed}, "
             f"tolerance {fmt_real(rep.tolerance_used)})"]
    if prop is Property.MEAN_TYPE or prop is Property.MEAN_TYPE_STRICT:
        lines.append(f"strict inequalities checked in {rep.details.get('strict_trials', 0)} trials")
    if rep.witness is not None:
        lines.append("witness: " + dumps_stable(obj["witness"]))
    if rep.cause:
        lines.append(f"cause: {rep.cause}")
    _emit(obj, lines, args.json)
    return _VERDICT_EXIT[rep.status]


def cmd_sensitivity(args) -> int:
    specs = args.psi or []
    if args.g_expr is not None:
        if args.psi_expr is not None or not specs:
            raise UsageError("--g-expr needs one or more --psi components")
        comps = [parse_family(s).psi() for s in specs]
        names = [f"t{i + 1}" for i in range(len(comps))]
        est = CompositeEstimator(tuple(comps), parse_expr(args.g_expr, names),
                                 ParameterDomain(*parse_interval(args.theta0)))
        label = f"g = {args.g_expr}"
    else:
        if len(specs) > 1:
            raise UsageError("several --psi components need --g-expr")
        est = _resolve_one(specs[0] if specs else None, args)
        label = getattr(est, "name", None) or getattr(est, "kind", "")
    q = SensitivityQuery(args.x, args.y, args.u, args.v, args.max_total)
    res = find_sensitivity_witness(est, q, _config(args))
    obj = {"estimator": label, "x": q.x, "y": q.y, "u": q.u, "v": q.v, "max_total": q.max_total,
           "result": res.status}
    if res.found:
        obj.update({"k": res.k, "m": res.m, "value": res.value})
        lines = [f"{res.status}: k = {res.k}, m = {res.m}, value {fmt_real(res.value)}"]
    else:
        lines = [f"{res.status} (max_total {q.max_total})"]
    _emit(obj, lines, args.json)
    return EXIT_OK if res.found else EXIT_VIOLATED


def cmd_demo(args) -> int:
    res = run_demo(args.id)
    obj = {"demo": res.demo, "reproduced": res.reproduced, "lines": res.lines}
    lines = list(res.lines) + ([] if res.reproduced else ["REGRESSION: output differs from the known values"])
    _emit(obj, lines, args.json)
    return res.exit_code


COMMANDS = {"estimate": cmd_estimate, "check": cmd_check, "sensitivity": cmd_sensitivity, "demo": cmd_demo}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SolverError as exc:
        print(f"psiest: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (PsiEstError, ValueError, OSError) as exc:
        kind = "input error" if isinstance(exc, (DataParseError, EmptyData, OSError)) else "error"
        print(f"psiest: {kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
