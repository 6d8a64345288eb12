"""Reproductions of the worked examples with their known exact outcomes.

Each demo returns a :class:`DemoResult`; ``reproduced`` is False when a
number or verdict differs from the known value, which signals a regression.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .catalog import KAPPA, MAX, MID_RANGE, alpha_density, kappa, normal_location, sign_location
from .errors import NonUniqueSignChange
from .solver import DEFAULT_CONFIG, WeightedSample, estimate_weighted
from .verify.checks import check_bisymmetry, check_mean_type, replication_errors
from .verify.report import fmt_real
from .verify.sensitivity import SensitivityQuery, find_sensitivity_witness

EXACT = 1e-12
REPLICATION_SEED = 42


@dataclass
class DemoResult:
    demo: str
    reproduced: bool
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.reproduced else 3


def _close(a: float, b: float, tol: float = EXACT) -> bool:
    return abs(a - b) <= tol


def kappa_mean_type() -> DemoResult:
    a, b, c = kappa([1, 81]), kappa([25, 25]), kappa([1, 81, 25, 25])
    rep = check_mean_type(KAPPA, [[1, 81], [25, 25]])
    ok = (_close(a, 25) and _close(b, 25) and _close(c, 24)
          and rep.violated and _close(rep.witness["margin"], 1.0))
    lines = [
        f"kappa(1, 81) = {fmt_real(a)}",
        f"kappa(25, 25) = {fmt_real(b)}",
        f"kappa(1, 81, 25, 25) = {fmt_real(c)}",
        f"mean-type {rep.status.value.upper()}: {fmt_real(c)} < min({fmt_real(a)}, {fmt_real(b)})"
        if rep.violated else f"mean-type {rep.status.value}",
    ]
    return DemoResult("kappa-mean-type", ok, lines, {"values": [a, b, c], "report": rep.to_dict()})


def kappa_bisymmetry() -> DemoResult:
    grid = [[1, 81], [81, 1], [25, 25], [25, 25]]
    rep = check_bisymmetry(KAPPA, grid)
    rec = rep.witness or rep.details
    ok = rep.violated and _close(rec["min_row"], 25) and _close(rec["max_column"], 24)
    lines = [
        "rows: " + ", ".join(fmt_real(v) for v in rec["row_values"]),
        "columns: " + ", ".join(fmt_real(v) for v in rec["column_values"]),
        f"bisymmetry {rep.status.value.upper()}: min row {fmt_real(rec['min_row'])} "
        f"> max column {fmt_real(rec['max_column'])}",
    ]
    return DemoResult("kappa-bisymmetry", ok, lines, {"report": rep.to_dict()})


SIGN_LAMBDAS = (0.0, 0.1, 0.25, 0.4, 0.49, 0.51, 0.6, 0.75, 0.9, 1.0)


def sign_table(x: float = 1.0, y: float = 5.0) -> DemoResult:
    psi = sign_location()
    ok = True
    lines = [f"x = {fmt_real(x)}, y = {fmt_real(y)}", "lambda  estimate  expected"]
    rows = []
    for lam in SIGN_LAMBDAS:
        res = estimate_weighted(psi, WeightedSample((x, y), (lam, 1.0 - lam)))
        want = y if lam < 0.5 else x
        good = _close(res.theta_hat, want, 1e-9 * max(1.0, abs(want)))
        ok &= good
        rows.append([lam, res.theta_hat, want])
        lines.append(f"{lam:<7g} {fmt_real(res.theta_hat)}  {fmt_real(want)}{'' if good else '  MISMATCH'}")
    try:
        estimate_weighted(psi, WeightedSample((x, y), (0.5, 0.5)))
        lines.append("lambda = 1/2: unexpectedly unique")
        ok = False
    except NonUniqueSignChange as exc:
        lines.append(f"lambda = 1/2: NonUniqueSignChange ({exc})")
    return DemoResult("sign-table", ok, lines, {"rows": rows})


def replication() -> DemoResult:
    sched = [2**j for j in range(11)]
    _, errs = replication_errors(normal_location(), [0.0], [1.0], sched, DEFAULT_CONFIG)
    ok = all(_close(e, 1.0 / (ell + 1)) for ell, e in zip(sched, errs))
    lines = ["normal, y = (0), z = (1): e_l against 1/(l+1)"]
    lines += [f"l = {ell:<5d} e = {fmt_real(e)}" for ell, e in zip(sched, errs)]
    # seeded instance; the gap shrinks like 1/l with an instance-dependent constant
    y, z = ([float(v)] for v in np.random.default_rng(REPLICATION_SEED).uniform(0.0, 1.0, size=2))
    big = [2**j for j in range(0, 21, 4)]
    _, errs2 = replication_errors(alpha_density(), y, z, big, DEFAULT_CONFIG)
    ok &= errs2[-1] < 1e-6
    lines.append(f"alpha-density, y = ({fmt_real(y[0])}), z = ({fmt_real(z[0])})")
    lines += [f"l = 2^{int(math.log2(ell)):<3d} e = {fmt_real(e)}" for ell, e in zip(big, errs2)]
    return DemoResult("replication", ok, lines, {"normal": errs, "alpha-density": errs2})


def sensitivity_normal() -> DemoResult:
    res = find_sensitivity_witness(normal_location(), SensitivityQuery(0.0, 1.0, 0.3, 0.4))
    ok = res.found and (res.k, res.m) == (2, 1) and _close(res.value, 1.0 / 3.0, 1e-9)
    lines = [f"normal, x = 0, y = 1, window (0.3, 0.4): {res.status} k = {res.k}, m = {res.m}"
             + (f", value {fmt_real(res.value)}" if res.found else "")]
    return DemoResult("sensitivity-normal", ok, lines, {"k": res.k, "m": res.m, "value": res.value})


def sensitivity_max() -> DemoResult:
    r1 = find_sensitivity_witness(MAX, SensitivityQuery(0.0, 1.0, 0.3, 0.4))
    r2 = find_sensitivity_witness(MID_RANGE, SensitivityQuery(0.0, 1.0, 0.6, 0.7))
    ok = not r1.found and not r2.found
    lines = [
        f"max, x = 0, y = 1, window (0.3, 0.4): {r1.status} (max_total {r1.max_total})",
        f"mid-range, x = 0, y = 1, window (0.6, 0.7): {r2.status} (max_total {r2.max_total})",
    ]
    return DemoResult("sensitivity-max", ok, lines, {"max": r1.status, "mid-range": r2.status})


DEMOS: dict[str, Callable[[], DemoResult]] = {
    "kappa-mean-type": kappa_mean_type,
    "kappa-bisymmetry": kappa_bisymmetry,
    "sign-table": sign_table,
    "replication": replication,
    "sensitivity-normal": sensitivity_normal,
    "sensitivity-max": sensitivity_max,
}


def run_demo(demo_id: str) -> DemoResult:
    try:
        fn = DEMOS[demo_id]
    except KeyError:
        raise KeyError(f"unknown demo {demo_id!r}; expected one of {sorted(DEMOS)}") from None
    return fn()
