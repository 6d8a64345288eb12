"""Acceptance criteria, one check per criterion.

Each check returns ``(ok, detail)`` and must also finish within its time
budget. Under pytest every outcome is printed as a ``[PASS]``/``[FAIL]`` line
in the terminal summary; run this file directly to get the same lines without
pytest.
"""
import sys
import time

import numpy as np
import pytest

from psiest import NonUniqueSignChange, WeightedSample, estimate, estimate_weighted
from psiest.catalog import (
    KAPPA,
    MAX,
    MID_RANGE,
    CompositeEstimator,
    alpha_density,
    closed_form_weighted,
    kappa,
    normal_location,
    parse_family,
    quasi_arithmetic,
    sign_location,
    sqrt_mean,
)
from psiest.expr import parse
from psiest.solver import DEFAULT_CONFIG
from psiest.verify import (
    Property,
    SensitivityQuery,
    Verdict,
    check_bisymmetry,
    check_mean_type,
    check_quasi_affine_equivalence,
    find_sensitivity_witness,
    find_up_down,
    is_quasi_affine_sequence,
    run_suite,
)
from psiest.verify.checks import replication_errors
from psiest.verify.suites import SHAPES, sampled_function

SEED = 42
RESULTS: dict[int, tuple[bool, str]] = {}


def _rng(i):
    return np.random.default_rng([SEED, i])


def _settings():
    return {"normal": normal_location(), "alpha-density": alpha_density()}


def _all_hold(prop, ests, trials):
    bad = []
    for name, est in ests.items():
        rep = run_suite(prop, est, trials=trials, seed=SEED)
        if rep.status is not Verdict.HOLDS:
            bad.append(f"{name}: {rep.status.value} {rep.cause or rep.witness}")
    return not bad, "; ".join(bad) or f"{len(ests)} estimators x {trials} trials Holds"


def criterion_1():
    a, b, c = kappa([1, 81]), kappa([25, 25]), kappa([1, 81, 25, 25])
    rep = check_mean_type(KAPPA, [[1, 81], [25, 25]])
    ok = (abs(a - 25) <= 1e-12 and abs(b - 25) <= 1e-12 and abs(c - 24) <= 1e-12
          and rep.status is Verdict.VIOLATED and abs(rep.witness["margin"] - 1.0) <= 1e-12)
    return ok, f"kappa values {a!r}, {b!r}, {c!r}; mean-type {rep.status.value}"


def criterion_2():
    rep = check_bisymmetry(KAPPA, [[1, 81], [81, 1], [25, 25], [25, 25]])
    w = rep.witness or {}
    ok = (rep.status is Verdict.VIOLATED and abs(w["min_row"] - 25) <= 1e-12
          and abs(w["max_column"] - 24) <= 1e-12)
    return ok, f"{rep.status.value}: min row {w.get('min_row')!r} > max column {w.get('max_column')!r}"


def criterion_3():
    psi = sqrt_mean()
    worst = 0.0
    for i in range(1000):
        x, y = 10.0 ** _rng(i).uniform(-3.0, 3.0, size=2)
        worst = max(worst, abs(estimate(psi, [x, y]).theta_hat - kappa([x, y])))
    t3 = estimate(psi, [1, 1, 64]).theta_hat
    k3 = kappa([1, 1, 64])
    ok = worst <= 1e-9 and abs(t3 - 100 / 9) <= 1e-9 and abs(k3 - 13) <= 1e-12
    return ok, f"worst pair error {worst:.3g}; sqrt-mean(1,1,64) = {t3!r}; kappa(1,1,64) = {k3!r}"


def criterion_4():
    parts = []
    ok = True
    for spec, (lo, hi) in [("normal(sigma=1)", (-100.0, 100.0)), ("alpha-density", (0.0, 1.0))]:
        fam = parse_family(spec)
        psi = fam.psi()
        worst = 0.0
        for i in range(1000):
            r = _rng(i)
            n = int(r.integers(1, 11))
            xs = r.uniform(lo, hi, n)
            if lo == 0.0:
                xs = np.where(xs > 0.0, xs, 0.5)  # uniform draws can hit 0, outside (0, 1)
            s = WeightedSample(tuple(float(v) for v in xs), tuple(float(10 * (1 - v)) for v in r.random(n)))
            worst = max(worst, abs(estimate_weighted(psi, s).theta_hat - closed_form_weighted(fam, s)))
        ok &= worst <= 1e-9
        parts.append(f"{spec} worst {worst:.3g}")
    return ok, "; ".join(parts)


def criterion_5():
    psi = sign_location()
    bad = 0
    for i in range(100):
        r = _rng(i)
        x, y = sorted(float(v) for v in r.uniform(-50.0, 50.0, size=2))
        lam = float(r.random())
        if lam == 0.5:
            lam = 0.25
        res = estimate_weighted(psi, WeightedSample((x, y), (lam, 1.0 - lam)))
        want = y if lam < 0.5 else x
        bad += abs(res.theta_hat - want) > DEFAULT_CONFIG.tolerance(x, y)
    ties = 0
    for i in range(100, 120):
        x, y = (float(v) for v in _rng(i).uniform(-50.0, 50.0, size=2))
        try:
            estimate_weighted(psi, WeightedSample((x, y), (0.5, 0.5)))
        except NonUniqueSignChange:
            ties += 1
    return bad == 0 and ties == 20, f"{100 - bad}/100 table values; {ties}/20 ties NonUniqueSignChange"


def criterion_6():
    ests = {**_settings(), "sqrt-mean": sqrt_mean(), "geometric": quasi_arithmetic("ln(x)").psi()}
    bad = []
    strict = 0
    for name, est in ests.items():
        rep = run_suite(Property.MEAN_TYPE, est, trials=1000, seed=SEED)
        strict += rep.details["strict_trials"]
        if rep.status is not Verdict.HOLDS:
            bad.append(f"{name}: {rep.status.value} {rep.cause or rep.witness}")
    return not bad, "; ".join(bad) or f"4 x 1000 Holds, {strict} trials held strictly"


def criterion_7():
    return _all_hold(Property.WEIGHT_LINE_MONOTONE, _settings(), 500)


def criterion_8():
    ok1, d1 = _all_hold(Property.BISYMMETRY_2X2, _settings(), 1000)
    ok2, d2 = _all_hold(Property.BISYMMETRY, _settings(), 500)
    return ok1 and ok2, f"2x2: {d1}; n x m: {d2}"


def criterion_9():
    sched = [2**j for j in range(11)]
    _, errs = replication_errors(normal_location(), [0.0], [1.0], sched, DEFAULT_CONFIG)
    worst = max(abs(e - 1.0 / (ell + 1)) for ell, e in zip(sched, errs))
    y, z = ([float(v)] for v in np.random.default_rng(SEED).uniform(0.0, 1.0, size=2))
    _, errs2 = replication_errors(alpha_density(), y, z, [2**20], DEFAULT_CONFIG)
    ok = worst <= 1e-12 and errs2[-1] < 1e-6
    return ok, f"normal worst deviation {worst:.3g}; alpha-density e at 2^20 = {errs2[-1]:.3g}"


def criterion_10():
    return _all_hold(Property.WEIGHT_CONTINUITY, _settings(), 100)


def criterion_11():
    res = find_sensitivity_witness(normal_location(), SensitivityQuery(0.0, 1.0, 0.3, 0.4))
    r_max = find_sensitivity_witness(MAX, SensitivityQuery(0.0, 1.0, 0.3, 0.4, 512))
    r_mid = find_sensitivity_witness(MID_RANGE, SensitivityQuery(0.0, 1.0, 0.6, 0.7, 512))
    comp = CompositeEstimator((normal_location(1.0), normal_location(2.0)), parse("(t1 + t2)/2"))
    r = _rng(0)
    x, y = sorted(float(v) for v in r.uniform(-10.0, 10.0, size=2))
    a, b = sorted(float(v) for v in r.uniform(0.05, 0.95, size=2))
    u, v = x + (y - x) * a, x + (y - x) * max(b, a + 0.01)
    r_comp = find_sensitivity_witness(comp, SensitivityQuery(x, y, u, v, 512))
    ok = (res.pair == (2, 1) and r_max.status == "NotFoundUpToBound"
          and r_mid.status == "NotFoundUpToBound" and r_comp.found)
    return ok, (f"normal {res.pair}; max {r_max.status}; mid-range {r_mid.status}; "
                f"composite window ({u:.6g}, {v:.6g}) -> {r_comp.pair}")


def criterion_12():
    mismatches = 0
    for i in range(200):
        vals = sampled_function(_rng(i), SHAPES[i % 4], 64)
        direct = (find_up_down(vals) is None) == is_quasi_affine_sequence(vals)
        rep = check_quasi_affine_equivalence(vals)
        mismatches += (not direct) or rep.status is not Verdict.HOLDS
    return mismatches == 0, f"{200 - mismatches}/200 agree"


def criterion_13():
    psis = {**_settings(), "sign": sign_location(), "sqrt-mean": sqrt_mean(),
            "geometric": quasi_arithmetic("ln(x)").psi()}
    refs = {"kappa": KAPPA, "max": MAX, "mid-range": MID_RANGE}
    bad = []
    for prop, ests in [(Property.PERMUTATION_INVARIANCE, {**psis, **refs}),
                       (Property.NULL_HOMOGENEITY, psis),
                       (Property.REPLICATION_COLLAPSE, psis),
                       (Property.SIGN_CHANGE_CERTIFICATE, psis)]:
        ok, detail = _all_hold(prop, ests, 1000)
        if not ok:
            bad.append(f"{prop.value}: {detail}")
    return not bad, "; ".join(bad) or "four invariants Hold on the built-in catalog, 1000 trials each"


CRITERIA = {
    1: ("kappa counterexample (mean-type)", criterion_1, 1.0),
    2: ("kappa counterexample (bisymmetry)", criterion_2, 1.0),
    3: ("sqrt-mean vs kappa", criterion_3, 5.0),
    4: ("closed-form oracles", criterion_4, 10.0),
    5: ("sign-psi table", criterion_5, 5.0),
    6: ("mean-type suite", criterion_6, 30.0),
    7: ("weight-line monotonicity", criterion_7, 30.0),
    8: ("bisymmetry suites", criterion_8, 30.0),
    9: ("replication limit", criterion_9, 5.0),
    10: ("weight continuity", criterion_10, 10.0),
    11: ("sensitivity", criterion_11, 10.0),
    12: ("up-down vs quasi-affinity", criterion_12, 5.0),
    13: ("structural invariants", criterion_13, 30.0),
}


def evaluate(number: int) -> tuple[bool, str]:
    title, fn, budget = CRITERIA[number]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        ok = False
        detail += f"; over budget ({elapsed:.2f} s >= {budget:g} s)"
    line = f"criterion {number} ({title}): {detail} [{elapsed:.2f} s]"
    RESULTS[number] = (ok, line)
    return ok, line


def summary_lines() -> list[str]:
    return [f"[{'PASS' if ok else 'FAIL'}] {line}" for _, (ok, line) in sorted(RESULTS.items())]


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, line = evaluate(number)
    print(f"[{'PASS' if ok else 'FAIL'}] {line}")
    assert ok, line


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        evaluate(n)
    for line in summary_lines():
        print(line)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
