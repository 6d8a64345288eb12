"""Seeded randomized suites built from the single-instance checks.

Trial ``i`` of a suite with seed ``s`` draws everything from
``numpy.random.default_rng([s, i])``, so a trial can be reproduced on its own
and results do not depend on execution order.
"""
from __future__ import annotations

import math
import os
from typing import Callable

import numpy as np

from ..domains import Interval
from ..errors import DomainError
from ..solver import DEFAULT_CONFIG, PsiFunction, SolverConfig
from . import checks
from .report import Property, PropertyReport, Verdict
from .sensitivity import SensitivityQuery, sensitivity_report

DEFAULT_SEED = 42
REPLICATION_SCHEDULE = checks.DEFAULT_ELL_SCHEDULE
REFERENCE_REPLICATION_SCHEDULE = tuple(2**j for j in range(11))


def default_seed() -> int:
    """42 unless ``PSIEST_SEED`` is set."""
    raw = os.environ.get("PSIEST_SEED")
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"PSIEST_SEED must be an integer, got {raw!r}") from None


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


# -- input generators -----------------------------------------------------------------


def draw_observations(rng: np.random.Generator, domain: Interval, n: int) -> list[float]:
    """Points well inside ``domain``: uniform on bounded domains, log-uniform on half-lines."""
    lo, hi = domain.lo, domain.hi
    if math.isfinite(lo) and math.isfinite(hi):
        u = rng.uniform(0.02, 0.98, size=n)
        return [float(lo + (hi - lo) * v) for v in u]
    if math.isfinite(lo) or math.isfinite(hi):
        mag = 10.0 ** rng.uniform(-1.0, 2.0, size=n)
        return [float(lo + m) if math.isfinite(lo) else float(hi - m) for m in mag]
    return [float(v) for v in rng.uniform(-10.0, 10.0, size=n)]


def draw_weights(rng: np.random.Generator, n: int, hi: float = 5.0) -> list[float]:
    """Weights in ``(0, hi]``."""
    return [float(hi * (1.0 - v)) for v in rng.random(n)]


def _needs_odd(est) -> bool:
    # psi not continuous in t (sign family): unit weights only give a unique
    # sign change for odd totals
    return isinstance(est, PsiFunction) and not est.continuous_in_t


def draw_size(rng: np.random.Generator, est, lo: int, hi: int) -> int:
    n = int(rng.integers(lo, hi + 1))
    if _needs_odd(est) and n % 2 == 0:
        n = n + 1 if n < hi else n - 1
    return max(n, 1)


def _obs(est, rng, n):
    return draw_observations(rng, est.observation_domain, n)


def _mean_type(est, rng, cfg):
    k = int(rng.integers(1, 5))
    if _needs_odd(est):
        k |= 1
    blocks = [_obs(est, rng, draw_size(rng, est, 1, 5)) for _ in range(k)]
    return checks.check_mean_type(est, blocks, cfg)


def _weight_line(est, rng, cfg):
    n = int(rng.integers(2, 6))
    xs = _obs(est, rng, n)
    b = draw_weights(rng, n)
    a = [float(v) for v in rng.normal(0.0, 1.0, size=n)]
    return checks.check_weight_line_monotone(est, xs, a, b, 33, cfg)


def _bisymmetry(est, rng, cfg):
    n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    if _needs_odd(est):
        n, m = n | 1, m | 1
    grid = [_obs(est, rng, m) for _ in range(n)]
    return checks.check_bisymmetry(est, grid, None, cfg)


def _bisymmetry_2x2(est, rng, cfg):
    x, y, u, v = _obs(est, rng, 4)
    al, be, ga, de = draw_weights(rng, 4)
    return checks.check_bisymmetry_2x2(est, x, y, u, v, al, be, ga, de, cfg)


def _replication(est, rng, cfg):
    ys = _obs(est, rng, draw_size(rng, est, 1, 3))
    zs = _obs(est, rng, draw_size(rng, est, 1, 3))
    if _needs_odd(est):
        # odd blocks and even l keep every replicated total odd
        sched = tuple(2 * ell for ell in REPLICATION_SCHEDULE)
    elif isinstance(est, PsiFunction) or hasattr(est, "components"):
        sched = REPLICATION_SCHEDULE
    else:
        sched = REFERENCE_REPLICATION_SCHEDULE
    return checks.check_replication_limit(est, ys, zs, sched, cfg)


def _continuity(est, rng, cfg):
    n = int(rng.integers(1, 6))
    xs = _obs(est, rng, n)
    lam0 = [float(v) for v in rng.uniform(0.5, 5.0, size=n)]
    sub = int(rng.integers(0, 2**31))
    return checks.check_weight_continuity(est, xs, lam0, 0.1, 8, cfg, seed=sub)


def _null_homogeneity(est, rng, cfg):
    n = int(rng.integers(1, 7))
    xs = _obs(est, rng, n)
    ws = draw_weights(rng, n)
    s = float(10.0 * (1.0 - rng.random()))
    return checks.check_null_homogeneity(est, xs, ws, s, cfg)


def _permutation(est, rng, cfg):
    n = draw_size(rng, est, 1, 6)
    xs = _obs(est, rng, n)
    perm = [int(p) for p in rng.permutation(n)]
    return checks.check_permutation_invariance(est, xs, perm, cfg)


def _psi_only(est, prop):
    if not isinstance(est, PsiFunction):
        raise DomainError(f"{prop.value} applies to psi functions only")


def _collapse(est, rng, cfg):
    _psi_only(est, Property.REPLICATION_COLLAPSE)
    n = int(rng.integers(1, 7))
    xs = _obs(est, rng, n)
    counts = [int(c) for c in rng.integers(0, 11, size=n)]
    if sum(counts) == 0:
        counts[0] = 1
    if _needs_odd(est) and sum(counts) % 2 == 0:
        counts[int(np.argmax(counts))] -= 1
        if sum(counts) == 0:
            counts[0] = 1
    return checks.check_replication_collapse(est, xs, counts, cfg)


def _certificate(est, rng, cfg):
    _psi_only(est, Property.SIGN_CHANGE_CERTIFICATE)
    n = int(rng.integers(1, 7))
    return checks.check_sign_change_certificate(est, _obs(est, rng, n), draw_weights(rng, n), cfg)


def sampled_function(rng: np.random.Generator, shape: str, size: int = 64) -> list[float]:
    """Sampled test function of the given shape on a grid of ``size`` points."""
    steps = rng.exponential(1.0, size=size - 1)
    if shape == "monotone":
        vals = np.concatenate([[0.0], np.cumsum(steps)])
    elif shape == "anti-monotone":
        vals = -np.concatenate([[0.0], np.cumsum(steps)])
    elif shape == "unimodal":
        peak = int(rng.integers(1, size - 1))
        signs = np.where(np.arange(size - 1) < peak, 1.0, -1.0)
        vals = np.concatenate([[0.0], np.cumsum(signs * steps)])
    elif shape == "random-walk":
        vals = np.concatenate([[0.0], np.cumsum(rng.normal(0.0, 1.0, size=size - 1))])
    else:
        raise DomainError(f"unknown shape {shape!r}")
    # occasional flat stretches exercise the non-strict comparisons
    if rng.random() < 0.3:
        i = int(rng.integers(0, size - 1))
        j = int(rng.integers(i + 1, size))
        vals[i:j] = vals[i]
    return [float(v) for v in vals]


SHAPES = ("monotone", "anti-monotone", "unimodal", "random-walk")


def _quasi_affine(est, rng, cfg):
    shape = SHAPES[int(rng.integers(0, len(SHAPES)))]
    return checks.check_quasi_affine_equivalence(sampled_function(rng, shape), 0.0)


def _sensitivity(est, rng, cfg):
    x, y = _obs(est, rng, 2)
    lo = checks.plain_value(est, [x], cfg)
    hi = checks.plain_value(est, [y], cfg)
    if lo > hi:
        x, y, lo, hi = y, x, hi, lo
    a, b = sorted(rng.uniform(0.05, 0.95, size=2))
    if b - a < 0.05:
        b = a + 0.05
    u, v = lo + (hi - lo) * a, lo + (hi - lo) * b
    return sensitivity_report(est, SensitivityQuery(x, y, u, v, 512), cfg)


TrialFn = Callable[[object, np.random.Generator, SolverConfig], PropertyReport]

SUITES: dict[Property, TrialFn] = {
    Property.MEAN_TYPE: _mean_type,
    Property.WEIGHT_LINE_MONOTONE: _weight_line,
    Property.BISYMMETRY: _bisymmetry,
    Property.BISYMMETRY_2X2: _bisymmetry_2x2,
    Property.REPLICATION_LIMIT: _replication,
    Property.WEIGHT_CONTINUITY: _continuity,
    Property.SENSITIVITY: _sensitivity,
    Property.NULL_HOMOGENEITY: _null_homogeneity,
    Property.PERMUTATION_INVARIANCE: _permutation,
    Property.QUASI_AFFINE_MONOTONE: _quasi_affine,
    Property.REPLICATION_COLLAPSE: _collapse,
    Property.SIGN_CHANGE_CERTIFICATE: _certificate,
}
# the strict variant is decided per trial inside the mean-type check
SUITES[Property.MEAN_TYPE_STRICT] = _mean_type

_ALIASES = {p.value.lower(): p for p in Property}
_ALIASES.update({p.value.lower().replace("2x2", "-2x2"): p for p in Property})
for _p in Property:
    kebab = "".join("-" + c.lower() if c.isupper() else c for c in _p.value).lstrip("-")
    _ALIASES[kebab] = _p


def property_from_name(name: str) -> Property:
    key = name.strip().lower().replace("_", "-")
    if key in _ALIASES:
        return _ALIASES[key]
    if key.replace("-", "") in _ALIASES:
        return _ALIASES[key.replace("-", "")]
    raise DomainError(f"unknown property {name!r}; expected one of {[p.value for p in Property]}")


def run_trial(prop: Property, est, seed: int, index: int, cfg: SolverConfig | None = None) -> PropertyReport:
    return SUITES[prop](est, trial_rng(seed, index), cfg or DEFAULT_CONFIG)


def run_suite(
    prop: Property | str,
    est,
    trials: int = 1000,
    seed: int | None = None,
    cfg: SolverConfig | None = None,
) -> PropertyReport:
    """Run ``trials`` seeded instances of one property and aggregate them.

    The aggregate is ``Violated`` if any trial is (carrying the first witness),
    else ``Inconclusive`` if any trial is, else ``Holds``.
    """
    if isinstance(prop, str):
        prop = property_from_name(prop)
    if trials < 1:
        raise DomainError("trials must be positive")
    seed = default_seed() if seed is None else int(seed)
    cfg = cfg or DEFAULT_CONFIG
    counts = {v: 0 for v in Verdict}
    first_witness = first_cause = None
    tol = 0.0
    strict = 0
    for i in range(trials):
        rep = run_trial(prop, est, seed, i, cfg)
        counts[rep.status] += 1
        tol = max(tol, rep.tolerance_used)
        if rep.property is Property.MEAN_TYPE_STRICT:
            strict += 1
        if rep.violated and first_witness is None:
            first_witness = {**rep.witness, "trial": i, "checked": rep.property.value}
        if rep.status is Verdict.INCONCLUSIVE and first_cause is None:
            first_cause = f"trial {i}: {rep.cause}"
    if counts[Verdict.VIOLATED]:
        status = Verdict.VIOLATED
    elif counts[Verdict.INCONCLUSIVE]:
        status = Verdict.INCONCLUSIVE
    else:
        status = Verdict.HOLDS
    details = {v.value: c for v, c in counts.items()}
    if prop in (Property.MEAN_TYPE, Property.MEAN_TYPE_STRICT):
        details["strict_trials"] = strict
    return PropertyReport(prop, status, trials, seed, tol, first_witness,
                          first_cause if status is not Verdict.HOLDS else None, details)
