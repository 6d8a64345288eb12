"""Single-instance checks of the structural properties of psi-estimators.

Every check takes an *estimator*: a :class:`~psiest.solver.PsiFunction`, a
:class:`~psiest.catalog.CompositeEstimator`, or a
:class:`~psiest.catalog.ReferenceEstimator`. Reference estimators only accept
integer weights, which are expanded into replicated tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..catalog import CompositeEstimator, ReferenceEstimator, composite_estimate_weighted
from ..domains import Interval
from ..errors import DomainError, InvalidProbe, PositivityViolation, SolverError
from ..solver import (
    DEFAULT_CONFIG,
    PsiFunction,
    SolverConfig,
    WeightedSample,
    estimate,
    estimate_materialized,
    estimate_replicated,
    estimate_weighted,
)
from .monotone import find_up_down
from .report import Property, PropertyReport, Verdict

# inequality tolerance, in units of bracket_tol * scale
INEQ_FACTOR = 10.0
# structural invariants (permutation, scaling, replication)
INVARIANT_FACTOR = 2.0
LINE_BOUND = 100.0
LINE_SHRINK = 1e-6 * LINE_BOUND
MAX_MATERIALIZED = 10**6
# up to ~1e9 copies, carried as a weight
DEFAULT_ELL_SCHEDULE = tuple(4**j for j in range(16))


# -- estimator adapter -------------------------------------------------------------


def weighted_value(est, xs: Sequence[float], weights: Sequence[float], cfg: SolverConfig | None = None) -> float:
    """Weighted estimate for any supported estimator kind."""
    if isinstance(est, PsiFunction):
        return estimate_weighted(est, WeightedSample(tuple(xs), tuple(weights)), cfg).theta_hat
    if isinstance(est, CompositeEstimator):
        return composite_estimate_weighted(est, WeightedSample(tuple(xs), tuple(weights)), cfg)
    if isinstance(est, ReferenceEstimator):
        counts = []
        for w in weights:
            if w < 0 or w != math.floor(w):
                raise DomainError(f"{est.kind} accepts integer weights only, got {w!r}")
            counts.append(int(w))
        total = sum(counts)
        if total == 0:
            raise DomainError("all weights are zero")
        if total > MAX_MATERIALIZED:
            raise DomainError(f"replicated tuple of length {total} is too long to materialize")
        tup: list[float] = []
        for x, k in zip(xs, counts):
            tup.extend([float(x)] * k)
        return float(est(tup))
    raise TypeError(f"unsupported estimator {est!r}")


def plain_value(est, xs: Sequence[float], cfg: SolverConfig | None = None) -> float:
    return weighted_value(est, xs, [1.0] * len(xs), cfg)


def observation_domain(est) -> Interval:
    return est.observation_domain


def is_z_type(est) -> bool:
    """Whether strict inequalities are provable for ``est``: psi continuous in t."""
    return isinstance(est, PsiFunction) and est.continuous_in_t


def _tol(cfg: SolverConfig, factor: float, *values: float) -> float:
    return factor * cfg.tolerance(*values)


def _inconclusive(prop: Property, exc: Exception, tol: float = 0.0, **details) -> PropertyReport:
    return PropertyReport(prop, Verdict.INCONCLUSIVE, tolerance_used=tol,
                          cause=f"{type(exc).__name__}: {exc}", details=details)


def _floats(seq) -> list:
    return [float(v) for v in seq]


# -- mean-type ---------------------------------------------------------------------


def check_mean_type(est, blocks: Sequence[Sequence[float]], cfg: SolverConfig | None = None) -> PropertyReport:
    """The estimate of a concatenation lies between the block estimates.

    For psi continuous in ``t`` the inequalities must also be strict (with
    margin above ``tol``) whenever the block estimates are not all equal.
    """
    cfg = cfg or DEFAULT_CONFIG
    blocks = [_floats(b) for b in blocks]
    if not blocks or any(len(b) == 0 for b in blocks):
        raise DomainError("every block must be nonempty")
    inputs = {"blocks": blocks}
    try:
        values = [plain_value(est, b, cfg) for b in blocks]
        concat = plain_value(est, [x for b in blocks for x in b], cfg)
    except SolverError as exc:
        return _inconclusive(Property.MEAN_TYPE, exc)
    lo, hi = min(values), max(values)
    tol = _tol(cfg, INEQ_FACTOR, lo, hi, concat)
    strict = is_z_type(est) and hi - lo > tol
    prop = Property.MEAN_TYPE_STRICT if strict else Property.MEAN_TYPE
    record = {"inputs": inputs, "block_values": values, "concat_value": concat}

    if concat < lo - tol:
        bound, margin = "lower", lo - concat
    elif concat > hi + tol:
        bound, margin = "upper", concat - hi
    elif strict and concat - lo <= tol:
        bound, margin = "strict-lower", tol - (concat - lo)
    elif strict and hi - concat <= tol:
        bound, margin = "strict-upper", tol - (hi - concat)
    else:
        return PropertyReport(prop, Verdict.HOLDS, tolerance_used=tol,
                              details={**record, "slack": min(concat - lo, hi - concat)})
    return PropertyReport(prop, Verdict.VIOLATED, tolerance_used=tol,
                          witness={**record, "bound": bound, "margin": margin})


# -- weight lines ----------------------------------------------------------------------


@dataclass(frozen=True)
class WeightLine:
    a: tuple
    b: tuple
    domain: Interval

    @classmethod
    def through(cls, a: Sequence[float], b: Sequence[float]) -> "WeightLine":
        return cls(tuple(_floats(a)), tuple(_floats(b)), weight_line_domain(a, b))

    def weights(self, s: float) -> list[float]:
        out = []
        for ai, bi in zip(self.a, self.b):
            w = s * ai + bi
            if w < 0:
                # exact arithmetic says w >= 0 on the domain; absorb rounding only
                if w < -1e-12 * (abs(s * ai) + abs(bi)):
                    raise InvalidProbe(f"s={s!r} leaves the nonnegative orthant")
                w = 0.0
            out.append(w)
        return out


def weight_line_domain(a: Sequence[float], b: Sequence[float]) -> Interval:
    """``{s : s*a + b`` nonnegative and not identically zero``}``, computed exactly."""
    if len(a) != len(b) or len(a) == 0:
        raise DomainError("a and b must have the same positive length")
    fa = [Fraction(float(v)) for v in a]
    fb = [Fraction(float(v)) for v in b]
    lo: Fraction | None = None
    hi: Fraction | None = None
    for ai, bi in zip(fa, fb):
        if ai > 0:
            c = -bi / ai
            lo = c if lo is None else max(lo, c)
        elif ai < 0:
            c = -bi / ai
            hi = c if hi is None else min(hi, c)
        elif bi < 0:
            return Interval.nothing()
    if lo is not None and hi is not None and lo > hi:
        return Interval.nothing()
    lo_closed = lo is not None
    hi_closed = hi is not None
    # remove the point (if any) where every coordinate vanishes
    if all(ai == 0 for ai in fa):
        if all(bi == 0 for bi in fb):
            return Interval.nothing()
    else:
        j = next(i for i, ai in enumerate(fa) if ai != 0)
        s0 = -fb[j] / fa[j]
        if all(s0 * ai + bi == 0 for ai, bi in zip(fa, fb)):
            if lo is not None and s0 == lo:
                lo_closed = False
            if hi is not None and s0 == hi:
                hi_closed = False
            if lo is not None and hi is not None and lo == hi:
                return Interval.nothing()
    return Interval(
        float(lo) if lo is not None else -math.inf,
        float(hi) if hi is not None else math.inf,
        lo_closed,
        hi_closed,
    )


def line_grid(domain: Interval, grid_size: int) -> list[float]:
    """Uniform grid on the bounded working part of a weight-line domain."""
    if domain.empty:
        raise DomainError("the weight line does not meet the admissible weights")
    lo, hi = domain.lo, domain.hi
    s0 = max(lo, -LINE_BOUND)
    s1 = min(hi, LINE_BOUND)
    if not domain.lo_closed or lo < -LINE_BOUND:
        s0 += LINE_SHRINK
    if not domain.hi_closed or hi > LINE_BOUND:
        s1 -= LINE_SHRINK
    if s0 >= s1:
        if lo == hi:
            return [lo]
        s0 = s1 = (max(lo, -LINE_BOUND) + min(hi, LINE_BOUND)) / 2
        return [s0]
    return [s0 + (s1 - s0) * k / (grid_size - 1) for k in range(grid_size)]


def weight_line_values(est, xs, line: WeightLine, grid_size: int, cfg: SolverConfig):
    grid = line_grid(line.domain, grid_size)
    return grid, [weighted_value(est, xs, line.weights(s), cfg) for s in grid]


def check_weight_line_monotone(
    est,
    xs: Sequence[float],
    a: Sequence[float],
    b: Sequence[float],
    grid_size: int = 33,
    cfg: SolverConfig | None = None,
) -> PropertyReport:
    """Estimates along ``s -> s*a + b`` show no up-then-down or down-then-up swing."""
    cfg = cfg or DEFAULT_CONFIG
    if grid_size < 3:
        raise DomainError("grid_size must be at least 3")
    xs = _floats(xs)
    line = WeightLine.through(a, b)
    inputs = {"xs": xs, "a": list(line.a), "b": list(line.b), "grid_size": grid_size}
    try:
        grid, values = weight_line_values(est, xs, line, grid_size, cfg)
    except SolverError as exc:
        return _inconclusive(Property.WEIGHT_LINE_MONOTONE, exc)
    tol = _tol(cfg, INEQ_FACTOR, *values)
    hit = find_up_down(values, tol)
    record = {"inputs": inputs, "grid": grid, "values": values}
    if hit is None:
        return PropertyReport(Property.WEIGHT_LINE_MONOTONE, Verdict.HOLDS, tolerance_used=tol, details=record)
    i, j, k = hit
    margin = min(abs(values[j] - values[i]), abs(values[j] - values[k]))
    witness = {**record, "pattern": [grid[i], grid[j], grid[k]],
               "pattern_values": [values[i], values[j], values[k]], "margin": margin}
    return PropertyReport(Property.WEIGHT_LINE_MONOTONE, Verdict.VIOLATED, tolerance_used=tol, witness=witness)


# -- bisymmetry ------------------------------------------------------------------------


def _check_grid(est, x_matrix, lambda_matrix, cfg, prop: Property, inputs: dict) -> PropertyReport:
    xm = [_floats(r) for r in x_matrix]
    lm = [_floats(r) for r in lambda_matrix]
    n = len(xm)
    m = len(xm[0]) if n else 0
    if n == 0 or m == 0 or any(len(r) != m for r in xm) or len(lm) != n or any(len(r) != m for r in lm):
        raise DomainError("x and lambda grids must both be n x m with n, m >= 1")
    if any(w < 0 or not math.isfinite(w) for r in lm for w in r):
        raise DomainError("grid weights must be finite and nonnegative")
    bad_rows = [i for i in range(n) if sum(lm[i]) <= 0]
    bad_cols = [j for j in range(m) if sum(lm[i][j] for i in range(n)) <= 0]
    if bad_rows or bad_cols:
        raise PositivityViolation(f"zero weight sum in rows {bad_rows} / columns {bad_cols}")
    try:
        rows = [weighted_value(est, xm[i], lm[i], cfg) for i in range(n)]
        cols = [weighted_value(est, [xm[i][j] for i in range(n)], [lm[i][j] for i in range(n)], cfg)
                for j in range(m)]
    except SolverError as exc:
        return _inconclusive(prop, exc)
    low, high = min(rows), max(cols)
    tol = _tol(cfg, INEQ_FACTOR, *rows, *cols)
    record = {"inputs": inputs, "row_values": rows, "column_values": cols,
              "min_row": low, "max_column": high, "margin": low - high}
    if low <= high + tol:
        return PropertyReport(prop, Verdict.HOLDS, tolerance_used=tol, details=record)
    return PropertyReport(prop, Verdict.VIOLATED, tolerance_used=tol, witness=record)


def check_bisymmetry(est, x_matrix, lambda_matrix=None, cfg: SolverConfig | None = None) -> PropertyReport:
    """min over weighted row estimates <= max over weighted column estimates.

    ``lambda_matrix`` defaults to all ones (the unweighted inequality).
    """
    cfg = cfg or DEFAULT_CONFIG
    if lambda_matrix is None:
        lambda_matrix = [[1.0] * len(r) for r in x_matrix]
    inputs = {"x_matrix": [_floats(r) for r in x_matrix],
              "lambda_matrix": [_floats(r) for r in lambda_matrix]}
    return _check_grid(est, x_matrix, lambda_matrix, cfg, Property.BISYMMETRY, inputs)


def check_bisymmetry_2x2(est, x, y, u, v, alpha, beta, gamma, delta, cfg: SolverConfig | None = None) -> PropertyReport:
    """``min(T(a,b)(x,y), T(c,d)(u,v)) <= max(T(a,c)(x,u), T(b,d)(y,v))``."""
    cfg = cfg or DEFAULT_CONFIG
    sums = {"alpha+beta": alpha + beta, "gamma+delta": gamma + delta,
            "alpha+gamma": alpha + gamma, "beta+delta": beta + delta}
    bad = [k for k, s in sums.items() if not s > 0]
    if bad or min(alpha, beta, gamma, delta) < 0:
        raise PositivityViolation(f"weights must be nonnegative with positive {', '.join(bad) or 'sums'}")
    inputs = {"x": float(x), "y": float(y), "u": float(u), "v": float(v),
              "alpha": float(alpha), "beta": float(beta), "gamma": float(gamma), "delta": float(delta)}
    return _check_grid(est, [[x, y], [u, v]], [[alpha, beta], [gamma, delta]], cfg,
                       Property.BISYMMETRY_2X2, inputs)


# -- replication limit ------------------------------------------------------------------


def replication_errors(est, y_block, z_block, ell_schedule, cfg: SolverConfig) -> tuple[float, list[float]]:
    ys, zs = _floats(y_block), _floats(z_block)
    base = plain_value(est, ys, cfg)
    errs = []
    for ell in ell_schedule:
        v = weighted_value(est, ys + zs, [float(ell)] * len(ys) + [1.0] * len(zs), cfg)
        errs.append(abs(v - base))
    return base, errs


def check_replication_limit(
    est,
    y_block: Sequence[float],
    z_block: Sequence[float],
    ell_schedule: Sequence[int] = DEFAULT_ELL_SCHEDULE,
    cfg: SolverConfig | None = None,
    tol_limit: float | None = None,
) -> PropertyReport:
    """``|T(l copies of y, z) - T(y)|`` shrinks along the schedule and ends below ``tol_limit``.

    The replicated tuple is never built for psi-based estimators; ``l`` enters
    as a weight on the ``y`` block.
    """
    cfg = cfg or DEFAULT_CONFIG
    if len(y_block) == 0:
        raise DomainError("y_block must be nonempty")
    sched = [int(e) for e in ell_schedule]
    if not sched or any(e < 1 for e in sched) or any(b <= a for a, b in zip(sched, sched[1:])):
        raise DomainError("ell_schedule must be increasing positive integers")
    inputs = {"y_block": _floats(y_block), "z_block": _floats(z_block), "ell_schedule": sched}
    try:
        base, errs = replication_errors(est, y_block, z_block, sched, cfg)
    except SolverError as exc:
        return _inconclusive(Property.REPLICATION_LIMIT, exc)
    limit = 1e-6 * cfg.scale(base) if tol_limit is None else tol_limit
    tol = _tol(cfg, INEQ_FACTOR, base)
    head, tail = max(errs[:3]), max(errs[-3:])
    record = {"inputs": inputs, "base_value": base, "errors": errs, "limit": limit}
    if errs[-1] <= limit and tail <= head + tol:
        return PropertyReport(Property.REPLICATION_LIMIT, Verdict.HOLDS, tolerance_used=limit, details=record)
    margin = max(errs[-1] - limit, tail - head - tol)
    return PropertyReport(Property.REPLICATION_LIMIT, Verdict.VIOLATED, tolerance_used=limit,
                          witness={**record, "margin": margin})


# -- continuity in the weights ---------------------------------------------------------


def check_weight_continuity(
    est,
    xs: Sequence[float],
    lambda0: Sequence[float],
    radius: float = 0.1,
    probes: int = 8,
    cfg: SolverConfig | None = None,
    seed: int = 42,
    eps_cont: float | None = None,
    max_halvings: int = 40,
) -> PropertyReport:
    """Empirical continuity of the weights-to-estimate map at ``lambda0``.

    Probe directions are drawn once from ``seed`` and scaled by the radii
    ``radius * 2**-j``. The largest deviation must not grow as the radius
    halves and must drop below ``eps_cont`` (after at least three radii).
    Deviations that shrink but never reach ``eps_cont`` within
    ``max_halvings`` give ``Inconclusive``; so does any failure for an
    estimator whose continuity is not covered by theory (psi not
    continuous in t, or a reference estimator).
    """
    cfg = cfg or DEFAULT_CONFIG
    xs = _floats(xs)
    lam0 = _floats(lambda0)
    if not radius > 0 or probes < 1:
        raise DomainError("radius must be positive and probes >= 1")
    inputs = {"xs": xs, "lambda0": lam0, "radius": float(radius), "probes": probes, "seed": seed}
    prop = Property.WEIGHT_CONTINUITY
    rng = np.random.default_rng(seed)
    dirs = rng.uniform(-1.0, 1.0, size=(probes, len(lam0)))
    try:
        center = weighted_value(est, xs, lam0, cfg)
    except SolverError as exc:
        return _inconclusive(prop, exc)
    eps = 1e-4 * cfg.scale(center) if eps_cont is None else eps_cont
    tol = _tol(cfg, INEQ_FACTOR, center)
    radii, devs = [], []
    failure = None
    for j in range(max_halvings + 1):
        r = radius * 2.0**-j
        worst = 0.0
        for d in dirs:
            lam = [max(0.0, l + r * di) for l, di in zip(lam0, d)]
            if not any(lam):
                raise InvalidProbe(f"probe at radius {r!r} has all weights zero")
            try:
                val = weighted_value(est, xs, lam, cfg)
            except SolverError as exc:
                return _inconclusive(prop, exc, tol, radii=radii, deviations=devs)
            worst = max(worst, abs(val - center))
        radii.append(r)
        devs.append(worst)
        if j > 0 and worst > devs[-2] + tol:
            failure = "deviation grew when the radius was halved"
            break
        if j >= 2 and worst < eps:
            break
    record = {"inputs": inputs, "center_value": center, "radii": radii, "deviations": devs, "eps_cont": eps}
    if failure is None and devs[-1] < eps and len(devs) >= 3:
        return PropertyReport(prop, Verdict.HOLDS, tolerance_used=eps, details=record)
    if failure is None:
        failure = "deviation shrinks but stays above eps_cont"
        return PropertyReport(prop, Verdict.INCONCLUSIVE, tolerance_used=eps, cause=failure, details=record)
    if not is_z_type(est):
        return PropertyReport(prop, Verdict.INCONCLUSIVE, tolerance_used=eps,
                              cause=f"{failure}; continuity in the weights is not established "
                                    "for this estimator", details=record)
    margin = devs[-1] - devs[-2]
    return PropertyReport(prop, Verdict.VIOLATED, tolerance_used=eps,
                          witness={**record, "reason": failure, "margin": margin})


# -- structural invariants ---------------------------------------------------------------


def _invariant_report(prop, a, b, cfg, inputs, factor=INVARIANT_FACTOR) -> PropertyReport:
    tol = _tol(cfg, factor, a, b)
    record = {"inputs": inputs, "values": [a, b], "margin": abs(a - b)}
    if abs(a - b) <= tol:
        return PropertyReport(prop, Verdict.HOLDS, tolerance_used=tol, details=record)
    return PropertyReport(prop, Verdict.VIOLATED, tolerance_used=tol, witness=record)


def check_null_homogeneity(est, xs, weights, factor: float, cfg: SolverConfig | None = None) -> PropertyReport:
    cfg = cfg or DEFAULT_CONFIG
    if not factor > 0:
        raise DomainError("scaling factor must be positive")
    xs, ws = _floats(xs), _floats(weights)
    inputs = {"xs": xs, "weights": ws, "factor": float(factor)}
    try:
        a = weighted_value(est, xs, ws, cfg)
        b = weighted_value(est, xs, [factor * w for w in ws], cfg)
    except SolverError as exc:
        return _inconclusive(Property.NULL_HOMOGENEITY, exc)
    return _invariant_report(Property.NULL_HOMOGENEITY, a, b, cfg, inputs)


def check_permutation_invariance(est, xs, perm: Sequence[int], cfg: SolverConfig | None = None) -> PropertyReport:
    cfg = cfg or DEFAULT_CONFIG
    xs = _floats(xs)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(len(xs))):
        raise DomainError("perm must be a permutation of range(len(xs))")
    inputs = {"xs": xs, "perm": perm}
    try:
        a = plain_value(est, xs, cfg)
        b = plain_value(est, [xs[p] for p in perm], cfg)
    except SolverError as exc:
        return _inconclusive(Property.PERMUTATION_INVARIANCE, exc)
    return _invariant_report(Property.PERMUTATION_INVARIANCE, a, b, cfg, inputs)


def check_replication_collapse(psi: PsiFunction, xs, counts, cfg: SolverConfig | None = None) -> PropertyReport:
    """Integer weights agree with the explicitly replicated tuple."""
    cfg = cfg or DEFAULT_CONFIG
    xs = _floats(xs)
    counts = [int(c) for c in counts]
    inputs = {"xs": xs, "counts": counts}
    try:
        a = estimate_replicated(psi, xs, counts, cfg).theta_hat
        b = estimate_materialized(psi, xs, counts, cfg).theta_hat
    except SolverError as exc:
        return _inconclusive(Property.REPLICATION_COLLAPSE, exc)
    return _invariant_report(Property.REPLICATION_COLLAPSE, a, b, cfg, inputs)


def check_sign_change_certificate(psi: PsiFunction, xs, weights, cfg: SolverConfig | None = None) -> PropertyReport:
    """The weighted sum is >= 0 just below and <= 0 just above the estimate."""
    cfg = cfg or DEFAULT_CONFIG
    xs, ws = _floats(xs), _floats(weights)
    inputs = {"xs": xs, "weights": ws}
    sample = WeightedSample(tuple(xs), tuple(ws))
    try:
        res = estimate_weighted(psi, sample, cfg)
    except SolverError as exc:
        return _inconclusive(Property.SIGN_CHANGE_CERTIFICATE, exc)
    from ..solver import weighted_sum

    th = res.theta_hat
    off = INEQ_FACTOR * cfg.tolerance(th)
    left, right = th - off, th + off
    fl = weighted_sum(psi, sample, left) if left in psi.theta else None
    fr = weighted_sum(psi, sample, right) if right in psi.theta else None
    record = {"inputs": inputs, "theta_hat": th, "probes": [left, right], "probe_values": [fl, fr],
              "status": res.status.value}
    bad = []
    if fl is not None and fl < -cfg.zero_tol:
        bad.append(-cfg.zero_tol - fl)
    if fr is not None and fr > cfg.zero_tol:
        bad.append(fr - cfg.zero_tol)
    if not bad:
        return PropertyReport(Property.SIGN_CHANGE_CERTIFICATE, Verdict.HOLDS, tolerance_used=cfg.zero_tol,
                              details=record)
    return PropertyReport(Property.SIGN_CHANGE_CERTIFICATE, Verdict.VIOLATED, tolerance_used=cfg.zero_tol,
                          witness={**record, "margin": max(bad)})


def check_quasi_affine_equivalence(values: Sequence[float], tol: float = 0.0) -> PropertyReport:
    """The up-down test and the sampled quasi-affinity test agree on ``values``."""
    from .monotone import is_quasi_affine_sequence

    vals = _floats(values)
    mono = find_up_down(vals, tol) is None
    qa = is_quasi_affine_sequence(vals, tol)
    record = {"inputs": {"values": vals, "tol": float(tol)}, "monotone": mono, "quasi_affine": qa}
    if mono == qa:
        return PropertyReport(Property.QUASI_AFFINE_MONOTONE, Verdict.HOLDS, tolerance_used=tol, details=record)
    return PropertyReport(Property.QUASI_AFFINE_MONOTONE, Verdict.VIOLATED, tolerance_used=tol,
                          witness={**record, "margin": 0.0})


def single_estimate(est, xs, cfg=None) -> float:
    """Unweighted estimate for any estimator kind."""
    if isinstance(est, PsiFunction):
        return estimate(est, xs, cfg).theta_hat
    return plain_value(est, xs, cfg)


# -- replay ------------------------------------------------------------------------


def _replay_2x2(est, inp, cfg):
    keys = ("x", "y", "u", "v", "alpha", "beta", "gamma", "delta")
    return check_bisymmetry_2x2(est, *(inp[k] for k in keys), cfg=cfg)


_REPLAY = {
    Property.MEAN_TYPE: lambda est, i, cfg: check_mean_type(est, i["blocks"], cfg),
    Property.MEAN_TYPE_STRICT: lambda est, i, cfg: check_mean_type(est, i["blocks"], cfg),
    Property.WEIGHT_LINE_MONOTONE: lambda est, i, cfg: check_weight_line_monotone(
        est, i["xs"], i["a"], i["b"], int(i["grid_size"]), cfg),
    Property.BISYMMETRY: lambda est, i, cfg: check_bisymmetry(est, i["x_matrix"], i["lambda_matrix"], cfg),
    Property.BISYMMETRY_2X2: _replay_2x2,
    Property.REPLICATION_LIMIT: lambda est, i, cfg: check_replication_limit(
        est, i["y_block"], i["z_block"], [int(e) for e in i["ell_schedule"]], cfg),
    Property.WEIGHT_CONTINUITY: lambda est, i, cfg: check_weight_continuity(
        est, i["xs"], i["lambda0"], i["radius"], int(i["probes"]), cfg, seed=int(i["seed"])),
    Property.NULL_HOMOGENEITY: lambda est, i, cfg: check_null_homogeneity(
        est, i["xs"], i["weights"], i["factor"], cfg),
    Property.PERMUTATION_INVARIANCE: lambda est, i, cfg: check_permutation_invariance(
        est, i["xs"], [int(p) for p in i["perm"]], cfg),
    Property.REPLICATION_COLLAPSE: lambda est, i, cfg: check_replication_collapse(
        est, i["xs"], [int(c) for c in i["counts"]], cfg),
    Property.SIGN_CHANGE_CERTIFICATE: lambda est, i, cfg: check_sign_change_certificate(
        est, i["xs"], i["weights"], cfg),
    Property.QUASI_AFFINE_MONOTONE: lambda est, i, cfg: check_quasi_affine_equivalence(i["values"], i["tol"]),
}


def replay(report_or_witness, est, cfg: SolverConfig | None = None, prop: Property | None = None) -> PropertyReport:
    """Re-run the single instance recorded in a witness.

    Accepts a :class:`PropertyReport`, its ``to_dict()`` form (decimal-string
    witness) or a bare witness with ``inputs``; a bare witness also needs
    ``prop`` unless it came from a suite (which records ``checked``).
    """
    from .report import from_decimal_strings

    cfg = cfg or DEFAULT_CONFIG
    if isinstance(report_or_witness, PropertyReport):
        witness = report_or_witness.witness
        prop = report_or_witness.property
    elif "witness" in report_or_witness:
        witness = from_decimal_strings(report_or_witness["witness"])
        prop = Property(report_or_witness["property"])
    else:
        witness = report_or_witness
    if witness is None:
        raise DomainError("report has no witness to replay")
    if "checked" in witness:
        prop = Property(witness["checked"])
    if prop is None:
        raise DomainError("cannot tell which property the witness belongs to")
    if prop is Property.SENSITIVITY:
        from .sensitivity import SensitivityQuery, sensitivity_report

        i = witness["inputs"]
        return sensitivity_report(est, SensitivityQuery(i["x"], i["y"], i["u"], i["v"], int(i["max_total"])), cfg)
    return _REPLAY[prop](est, witness["inputs"], cfg)
