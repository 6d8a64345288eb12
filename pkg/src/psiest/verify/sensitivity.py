"""Search for replication counts that pull an estimator into a target window."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..catalog import CompositeEstimator, ReferenceEstimator
from ..errors import DomainError, NonUniqueSignChange, SolverError
from ..solver import DEFAULT_CONFIG, PsiFunction, SolverConfig
from .checks import plain_value, weighted_value
from .report import Property, PropertyReport, Verdict

FOUND = "Found"
NOT_FOUND = "NotFoundUpToBound"


@dataclass(frozen=True)
class SensitivityQuery:
    x: float
    y: float
    u: float
    v: float
    max_total: int = 512

    def __post_init__(self):
        for name in ("x", "y", "u", "v"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if int(self.max_total) < 2:
            raise DomainError("max_total must be at least 2")
        object.__setattr__(self, "max_total", int(self.max_total))


@dataclass(frozen=True)
class SensitivityResult:
    status: str
    k: int | None = None
    m: int | None = None
    value: float | None = None
    max_total: int = 0
    evaluations: int = 0
    skipped: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND

    @property
    def pair(self) -> tuple[int, int] | None:
        return (self.k, self.m) if self.found else None


def validate_query(est, q: SensitivityQuery, cfg: SolverConfig | None = None) -> tuple[float, float]:
    """Reject queries that do not satisfy ``T(x) < u < v < T(y)``."""
    mx = plain_value(est, [q.x], cfg)
    my = plain_value(est, [q.y], cfg)
    if not (mx < q.u < q.v < my):
        raise DomainError(
            f"query needs T(x) < u < v < T(y); got T(x)={mx!r}, u={q.u!r}, v={q.v!r}, T(y)={my!r}"
        )
    return mx, my


def _psi_based(est) -> bool:
    return isinstance(est, (PsiFunction, CompositeEstimator))


def find_sensitivity_witness(est, q: SensitivityQuery, cfg: SolverConfig | None = None) -> SensitivityResult:
    """Smallest ``k + m`` (then smallest ``m``) with ``u < T(k copies of x, m copies of y) < v``.

    psi-based and composite estimators are evaluated with weights ``(k, m)``.
    Since their estimates are invariant under scaling the weights, pairs with a
    common factor repeat an earlier ratio and are skipped. Reference estimators
    are evaluated on the materialized tuple and every pair is tried. Pairs at
    which the estimator is not unique (possible when psi is not continuous in
    ``t``) have no value and are passed over.
    """
    cfg = cfg or DEFAULT_CONFIG
    validate_query(est, q, cfg)
    reduce = _psi_based(est)
    evals = skipped = 0
    for total in range(2, q.max_total + 1):
        for m in range(1, total):
            k = total - m
            if reduce and math.gcd(k, m) > 1:
                continue
            evals += 1
            try:
                val = weighted_value(est, [q.x, q.y], [float(k), float(m)], cfg)
            except NonUniqueSignChange:
                skipped += 1
                continue
            if q.u < val < q.v:
                return SensitivityResult(FOUND, k, m, val, q.max_total, evals, skipped)
    return SensitivityResult(NOT_FOUND, max_total=q.max_total, evaluations=evals, skipped=skipped)


def full_scan(est, q: SensitivityQuery, cfg: SolverConfig | None = None) -> list[tuple[int, int, float]]:
    """Every pair within the bound that lands in the window (no reduction, no early exit)."""
    cfg = cfg or DEFAULT_CONFIG
    hits = []
    for k in range(1, q.max_total):
        for m in range(1, q.max_total - k + 1):
            try:
                val = weighted_value(est, [q.x, q.y], [float(k), float(m)], cfg)
            except NonUniqueSignChange:
                continue
            if q.u < val < q.v:
                hits.append((k, m, val))
    return hits


def sensitivity_report(est, q: SensitivityQuery, cfg: SolverConfig | None = None) -> PropertyReport:
    """Report form: ``Holds`` when a witness exists, ``Violated`` when none does up to the bound."""
    cfg = cfg or DEFAULT_CONFIG
    inputs = {"x": q.x, "y": q.y, "u": q.u, "v": q.v, "max_total": q.max_total}
    try:
        res = find_sensitivity_witness(est, q, cfg)
    except SolverError as exc:
        return PropertyReport(Property.SENSITIVITY, Verdict.INCONCLUSIVE,
                              cause=f"{type(exc).__name__}: {exc}", details={"inputs": inputs})
    record = {"inputs": inputs, "result": res.status, "k": res.k, "m": res.m, "value": res.value}
    if res.found:
        return PropertyReport(Property.SENSITIVITY, Verdict.HOLDS, details=record)
    return PropertyReport(Property.SENSITIVITY, Verdict.VIOLATED, witness={**record, "margin": 0.0})
