"""Locate the point of sign change of ``t -> sum_i w_i * psi(x_i, t)``.

The estimator is defined purely through sign structure: ``f(t) > 0`` below
the estimate and ``f(t) < 0`` above it. The solver therefore never uses
derivatives or interpolation; it searches for a positive/negative bracket on
the open parameter interval and then bisects on the sign of ``f``.
"""
from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .domains import REALS, Interval, ParameterDomain
from .errors import (
    DomainError,
    MaxIterations,
    NonUniqueSignChange,
    NoSignChange,
    ZeroWeightVector,
)

# probe offset used by the exact-zero midpoint rule
ZERO_PROBE_REL = 2.0**-26
PLATEAU_FACTOR = 4.0


@dataclass(frozen=True)
class PsiFunction:
    """A map ``psi(x, t)`` with declared observation and parameter domains."""

    eval: Callable[[float, float], float]
    theta: ParameterDomain = field(default_factory=ParameterDomain)
    observation_domain: Interval = REALS
    continuous_in_t: bool = True
    name: str = "psi"

    def __call__(self, x: float, t: float) -> float:
        return self.eval(x, t)

    def __repr__(self) -> str:
        return f"PsiFunction({self.name}, theta={self.theta}, X={self.observation_domain})"


@dataclass(frozen=True)
class WeightedSample:
    """Observations paired with nonnegative weights, not all zero."""

    xs: tuple
    weights: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ws = tuple(float(w) for w in self.weights)
        if len(xs) == 0:
            raise DomainError("a sample needs at least one observation")
        if len(xs) != len(ws):
            raise DomainError(f"{len(xs)} observations but {len(ws)} weights")
        bad = [i for i, w in enumerate(ws) if not (math.isfinite(w) and w >= 0.0)]
        if bad:
            raise DomainError(f"weights must be finite and nonnegative (indices {bad})")
        if not any(ws):
            raise ZeroWeightVector("all weights are zero")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def unit(cls, xs: Sequence[float]) -> "WeightedSample":
        return cls(tuple(xs), (1.0,) * len(xs))

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.weights))

    def check_observations(self, domain: Interval) -> None:
        bad = [(i, x) for i, x in enumerate(self.xs) if x not in domain]
        if bad:
            listing = ", ".join(f"x[{i}]={x!r}" for i, x in bad)
            raise DomainError(f"observations outside {domain}: {listing}")


class Status(str, enum.Enum):
    SIGN_CHANGE = "SignChange"
    ZERO_POINT = "ZeroPoint"


@dataclass(frozen=True)
class EstimateResult:
    theta_hat: float
    residual: float
    bracket: tuple[float, float]
    iterations: int
    is_zero_point: bool
    status: Status
    evaluations: int = 0


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and limits for :func:`find_sign_change`.

    ``bracket_tol`` is relative to ``max(1, |a|, |b|)`` of the current
    bracket ``[a, b]``. Once that width is met, bisection continues until the
    width is below ``bracket_tol`` itself, the bracket cannot be split in
    floating point, or ``max_iterations`` is used up.
    """

    bracket_tol: float = 1e-12
    zero_tol: float = 1e-9
    max_iterations: int = 200
    max_expansions: int = 128
    initial_guess: float | None = None

    def __post_init__(self):
        if not (self.bracket_tol > 0 and self.zero_tol > 0):
            raise DomainError("solver tolerances must be positive")
        if self.max_iterations < 1 or self.max_expansions < 1:
            raise DomainError("max_iterations and max_expansions must be at least 1")

    def scale(self, *values: float) -> float:
        return max(1.0, *(abs(v) for v in values))

    def tolerance(self, *values: float) -> float:
        """Absolute width corresponding to ``bracket_tol`` near ``values``."""
        return self.bracket_tol * self.scale(*values)


DEFAULT_CONFIG = SolverConfig()


def _summed(psi: PsiFunction, xs: Sequence[float], ws: Sequence[float]) -> Callable[[float], float]:
    # zero weights contribute exactly nothing; skipping them also avoids evaluations
    pairs = [(x, w) for x, w in zip(xs, ws) if w != 0.0]
    ev = psi.eval

    def f(t: float) -> float:
        try:
            s = math.fsum([w * ev(x, t) for x, w in pairs])
        except (OverflowError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"{psi.name}: weighted sum not finite at t={t!r}") from exc
        if s != s:
            raise DomainError(f"{psi.name}: weighted sum is NaN at t={t!r}")
        return s

    return f


def weighted_sum(psi: PsiFunction, sample: WeightedSample, t: float) -> float:
    """Return ``sum_i w_i * psi(x_i, t)`` with exactly rounded summation."""
    if t not in psi.theta:
        raise DomainError(f"t={t!r} is not inside the open interval {psi.theta}")
    sample.check_observations(psi.observation_domain)
    return _summed(psi, sample.xs, sample.weights)(t)


class _SignSearch:
    def __init__(self, f: Callable[[float], float], domain: ParameterDomain, cfg: SolverConfig):
        self.f = f
        self.domain = domain
        self.cfg = cfg
        self.evaluations = 0
        self.zlo = math.inf
        self.zhi = -math.inf

    def value(self, t: float) -> float:
        v = self.f(t)
        self.evaluations += 1
        if v == 0.0:
            self._note_zero(t)
        return v

    def _note_zero(self, t: float) -> None:
        self.zlo = min(self.zlo, t)
        self.zhi = max(self.zhi, t)
        lo, hi = self.zlo, self.zhi
        if hi - lo <= PLATEAU_FACTOR * self.cfg.tolerance(lo, hi):
            return
        mid = lo + (hi - lo) / 2
        self.evaluations += 1
        if self.f(mid) == 0.0:
            raise NonUniqueSignChange(
                f"aggregated map vanishes on [{lo!r}, {hi!r}] (ends and midpoint); "
                "the estimator is not unique for this sample"
            )
        raise NoSignChange(
            f"aggregated map vanishes at separated points {lo!r} and {hi!r}; "
            "it has no point of sign change of decreasing type"
        )

    def steps(self, r: float, end: float) -> Iterator[float]:
        lo, hi = self.domain.lo, self.domain.hi
        prev = r
        if math.isinf(end):
            direction = 1.0 if end > 0 else -1.0
            d = max(1.0, abs(r))
            for _ in range(self.cfg.max_expansions):
                t = r + direction * d
                if math.isinf(t):
                    return
                if t != prev:
                    yield t
                    prev = t
                d *= 2.0
        else:
            gap = end - r
            for k in range(1, self.cfg.max_expansions + 1):
                t = end - gap * 2.0**-k
                if not lo < t < hi or t == prev:
                    return
                yield t
                prev = t


def find_sign_change(
    f: Callable[[float], float],
    domain: ParameterDomain,
    cfg: SolverConfig | None = None,
) -> EstimateResult:
    """Locate the point of sign change (of decreasing type) of ``f`` on ``domain``.

    Raises
    ------
    NoSignChange
        If no ``t+ < t-`` with ``f(t+) > 0 > f(t-)`` is found within
        ``max_expansions`` steps toward each end.
    NonUniqueSignChange
        If ``f`` vanishes at both ends and the midpoint of an interval wider
        than ``4 * bracket_tol * scale``.
    MaxIterations
        If the bracket is still too wide after ``max_iterations`` bisections.
    """
    cfg = cfg or DEFAULT_CONFIG
    s = _SignSearch(f, domain, cfg)

    r = domain.reference_point() if cfg.initial_guess is None else float(cfg.initial_guess)
    if r not in domain:
        raise DomainError(f"initial guess {r!r} is not inside {domain}")

    fr = s.value(r)
    a = r if fr > 0 else None
    b = r if fr < 0 else None
    if b is None:
        for t in s.steps(r, domain.hi):
            ft = s.value(t)
            if ft > 0:
                a = t
            elif ft < 0:
                b = t
                break
        if b is None:
            raise NoSignChange(f"no negative value found above {r!r} on {domain}")
    if a is None:
        for t in s.steps(r, domain.lo):
            ft = s.value(t)
            if ft < 0:
                b = t
            elif ft > 0:
                a = t
                break
        if a is None:
            raise NoSignChange(f"no positive value found below {r!r} on {domain}")

    iterations = 0
    while True:
        width = b - a
        # relative width is required; then refine cheaply toward the absolute width
        if width <= cfg.tolerance(a, b) and (width <= cfg.bracket_tol or iterations >= cfg.max_iterations):
            break
        mid = a + width / 2
        if not a < mid < b:
            break
        if iterations >= cfg.max_iterations:
            raise MaxIterations(
                f"bracket [{a!r}, {b!r}] still wider than tolerance after {iterations} bisections"
            )
        iterations += 1
        fm = s.value(mid)
        if fm > 0:
            a = mid
        elif fm < 0:
            b = mid
        else:
            delta = max(cfg.bracket_tol, ZERO_PROBE_REL * cfg.scale(a, b))
            pl = max(mid - delta, a + (mid - a) / 2)
            pr = min(mid + delta, mid + (b - mid) / 2)
            fl = s.value(pl)
            fpr = s.value(pr)
            if fl >= 0 and fpr <= 0:
                # any zero at a probe passed the plateau check, so the zero set is a point
                return EstimateResult(mid, 0.0, (mid, mid), iterations, True,
                                      Status.ZERO_POINT, s.evaluations)
            if fl < 0:
                b = pl
            else:
                a = pr

    theta = a + (b - a) / 2
    res = s.f(theta)
    s.evaluations += 1
    # tolerance met; keep bisecting while the residual is not yet negligible
    while abs(res) > cfg.zero_tol and iterations < cfg.max_iterations:
        if res > 0:
            a = theta
        else:
            b = theta
        mid = a + (b - a) / 2
        if not a < mid < b:
            break
        iterations += 1
        theta = mid
        res = s.f(theta)
        s.evaluations += 1

    zero = abs(res) <= cfg.zero_tol
    return EstimateResult(
        theta_hat=theta,
        residual=res,
        bracket=(a, b),
        iterations=iterations,
        is_zero_point=zero,
        status=Status.ZERO_POINT if zero else Status.SIGN_CHANGE,
        evaluations=s.evaluations,
    )


def estimate_weighted(
    psi: PsiFunction, sample: WeightedSample, cfg: SolverConfig | None = None
) -> EstimateResult:
    """Weighted generalized estimator: the sign-change point of the weighted sum."""
    sample.check_observations(psi.observation_domain)
    return find_sign_change(_summed(psi, sample.xs, sample.weights), psi.theta, cfg)


def estimate(psi: PsiFunction, xs: Sequence[float], cfg: SolverConfig | None = None) -> EstimateResult:
    return estimate_weighted(psi, WeightedSample.unit(xs), cfg)


def _check_counts(xs: Sequence[float], counts: Sequence[int]) -> tuple[int, ...]:
    if len(counts) != len(xs):
        raise DomainError(f"{len(xs)} observations but {len(counts)} counts")
    out = []
    for c in counts:
        if isinstance(c, bool) or not isinstance(c, numbers.Integral) or c < 0:
            raise DomainError(f"replication counts must be nonnegative integers, got {c!r}")
        out.append(int(c))
    if sum(out) == 0:
        raise ZeroWeightVector("all replication counts are zero")
    return tuple(out)


def materialize(xs: Sequence[float], counts: Sequence[int]) -> tuple[float, ...]:
    """The tuple ``(k_1 copies of x_1, ..., k_n copies of x_n)``."""
    counts = _check_counts(xs, counts)
    out: list[float] = []
    for x, k in zip(xs, counts):
        out.extend([float(x)] * k)
    return tuple(out)


def estimate_replicated(
    psi: PsiFunction, xs: Sequence[float], counts: Sequence[int], cfg: SolverConfig | None = None
) -> EstimateResult:
    """Estimator of the replicated tuple, computed with integer weights (no copies made)."""
    counts = _check_counts(xs, counts)
    return estimate_weighted(psi, WeightedSample(tuple(xs), tuple(float(k) for k in counts)), cfg)


def estimate_materialized(
    psi: PsiFunction, xs: Sequence[float], counts: Sequence[int], cfg: SolverConfig | None = None
) -> EstimateResult:
    """Same estimator as :func:`estimate_replicated`, on the explicitly built tuple."""
    return estimate(psi, materialize(xs, counts), cfg)
