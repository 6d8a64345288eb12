"""Concrete psi families, closed-form weighted estimators and reference estimators.

Family descriptors accepted by :func:`parse_family`::

    normal(sigma=1)
    alpha-density
    sign
    sqrt-mean
    quasi-arith(f="ln(x)", domain=(0, inf), finv="exp(x)")
    expr(psi="x - t", theta=(-inf, inf), x-domain=(-inf, inf))
    kappa | max | mid-range          (reference estimators, not psi based)
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import expr as _expr
from .domains import INF, POSITIVE, REALS, UNIT_OPEN, Interval, ParameterDomain
from .errors import DomainError
from .solver import (
    PsiFunction,
    SolverConfig,
    WeightedSample,
    estimate_weighted,
)

# -- psi families ---------------------------------------------------------------


def normal_location(sigma: float = 1.0) -> PsiFunction:
    """Score of the normal location model with known ``sigma``."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    inv = 1.0 / (sigma * sigma)
    return PsiFunction(
        lambda x, t: (x - t) * inv,
        ParameterDomain(),
        REALS,
        True,
        f"normal(sigma={sigma!r})",
    )


def _alpha_eval(x: float, t: float) -> float:
    return 1.0 / t + math.log1p(-x * x)


def alpha_density() -> PsiFunction:
    """Score for the shape of the density ``2 a x (1 - x^2)^(a - 1)`` on (0, 1)."""
    return PsiFunction(_alpha_eval, ParameterDomain(0.0, INF), UNIT_OPEN, True, "alpha-density")


def _sign_eval(x: float, t: float) -> float:
    d = x - t
    return (d > 0) - (d < 0) + 0.0


def sign_location() -> PsiFunction:
    # sign(0) = 0
    return PsiFunction(_sign_eval, ParameterDomain(), REALS, False, "sign")


@dataclass(frozen=True)
class QuasiArithmetic:
    """Generator ``f`` of the quasi-arithmetic mean ``f^-1(sum w f(x) / sum w)``.

    ``f`` must be strictly monotone on ``domain``; its orientation is probed at
    construction. ``inverse`` is optional; without it the closed form inverts
    ``f`` by bisection.
    """

    f: Callable[[float], float]
    domain: Interval = POSITIVE
    inverse: Callable[[float], float] | None = None
    label: str = "f"
    increasing: bool = field(init=False)

    def __post_init__(self):
        grid = _probe_grid(self.domain)
        vals = [self.f(g) for g in grid]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        if all(d > 0 for d in diffs):
            inc = True
        elif all(d < 0 for d in diffs):
            inc = False
        else:
            raise DomainError(f"generator {self.label} is not strictly monotone on {self.domain}")
        object.__setattr__(self, "increasing", inc)

    def psi(self) -> PsiFunction:
        f, sgn = self.f, (1.0 if self.increasing else -1.0)
        theta = ParameterDomain(self.domain.lo, self.domain.hi)
        return PsiFunction(
            lambda x, t: sgn * (f(x) - f(t)),
            theta,
            Interval(self.domain.lo, self.domain.hi),
            True,
            f"quasi-arith({self.label})",
        )

    def invert(self, target: float) -> float:
        if self.inverse is not None:
            return float(self.inverse(target))
        return _monotone_inverse(self.f, target, self.domain, self.increasing)


def _probe_grid(domain: Interval, n: int = 17) -> list[float]:
    lo, hi = domain.lo, domain.hi
    if math.isfinite(lo) and math.isfinite(hi):
        w = hi - lo
        return [lo + w * (k + 1) / (n + 1) for k in range(n)]
    if math.isfinite(lo):
        return [lo + 2.0 ** (k - n // 2) for k in range(n)]
    if math.isfinite(hi):
        return [hi - 2.0 ** (n // 2 - k) for k in range(n)]
    return [math.copysign(2.0 ** abs(k), k) if k else 0.0 for k in range(-(n // 2), n // 2 + 1)]


def _monotone_inverse(f, target: float, domain: Interval, increasing: bool) -> float:
    """Solve ``f(t) = target`` for strictly monotone ``f`` on an open interval.

    Deliberately independent of the sign-change solver: it serves as an oracle.
    """
    g = (lambda t: f(t) - target) if increasing else (lambda t: target - f(t))
    lo_b, hi_b = domain.lo, domain.hi
    # find lo < a < b < hi with g(a) <= 0 <= g(b)
    start = _probe_grid(domain, 1)[0]
    a = b = start
    step = 1.0
    for _ in range(2000):
        if g(a) <= 0:
            break
        a = lo_b + (a - lo_b) / 2 if math.isfinite(lo_b) else a - step
        step *= 2
    else:
        raise DomainError(f"value {target!r} is below the range of the generator")
    step = 1.0
    for _ in range(2000):
        if g(b) >= 0:
            break
        b = hi_b - (hi_b - b) / 2 if math.isfinite(hi_b) else b + step
        step *= 2
    else:
        raise DomainError(f"value {target!r} is above the range of the generator")
    while True:
        m = a + (b - a) / 2
        if not a < m < b:
            return m
        if g(m) <= 0:
            a = m
        else:
            b = m


def sqrt_mean() -> PsiFunction:
    """``psi(x, t) = sqrt(x) - sqrt(t)``: the estimator ``(mean of sqrt x)^2``."""
    return QuasiArithmetic(math.sqrt, POSITIVE, lambda s: s * s, "sqrt").psi()


def quasi_arithmetic(f_src: str, domain: Interval = POSITIVE, inverse_src: str | None = None) -> QuasiArithmetic:
    """Quasi-arithmetic generator parsed from an expression in ``x``."""
    fx = _expr.compile_expression(_expr.parse(f_src, {"x"}), ("x",))
    inv = None
    if inverse_src is not None:
        inv = _expr.compile_expression(_expr.parse(inverse_src, {"x"}), ("x",))
    return QuasiArithmetic(fx, domain, inv, f_src)


def user_expression(
    psi_src: str,
    theta: ParameterDomain = ParameterDomain(),
    x_domain: Interval = REALS,
    params: dict[str, float] | None = None,
) -> PsiFunction:
    """psi given as an expression in ``x`` and ``t`` (plus fixed named parameters)."""
    params = dict(params or {})
    ast = _expr.parse(psi_src, {"x", "t", *params})
    fn = _expr._compile(ast.root)
    base = {k: float(v) for k, v in params.items()}

    def ev(x: float, t: float) -> float:
        env = dict(base)
        env["x"] = x
        env["t"] = t
        return fn(env)

    # abs, min, max and arithmetic are continuous wherever defined; sign is not
    continuous = "sign" not in ast.calls()
    return PsiFunction(ev, theta, x_domain, continuous, f"expr({psi_src})")


# -- closed forms ---------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """A named psi family with its parameters, as accepted by the CLI."""

    family: str
    params: dict = field(default_factory=dict)

    def psi(self) -> PsiFunction:
        p = self.params
        if self.family == "normal":
            return normal_location(float(p.get("sigma", 1.0)))
        if self.family == "alpha-density":
            return alpha_density()
        if self.family == "sign":
            return sign_location()
        if self.family == "sqrt-mean":
            return sqrt_mean()
        if self.family == "quasi-arith":
            return self.generator().psi()
        if self.family == "expr":
            theta = p.get("theta", (-INF, INF))
            xdom = p.get("x-domain", (-INF, INF))
            extra = {k: float(v) for k, v in p.items() if k not in ("psi", "theta", "x-domain")}
            return user_expression(p["psi"], ParameterDomain(*theta), Interval(*xdom), extra)
        raise DomainError(f"{self.family!r} is not a psi family")

    def generator(self) -> QuasiArithmetic:
        if self.family == "sqrt-mean":
            return QuasiArithmetic(math.sqrt, POSITIVE, lambda s: s * s, "sqrt")
        if self.family != "quasi-arith":
            raise DomainError(f"{self.family!r} has no quasi-arithmetic generator")
        dom = self.params.get("domain", (0.0, INF))
        return quasi_arithmetic(self.params["f"], Interval(*dom), self.params.get("finv"))

    @property
    def theta(self) -> ParameterDomain:
        return self.psi().theta

    @property
    def observation_domain(self) -> Interval:
        return self.psi().observation_domain


def closed_form_weighted(family: FamilySpec, sample: WeightedSample) -> float | None:
    """Exact weighted estimator for families that have one, else ``None``."""
    xs, ws = sample.xs, sample.weights
    total = math.fsum(ws)
    if family.family == "normal":
        return math.fsum(w * x for x, w in zip(xs, ws)) / total
    if family.family == "alpha-density":
        sample.check_observations(UNIT_OPEN)
        return -total / math.fsum(w * math.log1p(-x * x) for x, w in zip(xs, ws))
    if family.family in ("quasi-arith", "sqrt-mean"):
        gen = family.generator()
        sample.check_observations(gen.domain)
        return gen.invert(math.fsum(w * gen.f(x) for x, w in zip(xs, ws)) / total)
    return None


# -- reference estimators ---------------------------------------------------------


def kappa(xs: Sequence[float]) -> float:
    """``(sum x + n * geometric mean) / (2n)``; the geometric mean via mean of logs."""
    xs = [float(x) for x in xs]
    if not xs:
        raise DomainError("kappa needs at least one value")
    if any(not x > 0 for x in xs):
        raise DomainError("kappa is defined for positive values only")
    n = len(xs)
    gm = math.exp(math.fsum(math.log(x) for x in xs) / n)
    return (math.fsum(xs) + n * gm) / (2 * n)


def sample_max(xs: Sequence[float]) -> float:
    return float(max(xs))


def mid_range(xs: Sequence[float]) -> float:
    return (min(xs) + max(xs)) / 2.0


@dataclass(frozen=True)
class ReferenceEstimator:
    """An estimator given directly as a function of the observations."""

    kind: str
    evaluator: Callable[[Sequence[float]], float]
    observation_domain: Interval = REALS
    theta: ParameterDomain = field(default_factory=ParameterDomain)

    def __call__(self, xs: Sequence[float]) -> float:
        return self.evaluator(xs)


KAPPA = ReferenceEstimator("Kappa", kappa, POSITIVE, ParameterDomain(0.0, INF))
MAX = ReferenceEstimator("Max", sample_max)
MID_RANGE = ReferenceEstimator("MidRange", mid_range)


# -- composite estimators -------------------------------------------------------------


@dataclass(frozen=True)
class CompositeEstimator:
    """``g(est_1(x), ..., est_N(x))`` for psi estimators ``est_i``.

    ``g`` is an expression in ``t1 .. tN``.
    """

    components: tuple
    g: _expr.Expression
    theta0: ParameterDomain = field(default_factory=ParameterDomain)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise DomainError("a composite estimator needs at least one component")
        names = {f"t{i + 1}" for i in range(len(self.components))}
        extra = self.g.free_variables - names
        if extra:
            raise DomainError(f"g uses {sorted(extra)}, only {sorted(names)} are bound")

    @property
    def observation_domain(self) -> Interval:
        lo = max(c.observation_domain.lo for c in self.components)
        hi = min(c.observation_domain.hi for c in self.components)
        return Interval(lo, hi)

    def combine(self, values: Sequence[float]) -> float:
        env = {f"t{i + 1}": v for i, v in enumerate(values)}
        out = _expr.evaluate(self.g, env)
        if out not in self.theta0:
            raise DomainError(f"g value {out!r} is outside {self.theta0}")
        return out


def composite_estimate_weighted(
    c: CompositeEstimator, sample: WeightedSample, cfg: SolverConfig | None = None
) -> float:
    values = [estimate_weighted(psi, sample, cfg).theta_hat for psi in c.components]
    return c.combine(values)


def composite_estimate(c: CompositeEstimator, xs: Sequence[float], cfg: SolverConfig | None = None) -> float:
    return composite_estimate_weighted(c, WeightedSample.unit(xs), cfg)


# -- descriptor parsing ------------------------------------------------------------

REFERENCE_NAMES = {"kappa": KAPPA, "max": MAX, "mid-range": MID_RANGE, "midrange": MID_RANGE}
_HEAD = re.compile(r"\s*([A-Za-z][A-Za-z0-9_-]*)\s*")


def _split_top(s: str) -> list[str]:
    parts, depth, quote, cur = [], 0, None, []
    for ch in s:
        if quote:
            cur.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "\"'":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    if quote or depth:
        raise DomainError(f"unbalanced quotes or parentheses in {s!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _real(tok: str) -> float:
    t = tok.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return INF
    if t in ("-inf", "-infinity"):
        return -INF
    try:
        return float(t)
    except ValueError:
        raise DomainError(f"expected a number, got {tok!r}") from None


def _value(tok: str):
    tok = tok.strip()
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in "\"'":
        return tok[1:-1]
    if tok.startswith("(") and tok.endswith(")"):
        items = _split_top(tok[1:-1])
        if len(items) != 2:
            raise DomainError(f"an interval needs two ends, got {tok!r}")
        return (_real(items[0]), _real(items[1]))
    return _real(tok)


def parse_interval(text: str) -> tuple[float, float]:
    """``"(0, inf)"`` to ``(0.0, inf)``."""
    val = _value(text)
    if not isinstance(val, tuple):
        raise DomainError(f"expected an interval like (0, inf), got {text!r}")
    return val


def parse_family(text: str) -> FamilySpec:
    """Parse a descriptor such as ``normal(sigma=2)`` into a :class:`FamilySpec`."""
    m = _HEAD.match(text)
    if not m:
        raise DomainError(f"cannot parse family descriptor {text!r}")
    name = m.group(1).lower()
    rest = text[m.end():].strip()
    params: dict = {}
    if rest:
        if not (rest.startswith("(") and rest.endswith(")")):
            raise DomainError(f"cannot parse family descriptor {text!r}")
        for item in _split_top(rest[1:-1]):
            key, eq, val = item.partition("=")
            if not eq:
                raise DomainError(f"expected key=value, got {item!r}")
            params[key.strip().lower()] = _value(val)
    known = {"normal", "alpha-density", "sign", "sqrt-mean", "quasi-arith", "expr"}
    if name not in known:
        raise DomainError(f"unknown family {name!r}; expected one of {sorted(known)}")
    if name == "quasi-arith" and "f" not in params:
        raise DomainError('quasi-arith needs f="..."')
    if name == "expr" and "psi" not in params:
        raise DomainError('expr needs psi="..."')
    if name == "normal" and not float(params.get("sigma", 1.0)) > 0:
        raise DomainError("sigma must be positive")
    return FamilySpec(name, params)


def resolve_estimator(text: str):
    """A :class:`PsiFunction` for psi families, or a :class:`ReferenceEstimator`."""
    key = text.strip().lower()
    if key in REFERENCE_NAMES:
        return REFERENCE_NAMES[key]
    return parse_family(text).psi()
