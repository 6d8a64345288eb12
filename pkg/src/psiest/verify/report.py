"""Verdict records produced by the property checks."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Property(str, enum.Enum):
    MEAN_TYPE = "MeanType"
    MEAN_TYPE_STRICT = "MeanTypeStrict"
    WEIGHT_LINE_MONOTONE = "WeightLineMonotone"
    BISYMMETRY = "Bisymmetry"
    BISYMMETRY_2X2 = "Bisymmetry2x2"
    REPLICATION_LIMIT = "ReplicationLimit"
    WEIGHT_CONTINUITY = "WeightContinuity"
    SENSITIVITY = "Sensitivity"
    NULL_HOMOGENEITY = "NullHomogeneity"
    PERMUTATION_INVARIANCE = "PermutationInvariance"
    QUASI_AFFINE_MONOTONE = "QuasiAffineMonotone"
    REPLICATION_COLLAPSE = "ReplicationCollapse"
    SIGN_CHANGE_CERTIFICATE = "SignChangeCertificate"


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class PropertyReport:
    """Outcome of one check or of a seeded suite of checks.

    ``Holds`` only means that no counterexample was found with the recorded
    seed and tolerance. A ``Violated`` report always carries a witness whose
    ``inputs`` can be fed back through :func:`psiest.verify.replay`.
    """

    property: Property
    status: Verdict
    trials: int = 1
    seed: int | None = None
    tolerance_used: float = 0.0
    witness: dict | None = None
    cause: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Verdict.HOLDS

    @property
    def violated(self) -> bool:
        return self.status is Verdict.VIOLATED

    def to_dict(self) -> dict:
        out = {
            "property": self.property.value,
            "status": self.status.value,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance_used,
        }
        if self.witness is not None:
            out["witness"] = decimal_strings(self.witness)
        if self.cause is not None:
            out["cause"] = self.cause
        return out


def fmt_real(v: float) -> str:
    """17 significant digits: enough for any double to round-trip."""
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def decimal_strings(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        return fmt_real(obj)
    if isinstance(obj, dict):
        return {k: decimal_strings(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [decimal_strings(v) for v in obj]
    if hasattr(obj, "item"):
        return decimal_strings(obj.item())
    return str(obj)


def from_decimal_strings(obj):
    """Inverse of :func:`decimal_strings` for numeric leaves."""
    if isinstance(obj, str):
        try:
            return float(obj)
        except ValueError:
            return obj
    if isinstance(obj, dict):
        return {k: from_decimal_strings(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [from_decimal_strings(v) for v in obj]
    return obj
