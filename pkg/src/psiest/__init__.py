"""Weighted generalized psi-estimators and checks of their structural properties."""
from .domains import Interval, ParameterDomain
from .errors import (
    DomainError,
    MaxIterations,
    NonUniqueSignChange,
    NoSignChange,
    PsiEstError,
    SolverError,
    ZeroWeightVector,
)
from .solver import (
    EstimateResult,
    PsiFunction,
    SolverConfig,
    Status,
    WeightedSample,
    estimate,
    estimate_materialized,
    estimate_replicated,
    estimate_weighted,
    find_sign_change,
    weighted_sum,
)

__version__ = "0.1.0"
