"""Empirical verification of the structural properties of psi-estimators."""
from .checks import (
    WeightLine,
    check_bisymmetry,
    check_bisymmetry_2x2,
    check_mean_type,
    check_null_homogeneity,
    check_permutation_invariance,
    check_quasi_affine_equivalence,
    check_replication_collapse,
    check_replication_limit,
    check_sign_change_certificate,
    check_weight_continuity,
    check_weight_line_monotone,
    plain_value,
    replay,
    weight_line_domain,
    weighted_value,
)
from .monotone import find_up_down, is_monotone_sequence, is_quasi_affine_sequence
from .report import Property, PropertyReport, Verdict
from .sensitivity import (
    SensitivityQuery,
    SensitivityResult,
    find_sensitivity_witness,
    full_scan,
    sensitivity_report,
)
from .suites import default_seed, property_from_name, run_suite, run_trial

__all__ = [name for name in dir() if not name.startswith("_")]
