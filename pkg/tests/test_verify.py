import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psiest import DomainError
from psiest.catalog import (
    KAPPA,
    MAX,
    MID_RANGE,
    CompositeEstimator,
    alpha_density,
    normal_location,
    sign_location,
    sqrt_mean,
)
from psiest.domains import Interval
from psiest.errors import InvalidProbe, PositivityViolation
from psiest.expr import parse
from psiest.verify import (
    Property,
    SensitivityQuery,
    Verdict,
    check_bisymmetry,
    check_bisymmetry_2x2,
    check_mean_type,
    check_null_homogeneity,
    check_permutation_invariance,
    check_replication_collapse,
    check_replication_limit,
    check_sign_change_certificate,
    check_weight_continuity,
    check_weight_line_monotone,
    find_sensitivity_witness,
    find_up_down,
    full_scan,
    is_monotone_sequence,
    is_quasi_affine_sequence,
    property_from_name,
    replay,
    run_suite,
    run_trial,
    weight_line_domain,
    weighted_value,
)
from psiest.verify.checks import line_grid
from psiest.verify.suites import default_seed

N1 = normal_location()


# -- mean type -----------------------------------------------------------------------


def test_mean_type_normal_strict():
    rep = check_mean_type(N1, [[1, 81], [25, 25]])
    assert rep.holds and rep.property is Property.MEAN_TYPE_STRICT
    assert rep.details["block_values"] == pytest.approx([41, 25])
    assert rep.details["concat_value"] == pytest.approx(33)


def test_mean_type_kappa_violated():
    rep = check_mean_type(KAPPA, [[1, 81], [25, 25]])
    assert rep.violated
    assert rep.witness["concat_value"] == pytest.approx(24, abs=1e-12)
    assert rep.witness["margin"] == pytest.approx(1.0, abs=1e-12)


def test_mean_type_single_block():
    assert check_mean_type(N1, [[1, 2, 3]]).holds


def test_mean_type_sign_not_strict():
    rep = check_mean_type(sign_location(), [[1.0], [5.0], [3.0]])
    assert rep.holds and rep.property is Property.MEAN_TYPE


def test_mean_type_inconclusive_on_solver_error():
    rep = check_mean_type(sign_location(), [[1.0, 5.0]])
    assert rep.status is Verdict.INCONCLUSIVE and "NonUnique" in rep.cause


def test_mean_type_rejects_empty_block():
    with pytest.raises(DomainError):
        check_mean_type(N1, [[1.0], []])


# -- weight lines ----------------------------------------------------------------------


def test_weight_line_domain_examples():
    assert weight_line_domain([-1, 1], [1, 0]) == Interval(0.0, 1.0, True, True)
    assert weight_line_domain([0, 0], [-1, -1]).empty
    assert weight_line_domain([1], [0]) == Interval(0.0, math.inf, False, False)
    assert weight_line_domain([1, 1], [-1, -1]) == Interval(1.0, math.inf, False, False)
    assert weight_line_domain([0, 0], [0, 0]).empty
    assert weight_line_domain([1, -1], [-2, 1]).empty
    with pytest.raises(DomainError):
        weight_line_domain([1], [1, 2])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4),
       st.integers(-40, 40))
def test_weight_line_domain_membership(coefs, s4):
    a, b = zip(*coefs)
    s = s4 / 4
    dom = weight_line_domain(a, b)
    w = [s * ai + bi for ai, bi in zip(a, b)]
    admissible = all(v >= 0 for v in w) and any(v > 0 for v in w)
    assert (s in dom) == admissible


def test_line_grid_is_inside():
    dom = weight_line_domain([1], [0])
    grid = line_grid(dom, 5)
    assert grid[0] > 0 and grid[-1] <= 100 and len(grid) == 5
    flat = line_grid(weight_line_domain([0, 0], [1, 1]), 5)
    assert flat[0] == -100 + 1e-4 and flat[-1] == 100 - 1e-4
    assert line_grid(weight_line_domain([1, -1, 0], [-1, 1, 1]), 5) == [1.0]


def test_weight_line_monotone_normal():
    rep = check_weight_line_monotone(N1, [0, 1], [-1, 1], [1, 0], 11)
    assert rep.holds
    assert rep.details["values"] == pytest.approx(rep.details["grid"], abs=1e-11)


def test_weight_line_monotone_sign():
    # (lam, 1 - lam) for lam in [0, 0.45]
    rep = check_weight_line_monotone(sign_location(), [1, 5], [1, -1], [0, 1], 3)
    assert rep.status in (Verdict.HOLDS, Verdict.INCONCLUSIVE)
    rep = check_weight_line_monotone(sign_location(), [1, 5, 3], [1, -1, 0], [0, 1, 0.01], 33)
    assert rep.holds


def test_weight_line_constant():
    rep = check_weight_line_monotone(N1, [0, 3], [0, 0], [1, 1], 5)
    assert rep.holds and len(set(rep.details["values"])) == 1


def test_weight_line_violation_for_non_estimator():
    # a weighted "estimator" that goes up then down along the line
    class Bumpy:
        observation_domain = Interval()

    from psiest.verify import checks

    orig = checks.weighted_value
    try:
        checks.weighted_value = lambda est, xs, ws, cfg=None: -(ws[0] - 0.5) ** 2
        rep = check_weight_line_monotone(Bumpy(), [0, 1], [1, -1], [0, 1], 9)
    finally:
        checks.weighted_value = orig
    assert rep.violated and rep.witness["margin"] > 0


# -- bisymmetry ------------------------------------------------------------------------


def test_bisymmetry_normal_equality():
    rep = check_bisymmetry(N1, [[0, 1], [1, 0]])
    assert rep.holds
    assert rep.details["row_values"] == pytest.approx([0.5, 0.5])
    assert rep.details["margin"] == pytest.approx(0.0, abs=1e-11)


def test_bisymmetry_kappa_violated():
    rep = check_bisymmetry(KAPPA, [[1, 81], [81, 1], [25, 25], [25, 25]])
    assert rep.violated
    assert rep.witness["min_row"] == pytest.approx(25, abs=1e-12)
    assert rep.witness["max_column"] == pytest.approx(24, abs=1e-12)


def test_bisymmetry_positivity():
    with pytest.raises(PositivityViolation):
        check_bisymmetry(N1, [[0, 1], [1, 0]], [[1, 0], [1, 0]])
    with pytest.raises(DomainError):
        check_bisymmetry(N1, [[0, 1], [1]])


def test_bisymmetry_2x2():
    assert check_bisymmetry_2x2(N1, 0, 1, 1, 0, 1, 1, 1, 1).holds
    with pytest.raises(PositivityViolation):
        check_bisymmetry_2x2(N1, 0, 1, 1, 0, 1, 0, 1, 0)
    assert check_bisymmetry_2x2(alpha_density(), 0.2, 0.9, 0.5, 0.3, 1, 2, 3, 0.5).holds


# -- replication limit -----------------------------------------------------------------


def test_replication_limit_normal_closed_form():
    sched = [2**j for j in range(11)]
    rep = check_replication_limit(N1, [0.0], [1.0], sched, tol_limit=1.0)
    for ell, e in zip(sched, rep.details["errors"]):
        assert abs(e - 1 / (ell + 1)) <= 1e-12
    assert check_replication_limit(N1, [0.0], [1.0]).holds


def test_replication_limit_identical_blocks():
    rep = check_replication_limit(alpha_density(), [0.3, 0.6], [0.3, 0.6])
    assert rep.holds and max(rep.details["errors"]) <= 1e-12


def test_replication_limit_short_schedule_violates():
    rep = check_replication_limit(N1, [0.0], [1.0], [1, 2, 4])
    assert rep.violated and rep.witness["margin"] > 0


def test_replication_limit_schedule_validation():
    with pytest.raises(DomainError):
        check_replication_limit(N1, [0.0], [1.0], [4, 2])
    with pytest.raises(DomainError):
        check_replication_limit(N1, [], [1.0])


# -- continuity ------------------------------------------------------------------------


def test_weight_continuity_normal():
    rep = check_weight_continuity(N1, [0, 1], [1, 1], 0.1)
    assert rep.holds
    assert rep.details["deviations"][0] <= 0.05
    devs = rep.details["deviations"]
    assert all(b <= a + 1e-12 for a, b in zip(devs, devs[1:]))


def test_weight_continuity_boundary_weight():
    assert check_weight_continuity(N1, [0, 1], [1, 0], 0.1).holds
    assert check_weight_continuity(alpha_density(), [0.2, 0.7, 0.5], [1, 2, 3]).holds


def test_weight_continuity_sign_is_inconclusive():
    rep = check_weight_continuity(sign_location(), [1, 5], [0.5, 0.5])
    assert rep.status is Verdict.INCONCLUSIVE


def test_weight_continuity_sign_jump_not_violated():
    # probes straddle the non-unique weight 1/2
    rep = check_weight_continuity(sign_location(), [1, 5], [0.5, 0.5 + 1e-9])
    assert rep.status in (Verdict.INCONCLUSIVE, Verdict.HOLDS)


def test_weight_continuity_invalid_probe():
    with pytest.raises(InvalidProbe):
        check_weight_continuity(N1, [0, 1], [1e-3, 0], 1.0, probes=64)


# -- invariants ------------------------------------------------------------------------


def test_structural_invariants():
    assert check_null_homogeneity(alpha_density(), [0.2, 0.5], [1, 3], 7.5).holds
    assert check_permutation_invariance(sqrt_mean(), [1, 4, 9], [2, 0, 1]).holds
    assert check_replication_collapse(N1, [0, 1, 5], [3, 0, 2]).holds
    assert check_sign_change_certificate(sign_location(), [1, 2, 7], [1, 1, 1]).holds
    with pytest.raises(DomainError):
        check_permutation_invariance(N1, [1, 2], [0, 0])
    with pytest.raises(DomainError):
        check_null_homogeneity(N1, [1], [1], 0.0)


def test_reference_weights_must_be_integers():
    assert weighted_value(KAPPA, [1, 81], [1, 1]) == 25.0
    with pytest.raises(DomainError):
        weighted_value(KAPPA, [1, 81], [0.5, 1])


# -- sensitivity ------------------------------------------------------------------------


def test_sensitivity_normal():
    res = find_sensitivity_witness(N1, SensitivityQuery(0, 1, 0.3, 0.4))
    assert res.found and res.pair == (2, 1)
    assert res.value == pytest.approx(1 / 3, abs=1e-12)


def test_sensitivity_not_sensitive_references():
    assert not find_sensitivity_witness(MAX, SensitivityQuery(0, 1, 0.3, 0.4, 64)).found
    res = find_sensitivity_witness(MID_RANGE, SensitivityQuery(0, 1, 0.6, 0.7, 64))
    assert res.status == "NotFoundUpToBound" and res.max_total == 64


def test_sensitivity_query_rejected():
    with pytest.raises(DomainError):
        find_sensitivity_witness(N1, SensitivityQuery(0, 1, 0.4, 0.3))
    with pytest.raises(DomainError):
        find_sensitivity_witness(N1, SensitivityQuery(1, 0, 0.3, 0.4))


@pytest.mark.parametrize("est, q", [
    (normal_location(), SensitivityQuery(0, 1, 0.61, 0.62, 64)),
    (sqrt_mean(), SensitivityQuery(1, 81, 30, 31, 64)),
    (alpha_density(), SensitivityQuery(0.9, 0.2, 1.0, 1.1, 64)),
    (normal_location(), SensitivityQuery(0, 1, 0.001, 0.002, 64)),
])
def test_sensitivity_minimal_against_full_scan(est, q):
    res = find_sensitivity_witness(est, q)
    hits = full_scan(est, q)
    if not hits:
        assert not res.found
        return
    best = min(hits, key=lambda h: (h[0] + h[1], h[1]))
    assert res.found and res.k + res.m == best[0] + best[1]
    assert res.pair == best[:2]


def test_sensitivity_composite():
    comp = CompositeEstimator((normal_location(1.0), normal_location(2.0)), parse("(t1 + t2)/2"))
    res = find_sensitivity_witness(comp, SensitivityQuery(0, 1, 0.3, 0.4))
    assert res.pair == (2, 1)


# -- monotone / quasi-affine ------------------------------------------------------------


def test_up_down_examples():
    assert find_up_down([0, 1, 2, 2, 3]) is None
    assert find_up_down([3, 1, 1, 0]) is None
    assert find_up_down([0, 2, 1]) == (0, 1, 2)
    assert find_up_down([2, 0, 1]) == (0, 1, 2)
    assert find_up_down([0, 1e-13, 0], tol=1e-12) is None
    assert is_monotone_sequence([]) and is_quasi_affine_sequence([1.0])


values = st.lists(st.integers(-3, 3).map(float), min_size=0, max_size=12)


@settings(max_examples=1000, deadline=None)
@given(values, st.sampled_from([0.0, 0.5, 1.0]))
def test_monotone_iff_quasi_affine(vals, tol):
    assert is_monotone_sequence(vals, tol) == is_quasi_affine_sequence(vals, tol)


def _brute_monotone(vals, tol):
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = vals[i], vals[j], vals[k]
                if (b - a > tol and b - c > tol) or (a - b > tol and c - b > tol):
                    return False
    return True


@settings(max_examples=500, deadline=None)
@given(values, st.sampled_from([0.0, 1.0]))
def test_up_down_matches_brute_force(vals, tol):
    assert is_monotone_sequence(vals, tol) == _brute_monotone(vals, tol)


# -- replay and suites --------------------------------------------------------------------


def test_replay_reproduces_violation():
    rep = check_bisymmetry(KAPPA, [[1, 81], [81, 1], [25, 25], [25, 25]])
    again = replay(rep, KAPPA)
    assert again.violated and abs(again.witness["margin"] - rep.witness["margin"]) <= 1e-12
    from_json = replay(rep.to_dict(), KAPPA)
    assert from_json.violated and abs(from_json.witness["margin"] - rep.witness["margin"]) <= 1e-12


def test_replay_suite_witness():
    rep = run_suite(Property.MEAN_TYPE, KAPPA, trials=1, seed=1)
    assert rep.trials == 1 and rep.seed == 1
    mt = check_mean_type(KAPPA, [[1, 81], [25, 25]])
    assert replay(mt.witness, KAPPA, prop=Property.MEAN_TYPE).witness["margin"] == mt.witness["margin"]
    with pytest.raises(DomainError):
        replay(mt.witness, KAPPA)


def test_replay_requires_witness():
    with pytest.raises(DomainError):
        replay(check_mean_type(N1, [[1]]), N1)


def test_property_names():
    assert property_from_name("MeanType") is Property.MEAN_TYPE
    assert property_from_name("mean-type") is Property.MEAN_TYPE
    assert property_from_name("weight_line_monotone") is Property.WEIGHT_LINE_MONOTONE
    assert property_from_name("bisymmetry-2x2") is Property.BISYMMETRY_2X2
    with pytest.raises(DomainError):
        property_from_name("nope")


def test_default_seed_env(monkeypatch):
    monkeypatch.delenv("PSIEST_SEED", raising=False)
    assert default_seed() == 42
    monkeypatch.setenv("PSIEST_SEED", "7")
    assert default_seed() == 7
    assert run_suite("PermutationInvariance", N1, trials=2).seed == 7
    monkeypatch.setenv("PSIEST_SEED", "x")
    with pytest.raises(DomainError):
        default_seed()


def test_trials_are_order_independent():
    a = run_trial(Property.BISYMMETRY_2X2, N1, 42, 5)
    run_trial(Property.BISYMMETRY_2X2, N1, 42, 3)
    b = run_trial(Property.BISYMMETRY_2X2, N1, 42, 5)
    assert a.details == b.details


@pytest.mark.parametrize("prop", [p for p in Property])
def test_every_suite_runs_on_normal(prop):
    rep = run_suite(prop, N1, trials=5, seed=42)
    assert rep.holds, rep.cause or rep.witness


def test_suite_catches_kappa():
    rep = run_suite(Property.SENSITIVITY, MAX, trials=2, seed=0)
    assert rep.violated and rep.witness["result"] == "NotFoundUpToBound"
