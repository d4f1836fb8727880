import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scc_transport import (
    CauseProbabilities,
    DegenerateAccuracy,
    DegenerateCauses,
    Method,
    TargetOutOfRange,
    UndefinedMetric,
    apply_odds_ratio,
    causes_to_table,
    cubic_coefficients,
    cubic_positive_root,
    logit_adjustment_check,
    metrics,
    prevalence_from_causes,
    proportional_odds_objective,
    solve_common_odds_ratio,
    table_to_causes,
    transport_by_accuracy,
    transport_by_predictive_values,
    transport_proportional_odds,
)
from scc_transport.core import ContingencyTable, PerformanceMetrics
from scc_transport.transport import shift_causes

from conftest import ROW1, TARGET, TARGET_PREV, causes_st

open_prob = st.floats(min_value=1e-3, max_value=1 - 1e-3)


def r3(values):
    return [round(v, 3) for v in values]


# --- predictive values -------------------------------------------------------

def test_pv_worked_example(row1_metrics):
    res = transport_by_predictive_values(row1_metrics, 1 / 3)
    assert res.method is Method.PREDICTIVE_VALUES
    assert r3(res.implied_table.as_tuple()) == [0.25, 0.083, 0.25, 0.417]
    assert r3(table_to_causes(res.implied_table).as_tuple()) == [0.333, 0.75, 0.5]
    m = metrics(res.implied_table)
    assert r3((m.se, m.sp)) == [0.5, 0.833]


def test_pv_identity(row1_metrics):
    res = transport_by_predictive_values(row1_metrics, 0.25)
    assert res.implied_table.as_tuple() == pytest.approx(causes_to_table(ROW1).as_tuple(), abs=1e-15)


def test_pv_zero_positivity(row1_metrics):
    t = transport_by_predictive_values(row1_metrics, 0.0).implied_table
    assert t.as_tuple() == pytest.approx((0, 0, 0.375, 0.625))
    assert t.prevalence == pytest.approx(1 - row1_metrics.npv)


def test_pv_undefined_metric():
    with pytest.raises(UndefinedMetric):
        transport_by_predictive_values(metrics(ContingencyTable(0, 0, 0.3, 0.7)), 0.5)


@given(causes_st, st.floats(0, 1))
def test_pv_agrees_with_cause_construction(c, target_pt):
    m = metrics(causes_to_table(c))
    via_metrics = transport_by_predictive_values(m, target_pt).implied_table
    via_causes = causes_to_table(CauseProbabilities(target_pt, c.p_u, c.p_v))
    assert via_metrics.as_tuple() == pytest.approx(via_causes.as_tuple(), abs=1e-12)
    assert via_metrics.positivity == pytest.approx(target_pt, abs=1e-12)


# --- accuracy ----------------------------------------------------------------

def test_accuracy_worked_example(row1_metrics):
    t = transport_by_accuracy(row1_metrics, TARGET_PREV).implied_table
    assert r3(t.as_tuple()) == [0.249, 0.044, 0.373, 0.333]
    m = metrics(t)
    assert r3((m.ppv, m.npv)) == [0.848, 0.472]
    assert r3(table_to_causes(t).as_tuple()) == [0.293, 0.848, 0.623]


def test_accuracy_identity(row1_metrics):
    t = transport_by_accuracy(row1_metrics, 0.46875).implied_table
    assert t.as_tuple() == pytest.approx(causes_to_table(ROW1).as_tuple(), abs=1e-15)


def test_accuracy_zero_prevalence(row1_metrics):
    t = transport_by_accuracy(row1_metrics, 0.0).implied_table
    assert t.as_tuple() == pytest.approx((0, 1 - row1_metrics.sp, 0, row1_metrics.sp))
    m = metrics(t)
    assert m.ppv == 0.0 and m.npv == 1.0


def test_accuracy_allows_perfect_accuracy():
    m = metrics(ContingencyTable(0.5, 0, 0, 0.5))
    t = transport_by_accuracy(m, 0.3).implied_table
    assert t.as_tuple() == pytest.approx((0.3, 0, 0, 0.7))


@given(causes_st, open_prob)
def test_accuracy_bayes_identity(c, pi):
    m = metrics(causes_to_table(c))
    out = metrics(transport_by_accuracy(m, pi).implied_table)
    bayes = pi * m.se / (pi * m.se + (1 - pi) * (1 - m.sp))
    assert out.ppv == pytest.approx(bayes, abs=1e-12)
    assert (out.se, out.sp) == pytest.approx((m.se, m.sp), abs=1e-12)


# --- logit / LR adjustment ---------------------------------------------------

def test_logit_check_worked_example(row1_metrics):
    adj = logit_adjustment_check(row1_metrics, TARGET_PREV)
    assert adj.positive_lr == pytest.approx(3.4)
    assert adj.negative_lr == pytest.approx(0.6 / (15 / 17))
    assert round(adj.adjusted_ppv, 3) == 0.848
    acc = metrics(transport_by_accuracy(row1_metrics, TARGET_PREV).implied_table)
    assert adj.adjusted_ppv == pytest.approx(acc.ppv, abs=1e-12)
    assert adj.adjusted_one_minus_npv == pytest.approx(1 - acc.npv, abs=1e-12)


def test_logit_check_identity(row1_metrics):
    adj = logit_adjustment_check(row1_metrics, 0.46875)
    assert adj.adjusted_ppv == pytest.approx(0.75, abs=1e-12)
    assert adj.adjusted_one_minus_npv == pytest.approx(0.375, abs=1e-12)


def test_logit_check_uninformative_marker():
    m = PerformanceMetrics(se=0.5, sp=0.5, ppv=0.4, npv=0.6, prevalence=0.4)
    adj = logit_adjustment_check(m, 0.37)
    assert adj.positive_lr == 1.0 and adj.negative_lr == 1.0
    assert adj.adjusted_ppv == pytest.approx(0.37, abs=1e-15)


@pytest.mark.parametrize("se, sp", [(1.0, 0.8), (0.7, 1.0), (0.0, 0.5)])
def test_logit_check_rejects_degenerate_accuracy(se, sp):
    m = PerformanceMetrics(se=se, sp=sp, ppv=0.5, npv=0.5, prevalence=0.5)
    with pytest.raises(DegenerateAccuracy):
        logit_adjustment_check(m, 0.3)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_bayes_logit_equivalence_grid(se, sp, pi):
    m = PerformanceMetrics(se=se, sp=sp, ppv=None, npv=None, prevalence=0.5)
    acc = metrics(transport_by_accuracy(m, pi).implied_table)
    adj = logit_adjustment_check(m, pi)
    assert adj.adjusted_ppv == pytest.approx(acc.ppv, abs=1e-12)
    assert adj.adjusted_one_minus_npv == pytest.approx(1 - acc.npv, abs=1e-12)


# --- odds-ratio shift and objective -----------------------------------------

@pytest.mark.parametrize(
    "p, expected", [(0.25, 0.3495), (0.75, 0.8287), (0.5, 0.6172)]
)
def test_apply_odds_ratio_reported(p, expected):
    assert apply_odds_ratio(p, 1.612) == pytest.approx(expected, abs=1e-4)


def test_apply_odds_ratio_simple():
    assert apply_odds_ratio(0.5, 3) == 0.75
    assert apply_odds_ratio(0.123, 1.0) == 0.123


@given(open_prob, st.floats(0.01, 100), st.floats(1.01, 3))
def test_apply_odds_ratio_monotone(p, x, k):
    assert apply_odds_ratio(p, x * k) > apply_odds_ratio(p, x)
    assert apply_odds_ratio(min(p * 1.01, 0.999), x) >= apply_odds_ratio(p, x)


def test_objective_values():
    assert proportional_odds_objective(ROW1, 1.0) == pytest.approx(0.46875, abs=1e-15)
    # 1.612 is itself rounded, so agreement is only to about 1e-4
    assert proportional_odds_objective(ROW1, 1.612) == pytest.approx(0.6222, abs=1e-4)
    assert proportional_odds_objective(ROW1, 2.0) > proportional_odds_objective(ROW1, 1.0)


def test_objective_limits():
    assert proportional_odds_objective(ROW1, 1e-12) < 1e-11
    assert proportional_odds_objective(ROW1, 1e12) > 1 - 1e-11


def test_objective_rejects_degenerate():
    with pytest.raises(DegenerateCauses):
        proportional_odds_objective(CauseProbabilities(0.2, 1.0, 0.3), 2.0)


@settings(max_examples=50)
@given(causes_st)
def test_objective_strictly_increasing_on_log_grid(c):
    grid = np.logspace(-4, 4, 81)
    f = [proportional_odds_objective(c, x) for x in grid]
    assert all(b > a for a, b in zip(f, f[1:]))


# --- solver and cubic oracle -------------------------------------------------

def test_solver_reported_odds_ratio():
    assert solve_common_odds_ratio(ROW1, 0.6222) == pytest.approx(1.612, abs=1e-3)
    assert solve_common_odds_ratio(ROW1, TARGET_PREV) == pytest.approx(1.612, abs=1e-3)


@given(causes_st)
def test_solver_identity(c):
    assert solve_common_odds_ratio(c, prevalence_from_causes(c)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("pi", [0.0, 1.0, -0.1, 1.2])
def test_solver_target_out_of_range(pi):
    with pytest.raises(TargetOutOfRange):
        solve_common_odds_ratio(ROW1, pi)


def test_solver_rejects_degenerate_causes():
    with pytest.raises(DegenerateCauses):
        solve_common_odds_ratio(CauseProbabilities(0.0, 0.5, 0.5), 0.3)


def test_cubic_coefficients_worked_example():
    # frozen from an exact symbolic expansion of f(x) = pi* at pi* = 0.6222
    k = cubic_coefficients(ROW1, 0.6222)
    assert (k.a, k.b, k.c, k.d) == pytest.approx(
        (0.03541875, 0.12223125, -0.25276875, -0.05833125), abs=1e-15
    )
    x = solve_common_odds_ratio(ROW1, 0.6222)
    assert abs(k(x)) <= 1e-9
    assert cubic_positive_root(k) == pytest.approx(x, abs=1e-9)


def test_cubic_boundary_root_at_zero():
    k = cubic_coefficients(ROW1, 1e-300)
    assert abs(k.d) < 1e-300
    assert abs(k(0.0)) < 1e-300


@pytest.mark.parametrize("pi", np.linspace(0.01, 0.99, 25))
def test_cubic_sign_pattern(pi):
    k = cubic_coefficients(ROW1, pi)
    assert k.a > 0 and k.d < 0


@settings(max_examples=200)
@given(causes_st, st.floats(0.001, 0.999))
def test_solver_matches_cubic_root(c, pi):
    x = solve_common_odds_ratio(c, pi)
    root = cubic_positive_root(cubic_coefficients(c, pi))
    assert x == pytest.approx(root, abs=1e-9, rel=1e-9)
    assert abs(proportional_odds_objective(c, x) - pi) <= 1e-10


# --- proportional-odds transport ---------------------------------------------

def test_po_worked_example():
    res = transport_proportional_odds(ROW1, TARGET_PREV)
    assert res.method is Method.PROPORTIONAL_ODDS
    assert round(res.fitted_odds_ratio, 3) == 1.612
    assert r3(res.implied_causes.as_tuple()) == [0.349, 0.829, 0.617]
    assert r3(res.implied_table.as_tuple()) == [0.29, 0.06, 0.333, 0.318]
    m = metrics(res.implied_table)
    assert r3((m.se, m.sp, m.ppv, m.npv)) == [0.465, 0.841, 0.829, 0.489]


@given(causes_st)
def test_po_identity(c):
    res = transport_proportional_odds(c, prevalence_from_causes(c))
    assert res.implied_table.as_tuple() == pytest.approx(causes_to_table(c).as_tuple(), abs=1e-9)


def test_po_monotone_response():
    lo = transport_proportional_odds(ROW1, 0.5).fitted_odds_ratio
    hi = transport_proportional_odds(ROW1, 0.7).fitted_odds_ratio
    assert hi > lo


@given(causes_st, st.floats(-4, 4))
def test_po_exact_recovery(c, log_x0):
    target = shift_causes(c, math.exp(log_x0))
    pi = prevalence_from_causes(target)
    if not 0 < pi < 1 or target.degenerate:
        return
    res = transport_proportional_odds(c, pi)
    assert res.implied_table.as_tuple() == pytest.approx(causes_to_table(target).as_tuple(), abs=1e-8)
    assert res.implied_table.prevalence == pytest.approx(pi, abs=1e-10)
