"""Transporting a binary marker from a source to a target population.

Three methods are provided. Predictive-values transport keeps PPV and NPV and
takes the target's marker positivity. Accuracy transport keeps SE and SP and
applies Bayes' rule with the target prevalence. Proportional-odds transport
shifts all three cause probabilities by one common odds ratio chosen so the
shifted population has the target prevalence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import (
    CauseProbabilities,
    ContingencyTable,
    PerformanceMetrics,
    SCCError,
    UndefinedMetric,
    causes_to_table,
    prevalence_from_causes,
)

DEFAULT_TOL = 1e-10
BRACKET_FACTOR = 4.0
MAX_EXPANSIONS = 64
MAX_ITER = 200
# relative width of the x bracket at which bisection stops refining
X_RTOL = 1e-13


class DegenerateAccuracy(SCCError):
    pass


class DegenerateCauses(SCCError):
    pass


class TargetOutOfRange(SCCError):
    pass


class SolverError(SCCError):
    """Root bracketing or bisection did not meet the requested tolerance."""


class Method(str, enum.Enum):
    PREDICTIVE_VALUES = "predictive_values"
    ACCURACY = "accuracy"
    PROPORTIONAL_ODDS = "proportional_odds"


@dataclass(frozen=True)
class TransportResult:
    implied_table: ContingencyTable
    method: Method
    target_name: str  # "p_t" or "prevalence"
    target_value: float
    fitted_odds_ratio: Optional[float] = None
    implied_causes: Optional[CauseProbabilities] = None


@dataclass(frozen=True)
class CubicCoefficients:
    a: float
    b: float
    c: float
    d: float

    def __call__(self, x: float) -> float:
        return ((self.a * x + self.b) * x + self.c) * x + self.d


class LogitAdjustment(NamedTuple):
    positive_lr: float
    negative_lr: float
    adjusted_ppv: float
    adjusted_one_minus_npv: float


def _require(m: PerformanceMetrics, *names: str) -> None:
    missing = [n for n in names if getattr(m, n) is None]
    if missing:
        raise UndefinedMetric(f"source metric(s) undefined: {', '.join(missing)}")


def _check_target(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise TargetOutOfRange(f"{name} must lie in [0, 1], got {value!r}")
    return value


def transport_by_predictive_values(
    source: PerformanceMetrics, target_p_t: float
) -> TransportResult:
    _require(source, "ppv", "npv")
    p = _check_target("target P_T", target_p_t)
    table = ContingencyTable(
        tp=p * source.ppv,
        fp=p * (1.0 - source.ppv),
        fn=(1.0 - p) * (1.0 - source.npv),
        tn=(1.0 - p) * source.npv,
    )
    return TransportResult(table, Method.PREDICTIVE_VALUES, "p_t", p)


def transport_by_accuracy(
    source: PerformanceMetrics, target_prevalence: float
) -> TransportResult:
    _require(source, "se", "sp")
    pi = _check_target("target prevalence", target_prevalence)
    table = ContingencyTable(
        tp=pi * source.se,
        fp=(1.0 - pi) * (1.0 - source.sp),
        fn=pi * (1.0 - source.se),
        tn=(1.0 - pi) * source.sp,
    )
    return TransportResult(table, Method.ACCURACY, "prevalence", pi)


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def _expit(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def logit_adjustment_check(
    source: PerformanceMetrics, target_prevalence: float
) -> LogitAdjustment:
    """Prevalence adjustment on the logit scale with likelihood ratios.

    This is the intercept-shift form of Bayes' rule and should give the same
    predictive values as :func:`transport_by_accuracy`.
    """
    _require(source, "se", "sp")
    se, sp = source.se, source.sp
    if not (0.0 < se < 1.0 and 0.0 < sp < 1.0):
        raise DegenerateAccuracy(f"likelihood ratios need SE, SP in (0, 1); got {se}, {sp}")
    pi = float(target_prevalence)
    if not (0.0 < pi < 1.0):
        raise TargetOutOfRange(f"target prevalence must lie in (0, 1), got {pi!r}")
    plr = se / (1.0 - sp)
    nlr = (1.0 - se) / sp
    base = _logit(pi)
    return LogitAdjustment(
        positive_lr=plr,
        negative_lr=nlr,
        adjusted_ppv=_expit(base + math.log(plr)),
        adjusted_one_minus_npv=_expit(base + math.log(nlr)),
    )


def apply_odds_ratio(p: float, x: float) -> float:
    """Multiply the odds of ``p`` by ``x``."""
    return p * x / (1.0 - p + p * x)


def shift_causes(c: CauseProbabilities, x: float) -> CauseProbabilities:
    return CauseProbabilities(*(apply_odds_ratio(p, x) for p in c.as_tuple()))


def _check_nondegenerate(c: CauseProbabilities) -> None:
    if c.degenerate:
        raise DegenerateCauses(f"cause probabilities must lie in (0, 1): {c.as_tuple()}")


def proportional_odds_objective(c: CauseProbabilities, x: float) -> float:
    """Prevalence after shifting every cause by odds ratio ``x``."""
    _check_nondegenerate(c)
    return prevalence_from_causes(shift_causes(c, x))


def _shifted_prevalence(t: float, u: float, v: float, x: float) -> float:
    # float-only mirror of prevalence_from_causes(shift_causes(...)) for the solver loop
    t = t * x / (1.0 - t + t * x)
    u = u * x / (1.0 - u + u * x)
    v = v * x / (1.0 - v + v * x)
    return t * u + (1.0 - t) * u * v


def _check_open_target(pi: float) -> float:
    pi = float(pi)
    if not (0.0 < pi < 1.0):
        raise TargetOutOfRange(f"target prevalence must lie in (0, 1), got {pi!r}")
    return pi


def solve_common_odds_ratio(
    c: CauseProbabilities, target_prevalence: float, tol: float = DEFAULT_TOL
) -> float:
    """Find the odds ratio that moves the prevalence of ``c`` to the target.

    The objective is continuous and strictly increasing, so the bracket is
    grown geometrically from [1, 1] until it straddles the target and then
    bisected at its geometric midpoint. Iteration stops once the prevalence
    error is within ``tol`` and the bracket is narrow, or the bracket can no
    longer shrink.
    """
    _check_nondegenerate(c)
    pi = _check_open_target(target_prevalence)
    if tol <= 0:
        raise ValueError("tol must be positive")

    t, u, v = c.as_tuple()

    def g(x: float) -> float:
        return _shifted_prevalence(t, u, v, x) - pi

    g1 = g(1.0)
    if g1 == 0.0:
        return 1.0
    lo = hi = 1.0
    glo = ghi = g1
    for _ in range(MAX_EXPANSIONS):
        if g1 < 0:
            lo, glo = hi, ghi
            hi *= BRACKET_FACTOR
            ghi = g(hi)
            if ghi >= 0:
                break
        else:
            hi, ghi = lo, glo
            lo /= BRACKET_FACTOR
            glo = g(lo)
            if glo <= 0:
                break
    else:
        raise SolverError(f"could not bracket prevalence {pi!r} within {MAX_EXPANSIONS} expansions")

    best_x, best_err = (lo, abs(glo)) if abs(glo) < abs(ghi) else (hi, abs(ghi))
    for _ in range(MAX_ITER):
        mid = math.sqrt(lo * hi)
        if not (lo < mid < hi):
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if abs(gm) < best_err:
            best_x, best_err = mid, abs(gm)
        if gm < 0:
            lo = mid
        else:
            hi = mid
        if best_err <= tol and hi - lo <= X_RTOL * hi:
            break
    if best_err > tol:
        raise SolverError(
            f"bisection stalled at |f(x) - pi*| = {best_err:.3g} > tol = {tol:.3g}"
        )
    return best_x


def cubic_coefficients(c: CauseProbabilities, target_prevalence: float) -> CubicCoefficients:
    """Polynomial whose positive real root is the common odds ratio."""
    _check_nondegenerate(c)
    pi = _check_open_target(target_prevalence)
    t, u, v = c.as_tuple()
    tuv = t * u * v
    pairs = t * u + t * v + u * v
    return CubicCoefficients(
        a=(1.0 - pi) * tuv,
        b=(3.0 * pi - 2.0) * tuv - pi * pairs + t * u + u * v,
        c=-pi * (3.0 * tuv - 2.0 * pairs + t + u + v),
        d=-pi * (1.0 - t) * (1.0 - u) * (1.0 - v),
    )


def cubic_positive_root(coeffs: CubicCoefficients) -> float:
    """Positive real root via companion-matrix eigenvalues plus Newton polishing.

    Used as an independent check on :func:`solve_common_odds_ratio`.
    """
    roots = np.roots([coeffs.a, coeffs.b, coeffs.c, coeffs.d])
    real = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and r.real > 0]
    if len(real) != 1:
        raise SolverError(f"expected one positive real root, found {len(real)}")
    x = real[0]
    for _ in range(3):
        deriv = (3 * coeffs.a * x + 2 * coeffs.b) * x + coeffs.c
        if deriv == 0:
            break
        x -= coeffs(x) / deriv
    return float(x)


def transport_proportional_odds(
    c: CauseProbabilities, target_prevalence: float, tol: float = DEFAULT_TOL
) -> TransportResult:
    x = solve_common_odds_ratio(c, target_prevalence, tol)
    shifted = shift_causes(c, x)
    return TransportResult(
        causes_to_table(shifted),
        Method.PROPORTIONAL_ODDS,
        "prevalence",
        float(target_prevalence),
        fitted_odds_ratio=x,
        implied_causes=shifted,
    )
