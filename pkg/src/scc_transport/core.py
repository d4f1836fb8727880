"""Sufficient-component-cause model of a binary prognostic marker.

The outcome is generated as ``D = (T or V) and U`` with three independent
Bernoulli causes: the marker ``T``, a universally required cause ``U`` and an
alternative cause ``V``. Within a single population the cause probabilities
map one-to-one onto the marker-by-outcome contingency table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


class SCCError(ValueError):
    """Base class for every domain error raised by this package."""


class InvalidTable(SCCError):
    pass


class InvalidCauses(SCCError):
    pass


class DegenerateMarker(SCCError):
    """No marker-positives, so P(U) cannot be recovered from the table."""


class DegenerateUniversalCause(SCCError):
    """P(V) is undefined or exceeds one; the table is not SCC-consistent."""


class UndefinedIndex(SCCError):
    def __init__(self, index: str, message: str):
        super().__init__(message)
        self.index = index


class UndefinedMetric(SCCError):
    pass


def _check_probability(name: str, value: float, exc: type[SCCError]) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):  # also rejects NaN
        raise exc(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class ContingencyTable:
    """Joint probabilities of marker status by outcome status.

    Inputs whose cells sum to within 1e-9 of one are renormalized; anything
    further off is rejected.
    """

    tp: float
    fp: float
    fn: float
    tn: float

    def __post_init__(self):
        cells = [
            _check_probability(name, getattr(self, name), InvalidTable)
            for name in ("tp", "fp", "fn", "tn")
        ]
        total = math.fsum(cells)
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InvalidTable(f"cells sum to {total:.12g}, expected 1")
        if abs(total - 1.0) > SUM_TOL:
            cells = [c / total for c in cells]
        for name, c in zip(("tp", "fp", "fn", "tn"), cells):
            object.__setattr__(self, name, c)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.tp, self.fp, self.fn, self.tn)

    @property
    def prevalence(self) -> float:
        return self.tp + self.fn

    @property
    def positivity(self) -> float:
        """P(T=1), the fraction of marker-positives."""
        return self.tp + self.fp


@dataclass(frozen=True)
class CauseProbabilities:
    """Marginal probabilities of the marker, universal and alternative causes."""

    p_t: float
    p_u: float
    p_v: float

    def __post_init__(self):
        for name in ("p_t", "p_u", "p_v"):
            object.__setattr__(
                self, name, _check_probability(name, getattr(self, name), InvalidCauses)
            )

    @property
    def degenerate(self) -> bool:
        return any(p in (0.0, 1.0) for p in self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_t, self.p_u, self.p_v)


@dataclass(frozen=True)
class PerformanceMetrics:
    """SE, SP, PPV and NPV of a table. ``None`` marks a zero-denominator metric."""

    se: Optional[float]
    sp: Optional[float]
    ppv: Optional[float]
    npv: Optional[float]
    prevalence: float

    @property
    def undefined(self) -> list[str]:
        return [k for k in ("se", "sp", "ppv", "npv") if getattr(self, k) is None]


@dataclass(frozen=True)
class StabilityIndices:
    """Quantities that must stay constant for each metric to be transportable."""

    ppv_index: float
    npv_index: float
    se_index: float
    sp_index: float


@dataclass(frozen=True)
class RiskEquation:
    """Binary-marker risk equation ``P(D=1|T) = intercept + slope * T``."""

    intercept: float
    slope: float

    def __call__(self, t: int) -> float:
        return self.intercept + self.slope * t


def causes_to_table(c: CauseProbabilities) -> ContingencyTable:
    tp = c.p_t * c.p_u
    fp = c.p_t * (1.0 - c.p_u)
    fn = (1.0 - c.p_t) * c.p_u * c.p_v
    # equals 1 - tp - fp - fn, written as a product so it cannot go negative
    tn = (1.0 - c.p_t) * (1.0 - c.p_u * c.p_v)
    return ContingencyTable(tp, fp, fn, tn)


def table_to_causes(t: ContingencyTable) -> CauseProbabilities:
    """Invert :func:`causes_to_table`.

    Raises DegenerateMarker when the table has no marker-positives, and
    DegenerateUniversalCause when false negatives exist but P(V) cannot be
    solved for (P(U)=0 or P(T)=1) or would exceed one. When there are no
    false negatives and P(V) is not identified it is reported as 0.
    """
    p_t = t.tp + t.fp
    if p_t == 0.0:
        raise DegenerateMarker("no marker-positives (tp+fp=0): P_U is undefined")
    p_u = t.tp / p_t
    # fn+tn is 1-p_t computed without cancellation
    negatives = t.fn + t.tn
    denom = negatives * p_u
    if denom == 0.0:
        if t.fn > 0.0:
            raise DegenerateUniversalCause(
                "fn > 0 but P_U=0 or P_T=1: P_V is undefined"
            )
        return CauseProbabilities(p_t, p_u, 0.0)
    p_v = t.fn / denom
    if p_v > 1.0 + SUM_TOL:
        raise DegenerateUniversalCause(
            f"implied P_V={p_v:.6g} exceeds 1: table is inconsistent with the SCC model"
        )
    return CauseProbabilities(min(p_t, 1.0), min(p_u, 1.0), min(p_v, 1.0))


def _ratio(num: float, den: float) -> Optional[float]:
    return num / den if den > 0.0 else None


def metrics(t: ContingencyTable) -> PerformanceMetrics:
    return PerformanceMetrics(
        se=_ratio(t.tp, t.tp + t.fn),
        sp=_ratio(t.tn, t.fp + t.tn),
        ppv=_ratio(t.tp, t.tp + t.fp),
        npv=_ratio(t.tn, t.fn + t.tn),
        prevalence=t.tp + t.fn,
    )


def prevalence_from_causes(c: CauseProbabilities) -> float:
    # same association as causes_to_table's tp + fn, so the two agree bitwise
    return c.p_t * c.p_u + (1.0 - c.p_t) * c.p_u * c.p_v


def stability_indices(c: CauseProbabilities) -> StabilityIndices:
    p_t, p_u, p_v = c.as_tuple()
    if p_t == 0.0:
        raise UndefinedIndex("se_index", "se_index undefined for P_T=0")
    if p_t == 1.0:
        raise UndefinedIndex("sp_index", "sp_index undefined for P_T=1")
    if p_u * p_v == 1.0:
        raise UndefinedIndex("sp_index", "sp_index undefined for P_U*P_V=1")
    return StabilityIndices(
        ppv_index=p_u,
        npv_index=p_u * p_v,
        se_index=p_v * (1.0 - p_t) / p_t,
        sp_index=p_t * (1.0 - p_u) / ((1.0 - p_t) * (1.0 - p_u * p_v)),
    )


def risk_equation(m: PerformanceMetrics) -> RiskEquation:
    if m.ppv is None or m.npv is None:
        raise UndefinedMetric(f"risk equation needs PPV and NPV; undefined: {m.undefined}")
    intercept = 1.0 - m.npv
    return RiskEquation(intercept=intercept, slope=m.ppv - intercept)


def symmetric_setup_table(c: CauseProbabilities) -> ContingencyTable:
    """Table for the mirrored setup ``D = (T and V) or U``."""
    p_t, p_u, p_v = c.as_tuple()
    q = (1.0 - p_u) * (1.0 - p_v)
    return ContingencyTable(
        tp=p_t * (1.0 - q),
        fp=p_t * q,
        fn=(1.0 - p_t) * p_u,
        tn=(1.0 - p_t) * (1.0 - p_u),
    )
