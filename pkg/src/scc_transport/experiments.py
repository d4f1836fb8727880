"""End-to-end runners: the worked example, prevalence sweeps and the
information-loss simulation."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    CauseProbabilities,
    ContingencyTable,
    PerformanceMetrics,
    SCCError,
    causes_to_table,
    metrics,
    table_to_causes,
)
from .divergence import kl_divergence
from .popgen import (
    Scenario,
    SeededStream,
    odds_ratio_sweep,
    sample_population_pair,
)
from .transport import (
    DEFAULT_TOL,
    Method,
    transport_by_accuracy,
    transport_by_predictive_values,
    transport_proportional_odds,
)

SOURCE_CAUSES = CauseProbabilities(0.25, 0.75, 0.5)
TARGET_CAUSES = CauseProbabilities(1 / 3, 0.8, 2 / 3)
METHOD_ORDER = (Method.PREDICTIVE_VALUES, Method.ACCURACY, Method.PROPORTIONAL_ODDS)


@dataclass(frozen=True)
class ExampleRow:
    description: str
    causes: CauseProbabilities
    table: ContingencyTable
    metrics: PerformanceMetrics
    fitted_or: Optional[float] = None


def reproduce_worked_example(tol: float = DEFAULT_TOL) -> list[ExampleRow]:
    """Source, true target and the three transported versions of the target."""
    src_table = causes_to_table(SOURCE_CAUSES)
    src_metrics = metrics(src_table)
    tgt_table = causes_to_table(TARGET_CAUSES)
    tgt_prev = tgt_table.prevalence

    rows = [
        ExampleRow("Source population", SOURCE_CAUSES, src_table, src_metrics),
        ExampleRow("Target population", TARGET_CAUSES, tgt_table, metrics(tgt_table)),
    ]
    for name, res in [
        ("By predictive values", transport_by_predictive_values(src_metrics, TARGET_CAUSES.p_t)),
        ("By accuracy", transport_by_accuracy(src_metrics, tgt_prev)),
        ("Proportional odds", transport_proportional_odds(SOURCE_CAUSES, tgt_prev, tol)),
    ]:
        causes = res.implied_causes or table_to_causes(res.implied_table)
        rows.append(
            ExampleRow(name, causes, res.implied_table, metrics(res.implied_table), res.fitted_odds_ratio)
        )
    return rows


@dataclass(frozen=True)
class SweepRow:
    odds_ratio: float
    prevalence: float
    se: Optional[float]
    sp: Optional[float]
    ppv: Optional[float]
    npv: Optional[float]


def log_grid(or_min: float, or_max: float, steps: int) -> list[float]:
    """Log-spaced grid with exact endpoints (and an exact 1 at the centre of a
    symmetric grid such as 1/16..16)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not (or_min > 0 and or_max > 0):
        raise ValueError("odds-ratio bounds must be positive")
    if steps == 1:
        return [float(or_min)]
    ratio = or_max / or_min
    return [or_min * ratio ** (i / (steps - 1)) for i in range(steps)]


def prevalence_sweep(scenario: Scenario, or_grid: Sequence[float]) -> list[SweepRow]:
    rows = []
    for x, causes in sorted(odds_ratio_sweep(scenario, or_grid), key=lambda r: r[0]):
        m = metrics(causes_to_table(causes))
        rows.append(SweepRow(x, m.prevalence, m.se, m.sp, m.ppv, m.npv))
    return rows


@dataclass(frozen=True)
class SimRecord:
    pair_index: int
    method: Method
    d_kl_bits: float
    target_prevalence: float
    fitted_or: Optional[float] = None


@dataclass(frozen=True)
class MethodSummary:
    method: Method
    n: int
    n_infinite: int
    mean_bits: float
    median_bits: float
    p25_bits: float
    p75_bits: float

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "n": self.n,
            "n_infinite": self.n_infinite,
            "mean_bits": self.mean_bits,
            "median_bits": self.median_bits,
            "p25_bits": self.p25_bits,
            "p75_bits": self.p75_bits,
        }


@dataclass(frozen=True)
class SimSummary:
    scenario: str
    n_pairs: int
    master_seed: int
    methods: tuple[MethodSummary, ...]
    skipped: dict = field(default_factory=dict)

    def for_method(self, method: Method) -> MethodSummary:
        return next(m for m in self.methods if m.method is method)


def _evaluate_pair(scenario: Scenario, master_seed: int, index: int, tol: float):
    """Returns (records, skip_reason)."""
    source, target = sample_population_pair(scenario, SeededStream(master_seed, index))
    true_table = causes_to_table(target)
    prev = true_table.prevalence
    src_metrics = metrics(causes_to_table(source))
    try:
        results = [
            transport_by_predictive_values(src_metrics, target.p_t),
            transport_by_accuracy(src_metrics, prev),
            transport_proportional_odds(source, prev, tol),
        ]
    except SCCError as exc:
        return [], type(exc).__name__
    return [
        SimRecord(index, r.method, kl_divergence(true_table, r.implied_table), prev, r.fitted_odds_ratio)
        for r in results
    ], None


def _evaluate_chunk(args):
    scenario, master_seed, indices, tol = args
    return [_evaluate_pair(scenario, master_seed, i, tol) for i in indices]


def summarize(
    records: Sequence[SimRecord], scenario: Scenario, n_pairs: int, master_seed: int, skipped: dict
) -> SimSummary:
    out = []
    for method in METHOD_ORDER:
        vals = [r.d_kl_bits for r in records if r.method is method]
        finite = np.array([v for v in vals if math.isfinite(v)], dtype=float)
        if finite.size:
            mean = float(np.mean(finite))
            p25, med, p75 = (float(q) for q in np.percentile(finite, [25, 50, 75]))
        else:
            mean = med = p25 = p75 = math.nan
        out.append(MethodSummary(method, len(vals), len(vals) - finite.size, mean, med, p25, p75))
    return SimSummary(scenario.label, n_pairs, master_seed, tuple(out), dict(skipped))


def information_loss_sim(
    scenario: Scenario,
    n_pairs: int = 10_000,
    master_seed: int = 0,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
) -> tuple[list[SimRecord], SimSummary]:
    """Score the three transport methods on ``n_pairs`` random population pairs.

    Records come back sorted by pair index then method name, whatever the
    number of workers. Pairs whose transport raises are counted by error
    type in ``summary.skipped`` and produce no records.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if master_seed < 0:
        raise ValueError("master_seed must be non-negative")
    indices = list(range(n_pairs))
    if workers <= 1:
        results = _evaluate_chunk((scenario, master_seed, indices, tol))
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [
                r for part in pool.map(_evaluate_chunk, [(scenario, master_seed, c, tol) for c in chunks])
                for r in part
            ]
    records: list[SimRecord] = []
    skipped: Counter = Counter()
    for recs, reason in results:
        records.extend(recs)
        if reason is not None:
            skipped[reason] += 1
    records.sort(key=lambda r: (r.pair_index, r.method.value))
    return records, summarize(records, scenario, n_pairs, master_seed, skipped)
