"""Population-generating mechanisms.

Deterministic odds-ratio sweeps shift the varying causes of a base population
by a common odds ratio. Random scenarios draw the varying causes from a
standard logit-normal distribution (optionally equicorrelated on the logit
scale) or, for the maximum-entropy scenario, from independent uniforms.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence`` with a
spawn key of ``(pair_index, side)``, so every draw depends only on the master
seed and its index, never on evaluation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import CauseProbabilities, SCCError
from .transport import apply_odds_ratio

RNG_SCHEME = "numpy.PCG64+SeedSequence(spawn_key=(index, side))/v1"
BASE_CAUSES = CauseProbabilities(0.25, 0.75, 0.5)


class UnsupportedScenario(SCCError):
    pass


class ScenarioKind(str, enum.Enum):
    VARY_T = "t"
    VARY_U = "u"
    VARY_V = "v"
    VARY_TU = "tu"
    VARY_TV = "tv"
    VARY_UV = "uv"
    VARY_ALL = "all"
    MAX_ENTROPY = "maxent"

    @property
    def varying(self) -> tuple[bool, bool, bool]:
        """Which of (T, U, V) vary under this mechanism."""
        if self is ScenarioKind.VARY_ALL or self is ScenarioKind.MAX_ENTROPY:
            return (True, True, True)
        return tuple(ch in self.value for ch in "tuv")


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    rho: float = 0.0
    base: CauseProbabilities = field(default=BASE_CAUSES)

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        if self.base.degenerate:
            raise ValueError(f"base causes must be non-degenerate: {self.base}")

    @property
    def label(self) -> str:
        if self.kind is ScenarioKind.VARY_ALL:
            return f"all(rho={self.rho:g})"
        return self.kind.value


@dataclass(frozen=True)
class SeededStream:
    master_seed: int
    substream_index: int

    def generator(self, side: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(
            self.master_seed, spawn_key=(self.substream_index, side)
        )
        return np.random.Generator(np.random.PCG64(seq))


def odds_ratio_sweep(
    scenario: Scenario, or_values: Iterable[float]
) -> list[tuple[float, CauseProbabilities]]:
    if scenario.kind is ScenarioKind.MAX_ENTROPY:
        raise UnsupportedScenario("max-entropy scenario has no odds-ratio sweep")
    mask = scenario.kind.varying
    base = scenario.base.as_tuple()
    out = []
    for x in or_values:
        x = float(x)
        if not (x > 0.0 and math.isfinite(x)):
            raise ValueError(f"odds ratios must be finite and positive, got {x!r}")
        shifted = [apply_odds_ratio(p, x) if vary else p for p, vary in zip(base, mask)]
        out.append((x, CauseProbabilities(*shifted)))
    return out


def _logistic(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def equicorrelation_cholesky(rho: float, dim: int = 3) -> np.ndarray:
    corr = np.full((dim, dim), rho)
    np.fill_diagonal(corr, 1.0)
    return np.linalg.cholesky(corr)


def _draw(scenario: Scenario, rng: np.random.Generator) -> CauseProbabilities:
    if scenario.kind is ScenarioKind.MAX_ENTROPY:
        u = rng.random(3)
        while np.any(u == 0.0):  # open interval
            u = np.where(u == 0.0, rng.random(3), u)
        return CauseProbabilities(*map(float, u))

    if scenario.kind is ScenarioKind.VARY_ALL:
        if scenario.rho == 1.0:
            z = np.repeat(rng.standard_normal(), 3)
        else:
            z = equicorrelation_cholesky(scenario.rho) @ rng.standard_normal(3)
        return CauseProbabilities(*map(float, _logistic(z)))

    mask = scenario.kind.varying
    z = rng.standard_normal(sum(mask))
    drawn = iter(_logistic(z))
    vals = [float(next(drawn)) if vary else p for p, vary in zip(scenario.base.as_tuple(), mask)]
    return CauseProbabilities(*vals)


def sample_causes(scenario: Scenario, stream: SeededStream) -> CauseProbabilities:
    return _draw(scenario, stream.generator(0))


def sample_population_pair(
    scenario: Scenario, stream: SeededStream
) -> tuple[CauseProbabilities, CauseProbabilities]:
    """Independent source and target draws for pair ``stream.substream_index``."""
    return _draw(scenario, stream.generator(0)), _draw(scenario, stream.generator(1))


def sample_many(scenario: Scenario, master_seed: int, indices: Sequence[int]) -> list[CauseProbabilities]:
    return [sample_causes(scenario, SeededStream(master_seed, i)) for i in indices]
