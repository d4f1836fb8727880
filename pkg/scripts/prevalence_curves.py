"""Write one CSV per population-generating mechanism with metrics along an
odds-ratio sweep of the base population."""

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from scc_transport.cli import SWEEP_HEADER, fmt
from scc_transport.experiments import log_grid, prevalence_sweep
from scc_transport.popgen import Scenario, ScenarioKind


@dataclass
class SweepConfig:
    out_dir: Path = Path("results/sweeps")
    or_min: float = 0.0625
    or_max: float = 16.0
    steps: int = 101
    kinds: tuple = ("t", "u", "v", "tu", "tv", "uv", "all")


def run(cfg: SweepConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    grid = log_grid(cfg.or_min, cfg.or_max, cfg.steps)
    for kind in cfg.kinds:
        rows = prevalence_sweep(Scenario(ScenarioKind(kind)), grid)
        path = cfg.out_dir / f"sweep_{kind}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SWEEP_HEADER)
            w.writerows([fmt(getattr(r, k)) for k in SWEEP_HEADER] for r in rows)
        prev = [r.prevalence for r in rows]
        print(f"{kind:>4}: prevalence {prev[0]:.3f}..{prev[-1]:.3f} -> {path}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", type=Path, default=SweepConfig.out_dir)
    p.add_argument("--steps", type=int, default=SweepConfig.steps)
    a = p.parse_args()
    run(SweepConfig(out_dir=a.out_dir, steps=a.steps))
