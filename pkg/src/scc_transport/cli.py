"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 numeric (solver) failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from .core import (
    CauseProbabilities,
    ContingencyTable,
    PerformanceMetrics,
    SCCError,
    causes_to_table,
    metrics,
    table_to_causes,
)
from .experiments import information_loss_sim, log_grid, prevalence_sweep, reproduce_worked_example
from .popgen import BASE_CAUSES, Scenario, ScenarioKind
from .transport import (
    SolverError,
    transport_by_accuracy,
    transport_by_predictive_values,
    transport_proportional_odds,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

SWEEP_HEADER = ["odds_ratio", "prevalence", "se", "sp", "ppv", "npv"]
RECORD_HEADER = ["pair_index", "method", "d_kl_bits", "target_prevalence", "fitted_or"]
SUMMARY_KEYS = ["method", "n", "n_infinite", "mean_bits", "median_bits", "p25_bits", "p75_bits"]
CAUSE_KEYS = ["p_t", "p_u", "p_v"]
TABLE_KEYS = ["tp", "fp", "fn", "tn"]
METRIC_KEYS = ["se", "sp", "ppv", "npv", "prevalence"]


class UsageError(Exception):
    pass


def fmt(value: Optional[float]) -> str:
    """17 significant digits: lossless for doubles. ``None`` becomes empty."""
    if value is None:
        return ""
    return format(value, ".17g")


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None


def _parse_causes(text: str) -> CauseProbabilities:
    return CauseProbabilities(*_floats(text, 3, "causes"))


def _parse_table(text: str) -> ContingencyTable:
    return ContingencyTable(*_floats(text, 4, "table"))


def _rho(text: str) -> str | float:
    if text == "maxent":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"rho must be a number in [0, 1] or 'maxent', got {text!r}")


def _write_csv(header: list[str], rows: list[list[str]], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _snapshot(causes: CauseProbabilities, table: ContingencyTable, m: PerformanceMetrics) -> dict:
    out = dict(zip(CAUSE_KEYS, causes.as_tuple()))
    out.update(zip(TABLE_KEYS, table.as_tuple()))
    out.update({k: getattr(m, k) for k in METRIC_KEYS})
    return out


def _emit_snapshot(values: dict, fmt_kind: str, out) -> None:
    if fmt_kind == "json":
        json.dump(values, out, indent=2)
        out.write("\n")
    elif fmt_kind == "csv":
        keys = list(values)
        _write_csv(keys, [[fmt(values[k]) if not isinstance(values[k], str) else values[k] for k in keys]], out)
    else:
        def join(keys):
            return ",".join("undefined" if values[k] is None else repr(values[k]) for k in keys)

        out.write(f"causes  {','.join(CAUSE_KEYS)}: {join(CAUSE_KEYS)}\n")
        out.write(f"table   {','.join(TABLE_KEYS)}: {join(TABLE_KEYS)}\n")
        out.write(f"metrics {','.join(METRIC_KEYS)}: {join(METRIC_KEYS)}\n")
        for k in ("method", "fitted_or"):
            if k in values:
                out.write(f"{k}: {values[k]}\n")


def cmd_map(args, out) -> int:
    if args.from_causes is not None:
        causes = _parse_causes(args.from_causes)
        table = causes_to_table(causes)
    else:
        table = _parse_table(args.from_table)
        causes = table_to_causes(table)
    _emit_snapshot(_snapshot(causes, table, metrics(table)), args.format, out)
    return EXIT_OK


def cmd_transport(args, out) -> int:
    if (args.source_causes is None) == (args.source_table is None):
        raise UsageError("give exactly one of --source-causes or --source-table")
    if args.source_causes is not None:
        source = _parse_causes(args.source_causes)
        src_table = causes_to_table(source)
    else:
        src_table = _parse_table(args.source_table)
        source = None
    src_metrics = metrics(src_table)

    if args.method == "pv":
        if args.target_pt is None or args.target_prev is not None:
            raise UsageError("--method pv requires --target-pt (and not --target-prev)")
        res = transport_by_predictive_values(src_metrics, args.target_pt)
    else:
        if args.target_prev is None or args.target_pt is not None:
            raise UsageError(f"--method {args.method} requires --target-prev (and not --target-pt)")
        if args.method == "acc":
            res = transport_by_accuracy(src_metrics, args.target_prev)
        else:
            if source is None:
                source = table_to_causes(src_table)
            res = transport_proportional_odds(source, args.target_prev, args.tol)

    implied = res.implied_causes or table_to_causes(res.implied_table)
    values = _snapshot(implied, res.implied_table, metrics(res.implied_table))
    values["method"] = res.method.value
    if res.fitted_odds_ratio is not None:
        values["fitted_or"] = res.fitted_odds_ratio
    _emit_snapshot(values, args.format, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    kind = ScenarioKind.VARY_ALL if args.scenario == "tuv" else ScenarioKind(args.scenario)
    base = _parse_causes(args.base) if args.base else BASE_CAUSES
    scenario = Scenario(kind, base=base)
    rows = prevalence_sweep(scenario, log_grid(args.or_min, args.or_max, args.steps))
    _write_csv(
        SWEEP_HEADER,
        [[fmt(getattr(r, k)) for k in SWEEP_HEADER] for r in rows],
        out,
    )
    return EXIT_OK


def _scenario_from_args(args) -> Scenario:
    name = args.scenario
    if name == "maxent" or args.rho == "maxent":
        if name not in ("maxent", "all", "tuv"):
            raise UsageError("--rho maxent only applies to --scenario all")
        return Scenario(ScenarioKind.MAX_ENTROPY)
    if name in ("all", "tuv"):
        return Scenario(ScenarioKind.VARY_ALL, rho=0.0 if args.rho is None else args.rho)
    if args.rho is not None:
        raise UsageError("--rho only applies to --scenario all")
    return Scenario(ScenarioKind(name))


def write_records(records, out) -> None:
    _write_csv(
        RECORD_HEADER,
        [
            [str(r.pair_index), r.method.value, fmt(r.d_kl_bits), fmt(r.target_prevalence), fmt(r.fitted_or)]
            for r in records
        ],
        out,
    )


def summary_json(summary) -> str:
    doc = {
        "scenario": summary.scenario,
        "n_pairs": summary.n_pairs,
        "seed": summary.master_seed,
        "skipped": summary.skipped,
        "methods": [m.as_dict() for m in summary.methods],
    }
    return json.dumps(doc, indent=2) + "\n"


def summary_text(summary) -> str:
    buf = io.StringIO()
    buf.write(f"scenario={summary.scenario} n_pairs={summary.n_pairs} seed={summary.master_seed}\n")
    buf.write(f"{'method':<18}{'n':>7}{'n_inf':>7}{'mean':>11}{'median':>11}{'p25':>11}{'p75':>11}\n")
    for m in summary.methods:
        buf.write(
            f"{m.method.value:<18}{m.n:>7}{m.n_infinite:>7}"
            f"{m.mean_bits:>11.5f}{m.median_bits:>11.5f}{m.p25_bits:>11.5f}{m.p75_bits:>11.5f}\n"
        )
    if summary.skipped:
        buf.write(f"skipped: {summary.skipped}\n")
    return buf.getvalue()


def cmd_simulate(args, out) -> int:
    scenario = _scenario_from_args(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.out == "records" and args.seed is None:
        raise UsageError("--seed is required for records output")
    seed = 0 if args.seed is None else args.seed
    if seed < 0:
        raise UsageError("--seed must be non-negative")
    records, summary = information_loss_sim(scenario, args.n, seed, workers=args.workers)
    if args.out == "records":
        write_records(records, out)
        if args.summary_file:
            with open(args.summary_file, "w") as fh:
                fh.write(summary_json(summary))
    elif args.format == "text":
        out.write(summary_text(summary))
    else:
        out.write(summary_json(summary))
    return EXIT_OK


def cmd_example(args, out) -> int:
    def r3(vals):
        return "{" + ",".join(f"{v:.3f}" for v in vals) + "}"

    rows = reproduce_worked_example()
    out.write(
        f"{'Description':<22}{'{P_T,P_U,P_V}':<22}{'Contingency table':<30}"
        f"{'SE':>7}{'SP':>7}{'PPV':>7}{'NPV':>7}{'Prev':>7}\n"
    )
    for row in rows:
        m = row.metrics
        out.write(
            f"{row.description:<22}{r3(row.causes.as_tuple()):<22}{r3(row.table.as_tuple()):<30}"
            f"{m.se:>7.3f}{m.sp:>7.3f}{m.ppv:>7.3f}{m.npv:>7.3f}{m.prevalence:>7.3f}\n"
        )
    po = rows[-1]
    out.write(f"\nProportional odds: common odds ratio {po.fitted_or:.3f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="scc-transport",
        description="Sufficient-component-cause model of a binary marker and its transportation.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("map", help="convert between cause probabilities and a contingency table")
    g = m.add_mutually_exclusive_group(required=True)
    g.add_argument("--from-table", metavar="TP,FP,FN,TN")
    g.add_argument("--from-causes", metavar="PT,PU,PV")
    m.add_argument("--format", choices=["text", "json", "csv"], default="text")
    m.set_defaults(func=cmd_map)

    t = sub.add_parser("transport", help="transport a marker to a target population")
    t.add_argument("--method", choices=["pv", "acc", "po"], required=True)
    t.add_argument("--source-causes", metavar="PT,PU,PV")
    t.add_argument("--source-table", metavar="TP,FP,FN,TN")
    t.add_argument("--target-pt", type=float)
    t.add_argument("--target-prev", type=float)
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--format", choices=["text", "json", "csv"], default="text")
    t.set_defaults(func=cmd_transport)

    s = sub.add_parser("sweep", help="metrics along an odds-ratio sweep (CSV)")
    s.add_argument("--scenario", choices=["t", "u", "v", "tu", "tv", "uv", "tuv"], required=True)
    s.add_argument("--base", metavar="PT,PU,PV")
    s.add_argument("--or-min", type=float, default=0.0625)
    s.add_argument("--or-max", type=float, default=16.0)
    s.add_argument("--steps", type=int, default=101)
    s.set_defaults(func=cmd_sweep)

    sim = sub.add_parser("simulate", help="information-loss simulation")
    sim.add_argument(
        "--scenario", choices=["t", "u", "v", "tu", "tv", "uv", "all", "tuv", "maxent"], required=True
    )
    sim.add_argument("--rho", type=_rho, help="latent correlation for 'all', or 'maxent'")
    sim.add_argument("--n", type=int, default=10_000)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", choices=["records", "summary"], default="records")
    sim.add_argument("--format", choices=["json", "text"], default="json", help="summary format")
    sim.add_argument("--summary-file", help="also write the JSON summary here (records mode)")
    sim.add_argument("--workers", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    e = sub.add_parser("example", help="reproduce the five-row worked example")
    e.set_defaults(func=cmd_example)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except SolverError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except (UsageError, SCCError, ValueError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
