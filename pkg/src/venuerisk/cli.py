"""Command-line entry point.

Usage:
    venuerisk simulate --venues venues.csv --visits visits.csv \
        --prevalence 0.001 --out results/
    venuerisk compare --venues venues.csv --visits visits.csv \
        --scenario-a lockdown.txt --scenario-b reopened.txt \
        --prevalence 0.001 --out comparison/
    venuerisk hotspots --results results/venue_results.csv --top 10
    venuerisk gen-synthetic --n-venues 1034 --profile lockdown --seed 7 --out data/

The analysis window is one week (168 hours). Parameters come from CLI
flags and an optional ``key = value`` params file; the documented
prevalence is mandatory because no safe default exists for it.

Exit codes: 0 success, 1 validation or config error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import math
import sys
from pathlib import Path

from .epi import EpiParams
from .errors import ConfigError, InputError
from .ingest import (
    AreaUnit,
    compute_volumes,
    join,
    parse_venues,
    parse_visits,
    write_venues,
    write_visits,
)
from .reporting import (
    TOOL_VERSION,
    atomic_write_text,
    build_manifest,
    canonical_json,
    dump_json,
    histogram_csv,
    utc_now_iso,
    venue_results_csv,
)
from .scenario import (
    BASELINE,
    ScenarioConfig,
    load_scenario_config,
    parse_spacing,
    read_keyvalue,
    run_scenario,
)
from .stats import Scale, classify, histogram, welch_t_test
from .synthetic import PROFILES, GeneratorConfig, generate_dataset

WINDOW_HOURS = 168

_PARAM_FIELDS = frozenset(f.name for f in dataclasses.fields(EpiParams))


class _Parser(argparse.ArgumentParser):
    # usage problems are validation errors (exit 1), not I/O errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_params_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--params", help="key = value params file (q, p, ach, ...)")
    sub.add_argument(
        "--prevalence",
        type=float,
        help="documented community prevalence in [0, 1] (required unless set in --params)",
    )
    sub.add_argument(
        "--underreport-factor",
        type=float,
        help="case under-reporting multiplier, >= 1 (default 15)",
    )


def _add_input_flags(sub: argparse.ArgumentParser, visits_required: bool) -> None:
    sub.add_argument("--venues", required=True, help="venue CSV (venue_id,name,category,area)")
    sub.add_argument(
        "--visits",
        required=visits_required,
        help="visit CSV (venue_id,hour,count), hour in [0, 168)",
    )
    sub.add_argument(
        "--area-unit",
        choices=[u.value for u in AreaUnit],
        default=AreaUnit.SQUARE_METERS.value,
        help="unit of the venue file's area column (default m2)",
    )


def _add_report_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--bins", type=int, default=20, help="histogram bin count (default 20)")
    sub.add_argument(
        "--scale",
        choices=[s.value for s in Scale],
        default=Scale.LINEAR.value,
        help="histogram binning scale (default linear)",
    )
    sub.add_argument(
        "--threshold",
        type=float,
        default=1.0,
        help="weekly infections above this are severe (default 1.0)",
    )
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument(
        "--timestamp",
        help="override the manifest timestamp (ISO 8601) for reproducible manifests",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="venuerisk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the weekly infection model")
    _add_input_flags(p_sim, visits_required=True)
    _add_params_flags(p_sim)
    p_sim.add_argument(
        "--sampling-factor",
        type=float,
        default=10.0,
        help="panel-to-population visit multiplier (default 10)",
    )
    p_sim.add_argument(
        "--spacing",
        help="enforce physical distancing at this spacing, unit suffix required (e.g. 6ft)",
    )
    _add_report_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="run and compare two scenario configs")
    _add_input_flags(p_cmp, visits_required=False)
    _add_params_flags(p_cmp)
    p_cmp.add_argument("--scenario-a", required=True, help="scenario config file A")
    p_cmp.add_argument("--scenario-b", required=True, help="scenario config file B")
    p_cmp.add_argument(
        "--pooled",
        action="store_true",
        help="use the pooled-variance t-test instead of Welch's",
    )
    _add_report_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_hot = sub.add_parser("hotspots", help="rank venues from a results CSV")
    p_hot.add_argument("--results", required=True, help="venue_results.csv from simulate")
    p_hot.add_argument("--threshold", type=float, default=1.0, help="severity threshold")
    p_hot.add_argument("--top", type=int, help="print only the top K venues")
    p_hot.set_defaults(func=cmd_hotspots)

    p_gen = sub.add_parser("gen-synthetic", help="emit a deterministic synthetic dataset")
    p_gen.add_argument("--n-venues", type=int, required=True)
    p_gen.add_argument("--profile", choices=PROFILES, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument(
        "--traffic-multiplier",
        type=float,
        help="pre-pandemic traffic level as a multiple of lockdown (default 4)",
    )
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--timestamp", help="override the manifest timestamp (ISO 8601)")
    p_gen.set_defaults(func=cmd_gen_synthetic)

    return parser


def _resolve_params(args) -> EpiParams:
    """Merge params file and CLI flags into a validated EpiParams."""
    values: dict[str, float] = {}
    if args.params:
        with open(args.params, encoding="utf-8-sig") as handle:
            pairs = read_keyvalue(handle)
        for key, raw in pairs.items():
            if key not in _PARAM_FIELDS:
                raise ConfigError(f"unknown params file key {key!r}")
            try:
                values[key] = float(raw)
            except ValueError:
                raise ConfigError(f"params file key {key!r} value {raw!r} is not a number") from None
    if args.prevalence is not None:
        values["documented_prevalence"] = args.prevalence
    if args.underreport_factor is not None:
        values["underreport_factor"] = args.underreport_factor
    if "documented_prevalence" not in values:
        raise ConfigError(
            "documented prevalence is required: pass --prevalence or set "
            "documented_prevalence in the params file (there is no safe default)"
        )
    return EpiParams(**values)


def _load_base_input(args, params: EpiParams):
    """Parse venue and (optional) visit files into a raw SimulationInput."""
    with open(args.venues, encoding="utf-8-sig") as handle:
        venues = parse_venues(handle, args.area_unit)
    venues = compute_volumes(venues, params.ceiling_height)
    visits = {}
    if args.visits:
        with open(args.visits, encoding="utf-8-sig") as handle:
            visits = parse_visits(handle, WINDOW_HOURS)
    return join(venues, visits, WINDOW_HOURS, sampling_factor_applied=1.0)


def _combined_range(values_a, values_b, scale: Scale):
    """Shared histogram span so two exports overlay on the same bins."""
    if scale is Scale.LOG10:
        pool = [v for v in list(values_a) + list(values_b) if math.isfinite(v) and v > 0]
    else:
        pool = [v for v in list(values_a) + list(values_b) if math.isfinite(v)]
    if not pool:
        return None
    return min(pool), max(pool)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    params = _resolve_params(args)
    base = _load_base_input(args, params)
    spacing = parse_spacing(args.spacing) if args.spacing else None
    config = ScenarioConfig(
        name="simulate",
        visit_source=BASELINE,
        sampling_factor=args.sampling_factor,
        spacing=spacing,
    )
    outcome = run_scenario(base, config, params, args.threshold)

    weekly = [r.weekly_infections for r in outcome.results.values()]
    hist = histogram(weekly, args.bins, args.scale)
    manifest = build_manifest(
        [args.venues, args.visits], params, [config], timestamp=args.timestamp
    )
    mhash = manifest.manifest_hash

    summary = {
        "manifest_sha256": mhash,
        "scenario": config.name,
        "venue_count": len(outcome.results),
        "severe_count": outcome.severe_count,
        "mild_count": outcome.mild_count,
        "severity_threshold": args.threshold,
        "total_expected_infections": math.fsum(weekly),
        "effective_prevalence": params.effective_prevalence,
        "sampling_factor": args.sampling_factor,
        "spacing_m": spacing,
        "histogram": {
            "scale": hist.scale.value,
            "bins": len(hist.counts),
            "excluded_count": hist.excluded_count,
        },
    }

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out_dir / "venue_results.csv", venue_results_csv(outcome.results, base.venues, mhash))
    atomic_write_text(out_dir / "histogram.csv", histogram_csv(hist, mhash))
    atomic_write_text(out_dir / "summary.json", dump_json(summary))
    atomic_write_text(out_dir / "manifest.json", dump_json(manifest.to_dict()))

    print(
        f"venues={summary['venue_count']} severe={outcome.severe_count} "
        f"mild={outcome.mild_count} total_expected_infections={summary['total_expected_infections']!r}"
    )
    print(f"reports written to {out_dir}")
    return 0


def cmd_compare(args) -> int:
    params = _resolve_params(args)
    base = _load_base_input(args, params)
    config_a = load_scenario_config(args.scenario_a)
    config_b = load_scenario_config(args.scenario_b)
    for config in (config_a, config_b):
        if config.visit_source == BASELINE and not args.visits:
            raise ConfigError(
                f"scenario {config.name!r} uses the baseline visit source but --visits was not given"
            )

    result_a = run_scenario(base, config_a, params, args.threshold)
    result_b = run_scenario(base, config_b, params, args.threshold)
    weekly_a = [r.weekly_infections for r in result_a.results.values()]
    weekly_b = [r.weekly_infections for r in result_b.results.values()]

    comparison = welch_t_test(weekly_a, weekly_b, pooled=args.pooled)
    span = _combined_range(weekly_a, weekly_b, Scale(args.scale))
    hist_a = histogram(weekly_a, args.bins, args.scale, value_range=span)
    hist_b = histogram(weekly_b, args.bins, args.scale, value_range=span)

    input_paths = [args.venues, args.scenario_a, args.scenario_b]
    if args.visits:
        input_paths.append(args.visits)
    for config in (config_a, config_b):
        if config.visit_source != BASELINE:
            input_paths.append(config.visit_source)
    manifest = build_manifest(input_paths, params, [config_a, config_b], timestamp=args.timestamp)
    mhash = manifest.manifest_hash

    report = {
        "manifest_sha256": mhash,
        "scenario_a": {
            "name": config_a.name,
            "severe_count": result_a.severe_count,
            "mild_count": result_a.mild_count,
            "mean_weekly_infections": comparison.mean_a,
        },
        "scenario_b": {
            "name": config_b.name,
            "severe_count": result_b.severe_count,
            "mild_count": result_b.mild_count,
            "mean_weekly_infections": comparison.mean_b,
        },
        "t_stat": comparison.t_stat,
        "degrees_of_freedom": comparison.degrees_of_freedom,
        "p_value": comparison.p_value,
        "pooled": args.pooled,
        "severity_threshold": args.threshold,
        "histogram": {
            "scale": args.scale,
            "bins": args.bins,
            "excluded_count_a": hist_a.excluded_count,
            "excluded_count_b": hist_b.excluded_count,
        },
    }

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out_dir / "comparison.json", dump_json(report))
    atomic_write_text(out_dir / "histogram_a.csv", histogram_csv(hist_a, mhash))
    atomic_write_text(out_dir / "histogram_b.csv", histogram_csv(hist_b, mhash))
    atomic_write_text(out_dir / "manifest.json", dump_json(manifest.to_dict()))

    print(f"scenario_a {config_a.name}: severe={result_a.severe_count} mild={result_a.mild_count}")
    print(f"scenario_b {config_b.name}: severe={result_b.severe_count} mild={result_b.mild_count}")
    print(
        f"t={comparison.t_stat!r} df={comparison.degrees_of_freedom!r} "
        f"p={comparison.p_value!r}"
    )
    print(f"reports written to {out_dir}")
    return 0


def cmd_hotspots(args) -> int:
    with open(args.results, encoding="utf-8-sig") as handle:
        lines = [ln for ln in handle if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise InputError(f"results file {args.results!r} is empty")
    required = {"venue_id", "name", "weekly_infections"}
    missing = required - set(reader.fieldnames)
    if missing:
        raise InputError(
            f"results file {args.results!r} lacks column(s): " + ", ".join(sorted(missing))
        )

    entries = []
    for row in reader:
        try:
            weekly = float(row["weekly_infections"])
        except ValueError:
            raise InputError(
                f"bad weekly_infections value {row['weekly_infections']!r} "
                f"for venue {row['venue_id']!r}"
            ) from None
        entries.append((row["venue_id"], row["name"], weekly))

    entries.sort(key=lambda e: (-e[2], e[0]))
    if args.top is not None:
        entries = entries[: max(args.top, 0)]

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["rank", "venue_id", "name", "weekly_infections", "severity"])
    for rank, (venue_id, name, weekly) in enumerate(entries, start=1):
        writer.writerow([rank, venue_id, name, repr(weekly), classify(weekly, args.threshold).value])
    return 0


def cmd_gen_synthetic(args) -> int:
    overrides = {}
    if args.traffic_multiplier is not None:
        overrides["pre_pandemic_level"] = args.traffic_multiplier
    config = GeneratorConfig(
        n_venues=args.n_venues, profile=args.profile, seed=args.seed, **overrides
    )
    venues, visits = generate_dataset(config)

    payload = {
        "tool_version": TOOL_VERSION,
        "generator_config": dataclasses.asdict(config),
    }
    mhash = hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()
    manifest = {
        **payload,
        "timestamp": args.timestamp if args.timestamp else utc_now_iso(),
        "manifest_sha256": mhash,
    }

    venue_buf = io.StringIO()
    write_venues(venues.values(), venue_buf, comment=f"manifest_sha256: {mhash}")
    visit_buf = io.StringIO()
    write_visits(visits.values(), visit_buf, comment=f"manifest_sha256: {mhash}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out_dir / "venues.csv", venue_buf.getvalue())
    atomic_write_text(out_dir / "visits.csv", visit_buf.getvalue())
    atomic_write_text(out_dir / "manifest.json", dump_json(manifest))

    print(f"generated {config.n_venues} venues ({config.profile} traffic) in {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
