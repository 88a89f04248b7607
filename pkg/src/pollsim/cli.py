"""Command-line frontend.

Commands: ``simulate``, ``plan``, ``threshold``, ``sweep``, ``queue-stop`` and
``replay``. Every command writes its delimited outputs plus a
``manifest.json`` capturing the fully resolved parameters; ``replay`` re-runs
a manifest and reproduces the delimited outputs byte for byte. Real numbers
in CSV files always carry six decimal places so byte-level comparison is
meaningful.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .core import ScenarioConfig, ServiceModel, minute_trace, run_replication
from .errors import BudgetError, ValidationError
from .planner import (
    PrecinctRecord,
    max_vote_time,
    queue_stop_max_voters,
    registered_per_machine,
    roster_report,
)
from .profiles import DEFAULT_PROFILE_NAME, build_profile, named_profile, profile_names
from .stats import (
    DEFAULT_THRESHOLDS,
    capacity_threshold,
    exceedance,
    histogram,
    replicate,
    worst_replication_indices,
)
from .sweep import (
    DEFAULT_MAX_TOTAL_REPLICATIONS,
    DEFAULT_SWEEP_THRESHOLDS,
    ExceedanceStatistic,
    QuantileStatistic,
    SweepAxis,
    SweepSpec,
    sweep_1d,
    sweep_2d,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_BUDGET = 4

DEFAULT_SEED = 12345
DEFAULT_OUT_DIR = "pollsim-output"
THREADS_ENV_VAR = "POLLSIM_THREADS"


def _fmt(value) -> str:
    """Fixed CSV formatting: integers bare, reals with six decimals."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6f}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(out_dir: Path, command: str, params: dict, outputs) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "base_seed": params.get("seed"),
        "parameters": params,
        "outputs": sorted(outputs),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def shipped_scenario_names() -> list[str]:
    root = resources.files("pollsim").joinpath("scenarios")
    return sorted(entry.name[:-5] for entry in root.iterdir() if entry.name.endswith(".json"))


def load_shipped_scenario(name: str) -> dict:
    entry = resources.files("pollsim").joinpath("scenarios").joinpath(f"{name}.json")
    if not entry.is_file():
        raise ValidationError(
            f"unknown scenario {name!r}; shipped: {', '.join(shipped_scenario_names())}"
        )
    return json.loads(entry.read_text(encoding="utf-8"))


def _env_threads() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pick(*candidates):
    """First value that is not None."""
    for value in candidates:
        if value is not None:
            return value
    return None


def _parse_grid(text: str) -> list[float]:
    """Grid values from 'lo:hi:step' (inclusive ends) or a comma list."""
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise ValidationError(f"grid range must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in pieces)
        if step <= 0 or hi < lo:
            raise ValidationError("grid range needs hi >= lo and step > 0")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [round(lo + k * step, 10) for k in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_threshold_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


# --- parameter resolution ----------------------------------------------------

def _resolve_scenario_params(args) -> dict:
    """Merge CLI flags over an optional scenario file over the defaults."""
    data: dict = {}
    if getattr(args, "scenario", None):
        data = load_shipped_scenario(args.scenario)
    elif getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))

    servers = int(_pick(getattr(args, "servers", None), data.get("servers"), 10))
    day_minutes = float(_pick(getattr(args, "day_minutes", None), data.get("day_minutes"), 780))

    vote_minutes = getattr(args, "vote_minutes", None)
    cycle_seconds = getattr(args, "cycle_seconds", None)
    if vote_minutes is not None and cycle_seconds is not None:
        raise ValidationError("give the service mean as minutes or seconds, not both")
    mean_minutes = vote_minutes if vote_minutes is not None else (
        cycle_seconds / 60.0 if cycle_seconds is not None else None
    )
    mean_minutes = float(_pick(mean_minutes, data.get("service_mean_minutes"), 5.0))

    voters_per_server = getattr(args, "voters_per_server", None)
    expected = getattr(args, "expected_voters", None)
    if expected is None and voters_per_server is not None:
        expected = voters_per_server * servers
    expected = float(_pick(expected, data.get("expected_voters"), 150.0 * servers))

    profile_name = _pick(getattr(args, "profile", None), data.get("profile"))
    fractions = data.get("hourly_fractions")
    if getattr(args, "profile", None) is not None:
        fractions = None  # an explicit profile flag beats file fractions
    if fractions is None:
        profile_name = profile_name or DEFAULT_PROFILE_NAME
        profile = named_profile(profile_name)
        if profile.day_minutes != day_minutes:
            raise ValidationError(
                f"profile {profile_name!r} describes a {profile.day_minutes:g}-minute day, "
                f"not {day_minutes:g} minutes; supply hourly_fractions instead"
            )
        fractions = profile.hourly_fractions()

    return {
        "servers": servers,
        "expected_voters": expected,
        "day_minutes": day_minutes,
        "profile_name": profile_name,
        "hourly_fractions": [float(f) for f in fractions],
        "service_kind": str(_pick(getattr(args, "service", None), data.get("service_kind"), "exponential")),
        "service_mean_minutes": mean_minutes,
        "service_dispersion": float(
            _pick(getattr(args, "dispersion", None), data.get("service_dispersion"), 0.0)
        ),
        "seed": int(_pick(getattr(args, "seed", None), data.get("seed"), DEFAULT_SEED)),
    }


def _config_from_params(params: dict) -> ScenarioConfig:
    profile = build_profile(params["day_minutes"], params["hourly_fractions"])
    service = ServiceModel(
        params["service_kind"],
        params["service_mean_minutes"],
        params["service_dispersion"],
    )
    return ScenarioConfig(
        servers=params["servers"],
        expected_voters=params["expected_voters"],
        profile=profile,
        service=service,
        seed=params["seed"],
    )


def _prepare_out_dir(args) -> Path:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


# --- simulate -----------------------------------------------------------------

def run_simulate(params: dict, out_dir: Path, workers: int = 1) -> list[str]:
    config = _config_from_params(params)
    n = params["replications"]
    summary = replicate(config, n, workers=workers)
    outputs = []

    rows = []
    for statistic in ("max_wait", "close_delay"):
        table = exceedance(summary, statistic, params["thresholds"])
        for t, fraction, count in zip(table.thresholds, table.fractions, table.counts):
            rows.append([statistic, _fmt(t), _fmt(fraction), _fmt(count), _fmt(n)])
    _write_csv(
        out_dir / "exceedance.csv",
        ["statistic", "threshold_minutes", "fraction", "count", "replications"],
        rows,
    )
    outputs.append("exceedance.csv")

    hists = {}
    for statistic in ("max_wait", "close_delay"):
        hist = histogram(summary.values(statistic), params["bin_width"])
        hists[statistic] = hist
        rows = [
            [_fmt(float(lo)), _fmt(float(hi)), _fmt(int(c)), _fmt(float(z))]
            for lo, hi, c, z in zip(
                hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts, hist.normalized_peak
            )
        ]
        name = f"histogram_{statistic}.csv"
        _write_csv(
            out_dir / name,
            ["bin_start_minutes", "bin_end_minutes", "count", "normalized"],
            rows,
        )
        outputs.append(name)

    traces = []
    if params["worst_k"] > 0:
        rows = []
        for rep in worst_replication_indices(summary, params["worst_k"]):
            outcome = run_replication(config, rep)
            minutes, queue, wait = minute_trace(outcome, config.day_minutes)
            traces.append((rep, minutes, queue, wait))
            for m, q, w in zip(minutes, queue, wait):
                rows.append([_fmt(int(rep)), _fmt(int(m)), _fmt(int(q)), _fmt(float(w))])
        _write_csv(
            out_dir / "worst_traces.csv",
            ["replication", "minute", "queue_length", "wait_minutes"],
            rows,
        )
        outputs.append("worst_traces.csv")

    if params["figures"]:
        from .figures import save_distribution_figure, save_trace_figure

        save_distribution_figure(
            hists["max_wait"], hists["close_delay"], out_dir / "distributions.png"
        )
        outputs.append("distributions.png")
        if traces:
            save_trace_figure(traces, config.day_minutes, out_dir / "worst_traces.png")
            outputs.append("worst_traces.png")

    print(
        f"simulated {n} elections: {config.servers} servers, "
        f"{config.expected_voters:g} expected voters, "
        f"{config.service.kind} service mean {config.service.mean_minutes:g} min"
    )
    print(
        f"max wait    mean {summary.max_waits.mean():.2f} min, "
        f"P(>60) {np.mean(summary.max_waits > 60) * 100:.2f}%"
    )
    print(
        f"close delay mean {summary.close_delays.mean():.2f} min, "
        f"P(>45) {np.mean(summary.close_delays > 45) * 100:.2f}%"
    )
    return outputs


def cmd_simulate(args) -> int:
    params = _resolve_scenario_params(args)
    params.update(
        {
            "replications": args.replications,
            "thresholds": _parse_threshold_list(args.thresholds),
            "bin_width": args.bin_width,
            "worst_k": args.worst_k,
            "figures": not args.no_figures,
        }
    )
    if params["worst_k"] < 0:
        raise ValidationError("--worst-k must be >= 0")
    out_dir = _prepare_out_dir(args)
    outputs = run_simulate(params, out_dir, workers=args.threads)
    _write_manifest(out_dir, "simulate", params, outputs)
    print(f"wrote {out_dir}/manifest.json and {len(outputs)} output files")
    return EXIT_OK


# --- plan ---------------------------------------------------------------------

def _parse_roster(path: Path):
    """Rows of (line_number, PrecinctRecord) plus per-line parse errors."""
    entries = []
    errors = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty roster") from None
        header = [h.strip().lower() for h in header]
        if header[:2] != ["precinct_id", "registered"]:
            raise ValidationError(
                f"{path}: header must start with precinct_id,registered"
            )
        has_machines = len(header) > 2 and header[2] == "machines"
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                if len(row) < 2:
                    raise ValueError("need precinct_id and registered")
                registered = int(row[1])
                machines = None
                if has_machines and len(row) > 2 and row[2].strip():
                    machines = int(row[2])
                entries.append(
                    (line_no, PrecinctRecord(row[0].strip(), registered, machines))
                )
            except ValueError as exc:
                errors.append((line_no, str(exc)))
    return entries, errors


def run_plan(params: dict, out_dir: Path, workers: int = 1) -> list[str]:
    del workers
    entries, parse_errors = _parse_roster(Path(params["roster"]))
    for line_no, message in parse_errors:
        print(f"line {line_no}: {message}", file=sys.stderr)
    if not entries:
        raise ValidationError("no records parsed from roster")
    lines = [line_no for line_no, _ in entries]
    report = roster_report(
        [record for _, record in entries],
        turnout=params["turnout"],
        day_minutes=params["day_minutes"],
        vote_minutes=params["vote_minutes"],
        statutory_quota=params["statutory_quota"],
    )
    for error in report.errors:
        print(f"line {lines[error.index]}: {error.message}", file=sys.stderr)

    rows = [
        [
            plan.precinct_id,
            _fmt(plan.registered),
            _fmt(plan.statutory_machines),
            _fmt(plan.queue_stop_machines),
            _fmt(plan.shortfall),
            _fmt(plan.machines_used),
            _fmt(plan.actual_voters_per_machine),
            _fmt(plan.queueing_product),
            _fmt(plan.half_day_minutes),
            _fmt(plan.meets_queue_stop),
        ]
        for plan in report.plans
    ]
    rows.append(
        [
            "TOTAL",
            _fmt(report.total_registered),
            _fmt(report.total_statutory),
            _fmt(report.total_queue_stop),
            _fmt(report.total_shortfall),
            "", "", "", "", "",
        ]
    )
    _write_csv(
        out_dir / "allocation_report.csv",
        [
            "precinct_id",
            "registered",
            "statutory_machines",
            "queue_stop_machines",
            "shortfall",
            "machines_used",
            "actual_voters_per_machine",
            "queueing_product_minutes",
            "half_day_minutes",
            "meets_queue_stop",
        ],
        rows,
    )
    print(
        f"{len(report.plans)} precincts: statutory {report.total_statutory}, "
        f"queue-stop {report.total_queue_stop}, shortfall {report.total_shortfall}"
    )
    return ["allocation_report.csv"]


def cmd_plan(args) -> int:
    params = {
        "roster": str(Path(args.roster).resolve()),
        "turnout": args.turnout,
        "day_minutes": args.day_minutes,
        "vote_minutes": args.vote_minutes,
        "statutory_quota": args.quota,
    }
    out_dir = _prepare_out_dir(args)
    outputs = run_plan(params, out_dir)
    _write_manifest(out_dir, "plan", params, outputs)
    return EXIT_OK


# --- threshold ------------------------------------------------------------------

def run_threshold(params: dict, out_dir: Path, workers: int = 1) -> list[str]:
    profile = build_profile(params["day_minutes"], params["hourly_fractions"])
    cycle_minutes = params["cycle_seconds"] / 60.0
    service = ServiceModel(params["service_kind"], cycle_minutes, params["service_dispersion"])
    result = capacity_threshold(
        cycle_minutes,
        params["wait_limit_minutes"],
        params["prob_limit"],
        profile,
        servers=params["servers"],
        n=params["replications"],
        service=service,
        seed=params["seed"],
        search_cap=params["search_cap"],
        workers=workers,
    )
    outputs = []
    _write_csv(
        out_dir / "threshold.csv",
        [
            "cycle_seconds",
            "voters_per_device",
            "wait_limit_minutes",
            "prob_limit",
            "servers",
            "replications_per_probe",
            "probe_count",
            "confirmation_replications",
            "confirmation_fraction",
            "capped",
            "unreachable",
        ],
        [
            [
                _fmt(params["cycle_seconds"]),
                _fmt(result.voters_per_device),
                _fmt(result.wait_limit),
                _fmt(result.prob_limit),
                _fmt(result.servers),
                _fmt(result.replications_per_probe),
                _fmt(len(result.probes)),
                _fmt(result.confirmation_replications),
                "" if result.confirmation_fraction is None else _fmt(result.confirmation_fraction),
                _fmt(result.capped),
                _fmt(result.unreachable),
            ]
        ],
    )
    outputs.append("threshold.csv")
    _write_csv(
        out_dir / "threshold_probes.csv",
        ["voters_per_device", "fraction_over_limit"],
        [[_fmt(v), _fmt(p)] for v, p in result.probes],
    )
    outputs.append("threshold_probes.csv")

    if params["figures"]:
        from .figures import save_threshold_figure

        save_threshold_figure(result, out_dir / "threshold_probes.png")
        outputs.append("threshold_probes.png")

    regime = (
        f"P(max wait > {result.wait_limit:g} min) <= {result.prob_limit * 100:g}% "
        f"per {params['cycle_seconds']:g}-second cycle device"
    )
    print(f"regime: {regime}")
    if result.unreachable:
        print("voters per device: 0 (limit unreachable even at one voter per device)")
    elif result.capped:
        print(
            f"voters per device: {result.voters_per_device} "
            f"(search cap reached; the true threshold may be higher)"
        )
    else:
        print(f"voters per device: {result.voters_per_device}")
    if result.confirmation_fraction is not None:
        p = result.confirmation_fraction
        se = math.sqrt(max(p * (1 - p), 1e-12) / result.confirmation_replications)
        print(
            f"confirmation: {p * 100:.3f}% over limit at the returned value "
            f"({result.confirmation_replications} replications, +/-{3 * se * 100:.3f}% at 3 sigma)"
        )
    return outputs


def cmd_threshold(args) -> int:
    if args.cycle_seconds is None:
        raise ValidationError("threshold requires --cycle-seconds")
    scenario = _resolve_scenario_params(args)
    params = {
        "cycle_seconds": args.cycle_seconds,
        "wait_limit_minutes": args.wait_limit_minutes,
        "prob_limit": args.prob_limit,
        "servers": args.servers if args.servers is not None else 1,
        "replications": args.replications,
        "seed": scenario["seed"],
        "search_cap": args.search_cap,
        "day_minutes": scenario["day_minutes"],
        "profile_name": scenario["profile_name"],
        "hourly_fractions": scenario["hourly_fractions"],
        "service_kind": scenario["service_kind"],
        "service_dispersion": scenario["service_dispersion"],
        "figures": not args.no_figures,
    }
    out_dir = _prepare_out_dir(args)
    outputs = run_threshold(params, out_dir, workers=args.threads)
    _write_manifest(out_dir, "threshold", params, outputs)
    return EXIT_OK


# --- sweep ----------------------------------------------------------------------

def run_sweep(params: dict, out_dir: Path, workers: int = 1) -> list[str]:
    base = _config_from_params(params)
    axis1 = SweepAxis(params["axis1"], tuple(params["grid1"]))
    axis2 = SweepAxis(params["axis2"], tuple(params["grid2"])) if params["axis2"] else None
    if params["statistic"] == "quantile":
        statistic = QuantileStatistic(params["quantile"])
    else:
        statistic = ExceedanceStatistic(tuple(params["thresholds"]))
    spec = SweepSpec(
        base=base,
        axis1=axis1,
        axis2=axis2,
        replications_per_point=params["replications"],
        statistic=statistic,
        max_total_replications=params["budget"],
    )
    result = sweep_2d(spec, workers=workers) if axis2 is not None else sweep_1d(spec, workers=workers)

    outputs = []
    if axis2 is None:
        header = [result.axis1_name, "statistic", "value", "std_error"]
        rows = [
            [_fmt(point.axis1_value), label, _fmt(value), _fmt(err)]
            for point in result.points
            for label, value, err in point.values
        ]
    else:
        header = [result.axis1_name, result.axis2_name, "statistic", "value", "std_error"]
        rows = [
            [_fmt(point.axis1_value), _fmt(point.axis2_value), label, _fmt(value), _fmt(err)]
            for point in result.points
            for label, value, err in point.values
        ]
    _write_csv(out_dir / "sweep.csv", header, rows)
    outputs.append("sweep.csv")

    if result.overlay:
        _write_csv(
            out_dir / "queue_stop_overlay.csv",
            ["vote_minutes", "queue_stop_voters_per_server"],
            [[_fmt(v), _fmt(w)] for v, w in result.overlay],
        )
        outputs.append("queue_stop_overlay.csv")

    if params["figures"]:
        from .figures import save_sweep_figure

        save_sweep_figure(result, out_dir / "sweep.png")
        outputs.append("sweep.png")

    print(
        f"swept {len(result.points)} grid points at "
        f"{result.replications_per_point} replications each"
    )
    return outputs


def cmd_sweep(args) -> int:
    scenario = _resolve_scenario_params(args)
    params = dict(scenario)
    params.update(
        {
            "axis1": args.axis1,
            "grid1": _parse_grid(args.grid1),
            "axis2": args.axis2,
            "grid2": _parse_grid(args.grid2) if args.grid2 else None,
            "replications": args.replications,
            "statistic": args.stat,
            "thresholds": _parse_threshold_list(args.thresholds),
            "quantile": args.quantile,
            "budget": args.budget,
            "figures": not args.no_figures,
        }
    )
    if (args.axis2 is None) != (args.grid2 is None):
        raise ValidationError("--axis2 and --grid2 go together")
    out_dir = _prepare_out_dir(args)
    outputs = run_sweep(params, out_dir, workers=args.threads)
    _write_manifest(out_dir, "sweep", params, outputs)
    return EXIT_OK


# --- queue-stop -------------------------------------------------------------------

def run_queue_stop(params: dict, out_dir: Path, workers: int = 1) -> list[str]:
    del workers
    day = params["day_minutes"]
    vote = params["vote_minutes"]
    turnout = params["turnout"]
    quota = params["statutory_quota"]
    limit = queue_stop_max_voters(day, vote)
    registered_limit = registered_per_machine(limit, turnout)
    actual_at_quota = quota * turnout
    vote_cap = max_vote_time(day, actual_at_quota)
    _write_csv(
        out_dir / "queue_stop.csv",
        [
            "day_minutes",
            "vote_minutes",
            "turnout",
            "statutory_quota",
            "max_actual_voters_per_machine",
            "registered_per_machine_at_limit",
            "actual_voters_per_machine_at_quota",
            "max_vote_minutes_at_quota",
        ],
        [
            [
                _fmt(day),
                _fmt(vote),
                _fmt(turnout),
                _fmt(quota),
                _fmt(limit),
                _fmt(registered_limit),
                _fmt(actual_at_quota),
                _fmt(vote_cap),
            ]
        ],
    )
    print(f"max actual voters per machine:      {_fmt(limit)}")
    print(f"max registered voters per machine:  {_fmt(registered_limit)}")
    print(f"actual voters per machine at quota: {_fmt(actual_at_quota)}")
    print(f"max mean vote minutes at that load: {_fmt(vote_cap)}")
    return ["queue_stop.csv"]


def cmd_queue_stop(args) -> int:
    params = {
        "day_minutes": args.day_minutes if args.day_minutes is not None else 780.0,
        "vote_minutes": args.vote_minutes if args.vote_minutes is not None else 5.0,
        "turnout": args.turnout,
        "statutory_quota": args.quota,
    }
    out_dir = _prepare_out_dir(args)
    outputs = run_queue_stop(params, out_dir)
    _write_manifest(out_dir, "queue-stop", params, outputs)
    return EXIT_OK


# --- replay ------------------------------------------------------------------------

RUNNERS = {
    "simulate": run_simulate,
    "plan": run_plan,
    "threshold": run_threshold,
    "sweep": run_sweep,
    "queue-stop": run_queue_stop,
}


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    command = manifest.get("command")
    if command not in RUNNERS:
        raise ValidationError(f"manifest names unknown command {command!r}")
    params = manifest["parameters"]
    out_dir = _prepare_out_dir(args)
    outputs = RUNNERS[command](params, out_dir, workers=args.threads)
    _write_manifest(out_dir, command, params, outputs)
    print(f"replayed {command} into {out_dir}")
    return EXIT_OK


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pollsim",
        description="Monte Carlo queue simulation and capacity planning for polling places.",
    )
    parser.add_argument("--version", action="version", version=f"pollsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out-dir", default=DEFAULT_OUT_DIR, help="directory for outputs and manifest"
    )
    common.add_argument(
        "--threads",
        type=int,
        default=_env_threads(),
        help=f"worker threads (default from ${THREADS_ENV_VAR} or 1)",
    )

    scenario = argparse.ArgumentParser(add_help=False)
    source = scenario.add_mutually_exclusive_group()
    source.add_argument("--scenario", help=f"shipped scenario: {', '.join(shipped_scenario_names())}")
    source.add_argument("--config", help="path to a scenario JSON file")
    scenario.add_argument("--servers", type=int, help="number of identical stations")
    load = scenario.add_mutually_exclusive_group()
    load.add_argument("--expected-voters", type=float, dest="expected_voters")
    load.add_argument(
        "--voters-per-server", type=float, dest="voters_per_server",
        help="expected voters per station; total = this x servers",
    )
    mean = scenario.add_mutually_exclusive_group()
    mean.add_argument("--vote-minutes", type=float, dest="vote_minutes", help="mean service minutes")
    mean.add_argument(
        "--cycle-seconds", type=float, dest="cycle_seconds", help="mean service cycle in seconds"
    )
    scenario.add_argument("--day-minutes", type=float, dest="day_minutes")
    scenario.add_argument("--profile", choices=profile_names(), help="named arrival profile")
    scenario.add_argument(
        "--service", choices=("deterministic", "exponential", "lognormal"),
        help="service-time distribution (default exponential)",
    )
    scenario.add_argument(
        "--dispersion", type=float, help="coefficient of variation (lognormal only)"
    )
    scenario.add_argument("--seed", type=int, help="base seed for all replications")

    p_sim = sub.add_parser(
        "simulate", parents=[common, scenario],
        help="Monte Carlo election days: exceedance tables, histograms, worst-day traces",
    )
    p_sim.add_argument("-n", "--replications", type=int, default=10_000)
    p_sim.add_argument(
        "--thresholds", default=",".join(f"{t:g}" for t in DEFAULT_THRESHOLDS),
        help="comma list of exceedance thresholds in minutes",
    )
    p_sim.add_argument("--bin-width", type=float, default=5.0, help="histogram bin width, minutes")
    p_sim.add_argument("--worst-k", type=int, default=4, help="worst replications to trace (0 = none)")
    p_sim.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p_sim.set_defaults(func=cmd_simulate)

    p_plan = sub.add_parser(
        "plan", parents=[common],
        help="per-precinct statutory vs queue-stop allocations from a roster CSV",
    )
    p_plan.add_argument("roster", help="CSV with header precinct_id,registered[,machines]")
    p_plan.add_argument("--turnout", type=float, default=0.75)
    p_plan.add_argument("--day-minutes", type=float, default=780.0, dest="day_minutes")
    p_plan.add_argument("--vote-minutes", type=float, default=5.0, dest="vote_minutes")
    p_plan.add_argument("--quota", type=int, default=200, help="registered voters per statutory machine")
    p_plan.set_defaults(func=cmd_plan)

    p_thr = sub.add_parser(
        "threshold", parents=[common, scenario],
        help="largest voters-per-device meeting a wait-probability limit",
    )
    p_thr.add_argument(
        "--wait-limit-minutes", type=float, default=30.0, dest="wait_limit_minutes"
    )
    p_thr.add_argument("--prob-limit", type=float, default=0.01, dest="prob_limit")
    p_thr.add_argument("-n", "--replications", type=int, default=10_000)
    p_thr.add_argument("--search-cap", type=int, default=1_000_000, dest="search_cap")
    p_thr.add_argument("--no-figures", action="store_true")
    p_thr.set_defaults(func=cmd_threshold)

    p_swp = sub.add_parser(
        "sweep", parents=[common, scenario],
        help="statistic over a 1-D or 2-D parameter grid, plus the queue-stop overlay",
    )
    p_swp.add_argument("--axis1", required=True, choices=("vote_minutes", "voters_per_server"))
    p_swp.add_argument("--grid1", required=True, help="lo:hi:step or comma list")
    p_swp.add_argument("--axis2", choices=("vote_minutes", "voters_per_server"))
    p_swp.add_argument("--grid2", help="lo:hi:step or comma list")
    p_swp.add_argument("-n", "--replications", type=int, default=10_000)
    p_swp.add_argument("--stat", choices=("exceedance", "quantile"), default="exceedance")
    p_swp.add_argument(
        "--thresholds", default=",".join(f"{t:g}" for t in DEFAULT_SWEEP_THRESHOLDS)
    )
    p_swp.add_argument("--quantile", type=float, default=0.99)
    p_swp.add_argument(
        "--budget", type=int, default=DEFAULT_MAX_TOTAL_REPLICATIONS,
        help="hard cap on points x replications",
    )
    p_swp.add_argument("--no-figures", action="store_true")
    p_swp.set_defaults(func=cmd_sweep)

    p_qs = sub.add_parser(
        "queue-stop", parents=[common],
        help="closed-form capacity rule: voters per machine and vote-time limits",
    )
    p_qs.add_argument("--day-minutes", type=float, dest="day_minutes")
    p_qs.add_argument("--vote-minutes", type=float, dest="vote_minutes")
    p_qs.add_argument("--turnout", type=float, default=0.75)
    p_qs.add_argument("--quota", type=int, default=200)
    p_qs.set_defaults(func=cmd_queue_stop)

    p_rep = sub.add_parser(
        "replay", parents=[common], help="re-run a manifest and reproduce its outputs"
    )
    p_rep.add_argument("manifest", help="path to a manifest.json")
    p_rep.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
