"""Command-line entry points for the tag-matching experiments.

Four subcommands: normalize (build and check normalization tables),
geometry (similarity / dissimilarity / detour sampling), variation
(single-step perturbations and mutational walks), and evolve
(graph-matching evolutionary runs and mutation-rate sweeps).

Runs are deterministic: a root seed comes from --seed, a config file,
or the TAGMATCH_SEED environment variable, and every derived stream
is keyed by a documented purpose constant plus logical indices, so a
rerun with an identical effective config writes byte-identical files.
Options resolve as command line > config file > environment > default.
Exit status is 0 on success, 2 on usage errors, 1 on runtime failures;
error text goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bitstring import derive_seed, derive_stream, draw_tag_values, tag_to_hex
from .engine import MatchEngine, RawMatchEngine, build_engine
from .evolve import (
    EvolutionConfig,
    GraphStructure,
    default_sweep_rates,
    flips_to_per_bit,
    generate_target_graph,
    mutation_rate_sweep,
    run_evolutions,
    save_graph,
)
from .geometry import sample_detour, sample_dissimilarity, sample_similarity
from .kernels import raw_distance_batch
from .metrics import METRIC_NAMES, MetricKind
from .normalizer import load_table, normalize_batch, build_table, save_table
from .sampling import DEFAULT_MAX_ATTEMPTS
from .stats import ks_uniform_statistic, summarize
from .variation import Regime, StartMode, run_walk_ensemble, sample_single_step

SEED_ENV_VAR = "TAGMATCH_SEED"

# Stream purpose constants; the second-level child keys are logical
# indices (metric index, regime, structure, ...), never loop order.
STREAM_TABLES = 0
STREAM_VALIDATION = 1
STREAM_SIMILARITY = 2
STREAM_DISSIMILARITY = 3
STREAM_DETOUR = 4
STREAM_STEPS = 5
STREAM_WALKS = 6
STREAM_GRAPH = 7
STREAM_EVOLVE = 8
STREAM_SUMMARIES = 9

_STRUCTURES = tuple(s.value for s in GraphStructure)
_REGIMES = tuple(r.value for r in Regime)
_START_MODES = tuple(m.value for m in StartMode)

_GLOBAL_DEFAULTS = {
    "seed": None,  # resolved against TAGMATCH_SEED, then 1
    "width": 32,
    "metric": None,  # None means all metrics
    "out": "out",
    "jobs": 1,
}

_COMMAND_DEFAULTS = {
    "normalize": {
        "samples": 10_000,
        "validate_samples": 10_000,
    },
    "geometry": {
        "stat": "all",
        "samples": 5_000,
        "radius": 0.01,
        "inner_radius": 0.01,
        "outer_radius": 0.99,
        "swap_pair_order": False,
        "raw": False,
        "max_attempts": DEFAULT_MAX_ATTEMPTS,
        "table_samples": 10_000,
        "tables": None,
        "resamples": 10_000,
    },
    "variation": {
        "mode": "all",
        "regime": "all",
        "start": StartMode.IDENTICAL.value,
        "samples": 5_000,
        "walks": 1_000,
        "steps": 65,
        "max_attempts": DEFAULT_MAX_ATTEMPTS,
        "table_samples": 10_000,
        "tables": None,
        "resamples": 10_000,
    },
    "evolve": {
        "nodes": 32,
        "degree": 1,
        "structure": GraphStructure.REGULAR.value,
        "replicates": 10,
        "rate_flips": 2.0,
        "population": 500,
        "generations": 512,
        "tournament": 7,
        "sweep": False,
        "sweep_replicates": 3,
        "sweep_low": 0.75,
        "sweep_high": 16.0,
        "sweep_points": 10,
        "table_samples": 10_000,
        "tables": None,
    },
}


def _float_text(value: float) -> str:
    return repr(float(value))


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header, rows, config) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    _write_json(path.with_suffix(path.suffix + ".meta.json"), {"config": config})


def _summary_dict(summary) -> dict:
    return {k: v for k, v in asdict(summary).items()}


def _metric_kinds(value) -> list:
    if not value:
        return [MetricKind(name) for name in METRIC_NAMES]
    return [MetricKind(name) for name in value]


def _metric_index(metric: MetricKind) -> int:
    return METRIC_NAMES.index(metric.value)


def _table_filename(metric: MetricKind, width: int) -> str:
    return f"{metric.value}-w{width}.table"


def _load_or_build_engine(metric: MetricKind, cfg: dict):
    if cfg.get("raw"):
        return RawMatchEngine(metric=metric, width=cfg["width"])
    width = cfg["width"]
    tables_dir = cfg.get("tables")
    if tables_dir:
        path = Path(tables_dir) / _table_filename(metric, width)
        if path.exists():
            table = load_table(path)
            return MatchEngine(metric=metric, width=width, table=table)
    stream = derive_stream(cfg["seed"], STREAM_TABLES).child(_metric_index(metric), width)
    return build_engine(metric, width, stream, cfg["table_samples"])


# --- normalize -------------------------------------------------------------


def cmd_normalize(cfg: dict) -> int:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    report = {}
    for metric in _metric_kinds(cfg["metric"]):
        mi = _metric_index(metric)
        width = cfg["width"]
        build_stream = derive_stream(cfg["seed"], STREAM_TABLES).child(mi, width)
        table = build_table(metric, width, build_stream, cfg["samples"])
        path = out / _table_filename(metric, width)
        save_table(table, path)

        check_stream = derive_stream(cfg["seed"], STREAM_VALIDATION).child(mi, width)
        t = draw_tag_values(check_stream, cfg["validate_samples"], width)
        u = draw_tag_values(check_stream, cfg["validate_samples"], width)
        normalized = normalize_batch(table, raw_distance_batch(metric, t, u, width))
        report[metric.value] = {
            "table_file": path.name,
            "build_seed": table.build_seed,
            "entries": len(table.entries),
            "ks_fresh_uniform": ks_uniform_statistic(normalized),
        }
        print(f"wrote {path}")
    _write_json(out / "normalize-report.json", {"config": cfg, "metrics": report})
    return 0


# --- geometry ---------------------------------------------------------------


def _geometry_rows(metric: MetricKind, width: int, samples) -> list:
    rows = []
    for i, s in enumerate(samples):
        rows.append(
            [
                metric.value,
                width,
                i,
                _float_text(s.statistic),
                s.attempts,
                tag_to_hex(s.target_tag),
                tag_to_hex(s.secondary_a),
                tag_to_hex(s.secondary_b),
            ]
        )
    return rows


_GEOMETRY_HEADER = [
    "metric",
    "width",
    "sample_id",
    "statistic",
    "attempts",
    "target_tag",
    "secondary_a",
    "secondary_b",
]


def cmd_geometry(cfg: dict) -> int:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    stats = ("similarity", "dissimilarity", "detour") if cfg["stat"] == "all" else (cfg["stat"],)
    width = cfg["width"]
    for stat in stats:
        summary = {}
        for metric in _metric_kinds(cfg["metric"]):
            engine = _load_or_build_engine(metric, cfg)
            mi = _metric_index(metric)
            if stat == "similarity":
                rng = derive_stream(cfg["seed"], STREAM_SIMILARITY).child(mi)
                samples = sample_similarity(
                    engine,
                    radius=cfg["radius"],
                    count=cfg["samples"],
                    rng=rng,
                    max_attempts=cfg["max_attempts"],
                    swap_final_pair=cfg["swap_pair_order"],
                )
            elif stat == "dissimilarity":
                rng = derive_stream(cfg["seed"], STREAM_DISSIMILARITY).child(mi)
                samples = sample_dissimilarity(
                    engine,
                    inner_radius=cfg["inner_radius"],
                    outer_radius=cfg["outer_radius"],
                    count=cfg["samples"],
                    rng=rng,
                    max_attempts=cfg["max_attempts"],
                    swap_final_pair=cfg["swap_pair_order"],
                )
            else:
                rng = derive_stream(cfg["seed"], STREAM_DETOUR).child(mi)
                samples = sample_detour(engine, count=cfg["samples"], rng=rng)

            path = out / f"geometry-{stat}-{metric.value}-w{width}.csv"
            _write_csv(path, _GEOMETRY_HEADER, _geometry_rows(metric, width, samples), cfg)
            print(f"wrote {path}")

            statistics = np.array([s.statistic for s in samples])
            attempts = np.array([s.attempts for s in samples], dtype=np.float64)
            stat_key = ("similarity", "dissimilarity", "detour").index(stat)
            boot = derive_stream(cfg["seed"], STREAM_SUMMARIES).child(mi, stat_key)
            entry = {
                "statistic": _summary_dict(
                    summarize(statistics, boot, resamples=cfg["resamples"])
                ),
                "attempts_mean": float(attempts.mean()),
            }
            if stat == "detour":
                entry["negative_fraction"] = float(np.mean(statistics < 0.0))
            summary[metric.value] = entry
        _write_json(out / f"geometry-{stat}-summary.json", {"config": cfg, "metrics": summary})
    return 0


# --- variation ---------------------------------------------------------------


def cmd_variation(cfg: dict) -> int:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    width = cfg["width"]
    modes = ("steps", "walks") if cfg["mode"] == "all" else (cfg["mode"],)

    if "steps" in modes:
        regimes = list(Regime) if cfg["regime"] == "all" else [Regime(cfg["regime"])]
        summary = {}
        for metric in _metric_kinds(cfg["metric"]):
            engine = _load_or_build_engine(metric, cfg)
            mi = _metric_index(metric)
            for regime in regimes:
                ri = list(Regime).index(regime)
                rng = derive_stream(cfg["seed"], STREAM_STEPS).child(mi, ri)
                samples = sample_single_step(
                    engine, regime, cfg["samples"], rng, cfg["max_attempts"]
                )
                rows = [
                    [
                        metric.value,
                        width,
                        regime.value,
                        i,
                        _float_text(s.pre_distance),
                        _float_text(s.post_distance),
                        _float_text(s.perturbation),
                    ]
                    for i, s in enumerate(samples)
                ]
                path = out / f"steps-{regime.value}-{metric.value}-w{width}.csv"
                _write_csv(
                    path,
                    ["metric", "width", "regime", "sample_id", "pre", "post", "perturbation"],
                    rows,
                    cfg,
                )
                print(f"wrote {path}")
                perturbations = np.array([s.perturbation for s in samples])
                boot = derive_stream(cfg["seed"], STREAM_SUMMARIES).child(10 + mi, ri)
                summary[f"{metric.value}/{regime.value}"] = {
                    "fraction_increasing": float(np.mean(perturbations > 0.0)),
                    "fraction_decreasing": float(np.mean(perturbations < 0.0)),
                    "fraction_neutral": float(np.mean(perturbations == 0.0)),
                    "perturbation": _summary_dict(
                        summarize(perturbations, boot, resamples=cfg["resamples"])
                    ),
                }
        _write_json(out / "steps-summary.json", {"config": cfg, "metrics": summary})

    if "walks" in modes:
        start = StartMode(cfg["start"])
        si = list(StartMode).index(start)
        summary = {}
        for metric in _metric_kinds(cfg["metric"]):
            engine = _load_or_build_engine(metric, cfg)
            mi = _metric_index(metric)
            rng = derive_stream(cfg["seed"], STREAM_WALKS).child(mi, si)
            traces, aggregates = run_walk_ensemble(
                engine,
                cfg["walks"],
                cfg["steps"],
                start,
                rng,
                max_attempts=cfg["max_attempts"],
                resamples=cfg["resamples"],
            )
            walk_rows = []
            for trace in traces:
                for step, distance in enumerate(trace.step_distances):
                    walk_rows.append(
                        [
                            metric.value,
                            width,
                            start.value,
                            trace.walk_id,
                            step,
                            _float_text(distance),
                        ]
                    )
            path = out / f"walks-{start.value}-{metric.value}-w{width}.csv"
            _write_csv(
                path,
                ["metric", "width", "start_mode", "walk_id", "step", "distance"],
                walk_rows,
                cfg,
            )
            print(f"wrote {path}")
            agg_rows = [
                [
                    metric.value,
                    width,
                    start.value,
                    agg.step,
                    _float_text(agg.mean),
                    _float_text(agg.sd),
                    _float_text(agg.ci_lo),
                    _float_text(agg.ci_hi),
                ]
                for agg in aggregates
            ]
            agg_path = out / f"walk-aggregates-{start.value}-{metric.value}-w{width}.csv"
            _write_csv(
                agg_path,
                ["metric", "width", "start_mode", "step", "mean", "sd", "ci_lo", "ci_hi"],
                agg_rows,
                cfg,
            )
            print(f"wrote {agg_path}")
            summary[metric.value] = {
                "step1_mean": aggregates[1].mean,
                "final_mean": aggregates[-1].mean,
            }
        _write_json(out / "walks-summary.json", {"config": cfg, "metrics": summary})
    return 0


# --- evolve -------------------------------------------------------------------


_TRAJECTORY_HEADER = [
    "metric",
    "width",
    "structure",
    "mean_degree",
    "rate_flips_per_genome",
    "replicate",
    "generation",
    "max_fitness",
    "mean_fitness",
]


def _trajectory_rows(metric, width, structure, degree, rate_flips, replicate, trajectory):
    rows = []
    for generation in range(len(trajectory.max_fitness)):
        rows.append(
            [
                metric.value,
                width,
                structure,
                degree,
                _float_text(rate_flips),
                replicate,
                generation,
                _float_text(trajectory.max_fitness[generation]),
                _float_text(trajectory.mean_fitness[generation]),
            ]
        )
    return rows


def cmd_evolve(cfg: dict) -> int:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    width = cfg["width"]
    structure = GraphStructure(cfg["structure"])
    si = _STRUCTURES.index(structure.value)
    degree = cfg["degree"]
    nodes = cfg["nodes"]

    graph_rng = derive_stream(cfg["seed"], STREAM_GRAPH).child(si, degree, nodes)
    graph = generate_target_graph(nodes, degree, structure, graph_rng)
    graph_path = out / f"graph-{structure.value}-d{degree}-n{nodes}.txt"
    save_graph(graph, graph_path)
    print(f"wrote {graph_path}")

    summary = {}
    for metric in _metric_kinds(cfg["metric"]):
        engine = _load_or_build_engine(metric, cfg)
        mi = _metric_index(metric)
        base = EvolutionConfig(
            per_bit_mutation_rate=0.0,
            replicate_seed=derive_seed(cfg["seed"], STREAM_EVOLVE, mi, si, degree, nodes),
            population_size=cfg["population"],
            generations=cfg["generations"],
            tournament_size=cfg["tournament"],
        )
        tag = f"{structure.value}-d{degree}-{metric.value}-w{width}"

        if cfg["sweep"]:
            rates = default_sweep_rates(cfg["sweep_low"], cfg["sweep_high"], cfg["sweep_points"])
            result = mutation_rate_sweep(
                base,
                engine,
                graph,
                rates=rates,
                replicates=cfg["sweep_replicates"],
                jobs=cfg["jobs"],
            )
            rows = []
            for rate, runs in zip(result.rates_flips_per_genome, result.trajectories):
                for rep, trajectory in enumerate(runs):
                    rows.extend(
                        _trajectory_rows(
                            metric, width, structure.value, degree, rate, rep, trajectory
                        )
                    )
            path = out / f"sweep-trajectories-{tag}.csv"
            _write_csv(path, _TRAJECTORY_HEADER, rows, cfg)
            print(f"wrote {path}")
            summary[metric.value] = {
                "rates_flips_per_genome": list(result.rates_flips_per_genome),
                "per_bit_rates": list(result.per_bit_rates),
                "replicate_scores": [list(s) for s in result.replicate_scores],
                "mean_scores": list(result.mean_scores),
                "selected_rate_flips_per_genome": result.selected_rate,
                "selected_per_bit_rate": result.selected_per_bit,
            }
            _write_json(out / f"sweep-{tag}.json", {"config": cfg, **summary[metric.value]})
        else:
            per_bit = flips_to_per_bit(cfg["rate_flips"], nodes, width)
            configs = []
            for rep in range(cfg["replicates"]):
                configs.append(
                    EvolutionConfig(
                        per_bit_mutation_rate=per_bit,
                        replicate_seed=derive_seed(
                            cfg["seed"], STREAM_EVOLVE, mi, si, degree, nodes, rep
                        ),
                        population_size=cfg["population"],
                        generations=cfg["generations"],
                        tournament_size=cfg["tournament"],
                    )
                )
            trajectories = run_evolutions(configs, engine, graph, jobs=cfg["jobs"])
            rows = []
            for rep, trajectory in enumerate(trajectories):
                rows.extend(
                    _trajectory_rows(
                        metric, width, structure.value, degree, cfg["rate_flips"], rep, trajectory
                    )
                )
            path = out / f"trajectories-{tag}.csv"
            _write_csv(path, _TRAJECTORY_HEADER, rows, cfg)
            print(f"wrote {path}")
            finals = [t.max_fitness[-1] for t in trajectories]
            summary[metric.value] = {
                "rate_flips_per_genome": cfg["rate_flips"],
                "per_bit_rate": per_bit,
                "final_max_fitness": [float(f) for f in finals],
                "final_max_fitness_mean": float(np.mean(finals)),
            }
    _write_json(out / f"evolve-summary-{structure.value}-d{degree}.json",
                {"config": cfg, "metrics": summary})
    return 0


# --- argument plumbing --------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key-value JSON config file")
    parser.add_argument("--seed", type=int, help="root seed (default: $TAGMATCH_SEED or 1)")
    parser.add_argument("--width", type=int, help="tag width in bits (default 32)")
    parser.add_argument(
        "--metric",
        action="append",
        choices=METRIC_NAMES,
        help="metric to run; repeatable (default: all)",
    )
    parser.add_argument("--out", help="output directory (default ./out)")
    parser.add_argument("--jobs", type=int, help="max worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagmatch",
        description="Bitstring tag-matching metrics and their analyses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="build normalization tables and check uniformity")
    _add_common(p)
    p.add_argument("--samples", type=int, help="table sample pairs (default 10000)")
    p.add_argument("--validate-samples", type=int, help="fresh pairs for the uniformity check")

    p = sub.add_parser("geometry", help="similarity / dissimilarity / detour sampling")
    _add_common(p)
    p.add_argument("--stat", choices=("similarity", "dissimilarity", "detour", "all"))
    p.add_argument("--samples", type=int, help="samples per metric (default 5000)")
    p.add_argument("--radius", type=float, help="similarity radius (default 0.01)")
    p.add_argument("--inner-radius", type=float, help="dissimilarity near bound (default 0.01)")
    p.add_argument("--outer-radius", type=float, help="dissimilarity far bound (default 0.99)")
    p.add_argument(
        "--swap-pair-order",
        action="store_true",
        default=None,
        help="measure the final pair as d(S2, S1) instead of d(S1, S2)",
    )
    p.add_argument(
        "--raw",
        action="store_true",
        default=None,
        help="skip normalization (radii then live on raw scales)",
    )
    p.add_argument("--max-attempts", type=int, help="draw budget per constrained tag")
    p.add_argument("--tables", help="directory of prebuilt table files")
    p.add_argument("--table-samples", type=int, help="samples for on-demand tables")
    p.add_argument("--resamples", type=int, help="bootstrap resamples for summaries")

    p = sub.add_parser("variation", help="single-step perturbations and mutational walks")
    _add_common(p)
    p.add_argument("--mode", choices=("steps", "walks", "all"))
    p.add_argument("--regime", choices=_REGIMES + ("all",), help="steps regime (default all)")
    p.add_argument("--start", choices=_START_MODES, help="walk start mode (default identical)")
    p.add_argument("--samples", type=int, help="step samples per regime (default 5000)")
    p.add_argument("--walks", type=int, help="walks per ensemble (default 1000)")
    p.add_argument("--steps", type=int, help="flips per walk (default 65)")
    p.add_argument("--max-attempts", type=int, help="draw budget per constrained tag")
    p.add_argument("--tables", help="directory of prebuilt table files")
    p.add_argument("--table-samples", type=int, help="samples for on-demand tables")
    p.add_argument("--resamples", type=int, help="bootstrap resamples for aggregates")

    p = sub.add_parser("evolve", help="graph-matching evolution and rate sweeps")
    _add_common(p)
    p.add_argument("--nodes", type=int, help="total graph nodes, split evenly (default 32)")
    p.add_argument("--degree", type=int, choices=(1, 2), help="mean degree (default 1)")
    p.add_argument("--structure", choices=_STRUCTURES, help="graph structure (default regular)")
    p.add_argument("--replicates", type=int, help="replicate runs (default 10)")
    p.add_argument("--rate-flips", type=float, help="expected flips per genome (default 2.0)")
    p.add_argument("--population", type=int, help="population size (default 500)")
    p.add_argument("--generations", type=int, help="generations per run (default 512)")
    p.add_argument("--tournament", type=int, help="tournament size (default 7)")
    p.add_argument(
        "--sweep",
        action="store_true",
        default=None,
        help="run the mutation-rate sweep instead of fixed-rate replicates",
    )
    p.add_argument("--sweep-replicates", type=int, help="replicates per sweep rate (default 3)")
    p.add_argument("--sweep-low", type=float, help="lowest sweep rate in flips (default 0.75)")
    p.add_argument("--sweep-high", type=float, help="highest sweep rate in flips (default 16)")
    p.add_argument("--sweep-points", type=int, help="sweep rate count (default 10)")
    p.add_argument("--tables", help="directory of prebuilt table files")
    p.add_argument("--table-samples", type=int, help="samples for on-demand tables")
    return parser


def _resolve_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    command = args.command
    effective = dict(_GLOBAL_DEFAULTS)
    effective.update(_COMMAND_DEFAULTS[command])
    known = set(effective)

    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config file: {exc}")
        if not isinstance(file_config, dict):
            parser.error("config file must hold a flat JSON object")
        for key, value in file_config.items():
            name = key.replace("-", "_")
            if name not in known:
                parser.error(f"unknown config key {key!r} for command {command!r}")
            effective[name] = value

    for key in known:
        value = getattr(args, key, None)
        if value is not None:
            effective[key] = value

    if effective["seed"] is None:
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            try:
                effective["seed"] = int(env)
            except ValueError:
                parser.error(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
        else:
            effective["seed"] = 1

    _validate(effective, command, parser)
    effective["command"] = command
    return effective


def _validate(cfg: dict, command: str, parser: argparse.ArgumentParser) -> None:
    def positive(name):
        if cfg.get(name) is not None and cfg[name] < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")

    if not 1 <= cfg["width"] <= 64:
        parser.error("--width must be in 1..64 (wider tags: use the library directly)")
    for name in (
        "samples",
        "validate_samples",
        "walks",
        "steps",
        "max_attempts",
        "table_samples",
        "resamples",
        "jobs",
        "nodes",
        "replicates",
        "population",
        "generations",
        "tournament",
        "sweep_replicates",
        "sweep_points",
    ):
        positive(name)
    for name in ("radius", "inner_radius", "outer_radius"):
        if cfg.get(name) is not None and not 0.0 < cfg[name] < 1.0:
            parser.error(f"--{name.replace('_', '-')} must be in (0, 1)")
    if cfg.get("metric"):
        cfg["metric"] = list(dict.fromkeys(cfg["metric"]))  # dedupe, keep order
        for name in cfg["metric"]:
            if name not in METRIC_NAMES:
                parser.error(f"unknown metric {name!r}")
    if command == "evolve":
        if cfg["nodes"] % 2 != 0:
            parser.error("--nodes must be even")
        if cfg["degree"] not in (1, 2):
            parser.error("--degree must be 1 or 2")
        if cfg["rate_flips"] < 0:
            parser.error("--rate-flips must be >= 0")
        if not 0 < cfg["sweep_low"] < cfg["sweep_high"]:
            parser.error("need 0 < --sweep-low < --sweep-high")
        if cfg["sweep_points"] < 2:
            parser.error("--sweep-points must be >= 2")
        if cfg["tournament"] > cfg["population"]:
            parser.error("--tournament cannot exceed --population")


_COMMANDS = {
    "normalize": cmd_normalize,
    "geometry": cmd_geometry,
    "variation": cmd_variation,
    "evolve": cmd_evolve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _resolve_config(args, parser)
    try:
        return _COMMANDS[args.command](cfg)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
