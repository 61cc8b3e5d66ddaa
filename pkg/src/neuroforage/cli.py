"""Batch command-line interface.

Subcommands drive the library 1:1: ``evolve`` runs the GA, ``eval``
scores a stored genome and captures replay traces, and ``sweep``,
``brigade``, ``beacon``, ``partition`` run the corresponding studies.
Every command takes a single ``--seed``; all randomness derives from it
through named paths, so reruns are byte-identical and ``--workers``
never changes an output. Each command writes a ``manifest.json``
capturing the resolved config, the seed, and a digest inventory of the
other output files (the manifest itself carries wall-clock timestamps,
so idempotence is judged on the inventoried files).

Exit codes: 0 success, 2 bad input or config, 3 runtime failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import (
    ConfigInvalid,
    InvariantViolation,
    MalformedGenome,
    MalformedTrace,
    NeuroforageError,
)
from .evolve import (
    EvolutionConfig,
    build_decider,
    controller_genome_from_dict,
    controller_genome_to_dict,
    evaluate_fitness,
    run_evolution,
)
from .experiments import beacon_study, brigade_classify, partition_study, scalability_sweep
from .rng import derive_seed
from .tissue import genome_digest
from .world import WorldConfig, create_world, fitness_of, read_trace, run_episode, write_trace


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_manifest(outdir: Path, command: str, seed: int, config: dict,
                    started: str, outputs: list[Path]) -> None:
    manifest = {
        "tool": "neuroforage",
        "version": __version__,
        "command": command,
        "seed": seed,
        "config": config,
        "started": started,
        "finished": _now(),
        "outputs": {p.name: _sha256(p) for p in sorted(outputs)},
    }
    _write_json(outdir / "manifest.json", manifest)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _load_json_file(path: str, what: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigInvalid(f"{what} file not found: {p}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{what} file {p} is not valid JSON: {exc}") from exc


def _load_genome(path: str):
    data = _load_json_file(path, "genome")
    try:
        return controller_genome_from_dict(data)
    except NeuroforageError:
        raise
    except Exception as exc:  # json structure surprises
        raise MalformedGenome(f"genome file {path}: {exc}") from exc


def _run_config_from_args(args, default_world: WorldConfig | None = None) -> EvolutionConfig:
    if getattr(args, "config", None):
        config = EvolutionConfig.from_json_dict(_load_json_file(args.config, "config"))
    else:
        config = EvolutionConfig(world=default_world or WorldConfig())
    overrides = {}
    for key, attr in (("seed", "seed"), ("generations", "generations"),
                      ("pop", "population"), ("episodes", "episodes"),
                      ("controller", "controller"), ("mode", "mode"),
                      ("boundary_mix", "boundary_mix")):
        value = getattr(args, key, None)
        if value is not None:
            overrides[attr] = value
    world = config.world
    wover = {}
    if getattr(args, "robots", None) is not None:
        wover["robot_count"] = args.robots
    if getattr(args, "beacon", None) is not None:
        wover["beacon_enabled"] = args.beacon == "on"
    if getattr(args, "timesteps", None) is not None:
        wover["max_timesteps"] = args.timesteps
    if getattr(args, "resources", None) is not None:
        wover["resource_count"] = args.resources
    if wover:
        overrides["world"] = replace(world, **wover)
    if overrides:
        config = replace(config, **overrides)
    config.validate()
    return config


def _world_config_from_args(args) -> WorldConfig:
    world = WorldConfig()
    if getattr(args, "robots", None) is not None:
        world = replace(world, robot_count=args.robots)
    if getattr(args, "beacon", None) is not None:
        world = replace(world, beacon_enabled=args.beacon == "on")
    if getattr(args, "timesteps", None) is not None:
        world = replace(world, max_timesteps=args.timesteps)
    if getattr(args, "resources", None) is not None:
        world = replace(world, resource_count=args.resources)
    if getattr(args, "partitions", None) is not None:
        counts = _int_list(args.partitions)
        if len(counts) != 1:
            raise ConfigInvalid("this command takes a single --partitions value")
        world = replace(world, partition_count=counts[0])
    world.validate()
    return world


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigInvalid(f"expected a comma-separated integer list, got {text!r}") from exc


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands ----------------------------------------------------------------


def cmd_evolve(args) -> int:
    started = _now()
    config = _run_config_from_args(args)
    out = _outdir(args)
    log = run_evolution(config, workers=args.workers)
    outputs = []
    csv_path = out / "evolution.csv"
    log.write_csv(csv_path)
    outputs.append(csv_path)
    champ_path = out / "champion.json"
    _write_json(champ_path, controller_genome_to_dict(log.champion))
    outputs.append(champ_path)
    for gen, genome in log.checkpoints:
        p = out / f"champion_gen{gen:04d}.json"
        _write_json(p, controller_genome_to_dict(genome))
        outputs.append(p)
    _write_manifest(out, "evolve", config.seed, config.to_json_dict(), started, outputs)
    print(f"best_fitness={log.best_fitness:.6f} champion={champ_path}")
    return 0


def cmd_eval(args) -> int:
    started = _now()
    genome = _load_genome(args.genome)
    world = _world_config_from_args(args)
    episodes = args.episodes if args.episodes is not None else 10
    if episodes < 1:
        raise ConfigInvalid("--episodes must be >= 1")
    out = _outdir(args)
    config = EvolutionConfig(episodes=episodes, world=world)
    decider = build_decider(genome)
    outputs = []
    total = 0.0
    for e in range(episodes):
        wcfg = replace(world, rng_seed=derive_seed(args.seed, "episode", e))
        w = create_world(wcfg)
        records = run_episode(w, [decider] * len(w.robots), record_trace=True)
        total += fitness_of(w)
        trace_path = out / f"trace_ep{e:03d}.jsonl"
        write_trace(records, trace_path)
        outputs.append(trace_path)
    mean = total / episodes
    check = evaluate_fitness(genome, config, args.seed)
    if mean != check:
        raise InvariantViolation(f"trace-run fitness {mean!r} != evaluator fitness {check!r}")
    manifest_config = {"world": world.to_json_dict(), "episodes": episodes,
                       "genome": genome_digest(controller_genome_to_dict(genome))}
    _write_manifest(out, "eval", args.seed, manifest_config, started, outputs)
    print(f"{mean:.6f}")
    return 0


def cmd_sweep(args) -> int:
    started = _now()
    genome = _load_genome(args.genome)
    world = _world_config_from_args(args)
    counts = _int_list(args.counts)
    episodes = args.episodes if args.episodes is not None else 30
    out = _outdir(args)
    result = scalability_sweep(genome, counts, world, episodes, args.seed)
    csv_path = out / "sweep.csv"
    _write_csv(csv_path, ["robot_count", "mean_fitness", "stderr", "episodes"],
               [[r.robot_count, repr(r.mean_fitness), repr(r.stderr), r.episodes]
                for r in result.rows])
    manifest_config = {"world": world.to_json_dict(), "episodes": episodes,
                       "counts": [r.robot_count for r in result.rows],
                       "genome": genome_digest(controller_genome_to_dict(genome))}
    _write_manifest(out, "sweep", args.seed, manifest_config, started, [csv_path])
    return 0


def cmd_brigade(args) -> int:
    started = _now()
    sources: list[Path] = []
    for entry in args.traces:
        p = Path(entry)
        if p.is_dir():
            sources.extend(sorted(p.glob("*.jsonl")))
        elif p.is_file():
            sources.append(p)
        else:
            raise ConfigInvalid(f"trace path not found: {p}")
    if not sources:
        raise ConfigInvalid("no trace files found")
    out = _outdir(args)
    rows = []
    all_records = []
    for path in sources:
        try:
            records = read_trace(path)
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedTrace(f"cannot read trace {path}: {exc}") from exc
        stats = brigade_classify([records], threshold=args.threshold)
        rows.append([path.name, stats.delivered_units, stats.multi_mover_units,
                     repr(stats.brigade_fraction), int(stats.is_brigade_solution)])
        all_records.append(records)
    total = brigade_classify(all_records, threshold=args.threshold)
    csv_path = out / "brigade.csv"
    _write_csv(csv_path,
               ["trace", "delivered", "multi_mover", "brigade_fraction", "is_brigade"],
               rows)
    manifest_config = {"threshold": args.threshold,
                       "traces": [p.name for p in sources],
                       "total": {"delivered": total.delivered_units,
                                 "multi_mover": total.multi_mover_units,
                                 "brigade_fraction": total.brigade_fraction,
                                 "is_brigade": total.is_brigade_solution}}
    _write_manifest(out, "brigade", args.seed, manifest_config, started, [csv_path])
    print(f"brigade_fraction={total.brigade_fraction:.6f} "
          f"({total.multi_mover_units}/{total.delivered_units} delivered units)")
    return 0


def cmd_beacon(args) -> int:
    started = _now()
    config = _run_config_from_args(args)
    budgets = _int_list(args.budgets)
    seeds = [derive_seed(args.seed, "study", i) for i in range(args.seeds)]
    out = _outdir(args)
    rows = beacon_study(config, budgets, seeds, workers=args.workers)
    csv_path = out / "beacon.csv"
    _write_csv(csv_path, ["condition", "mean_fitness", "stderr", "runs"],
               [[r.label, repr(r.mean_fitness), repr(r.stderr), r.runs] for r in rows])
    manifest_config = {"run": config.to_json_dict(), "budgets": budgets,
                       "study_seeds": seeds}
    _write_manifest(out, "beacon", args.seed, manifest_config, started, [csv_path])
    return 0


def cmd_partition(args) -> int:
    started = _now()
    # 18x18 grid by default: its 16x16 work area splits evenly 1/4/16 ways.
    default_world = WorldConfig(grid_width=18, grid_height=18)
    config = _run_config_from_args(args, default_world=default_world)
    partitions = _int_list(args.partitions) if args.partitions else [1, 4, 16]
    seeds = [derive_seed(args.seed, "study", i) for i in range(args.seeds)]
    out = _outdir(args)
    rows = partition_study(config, seeds, partitions, workers=args.workers)
    csv_path = out / "partition.csv"
    _write_csv(csv_path, ["condition", "mean_fitness", "stderr", "runs"],
               [[r.label, repr(r.mean_fitness), repr(r.stderr), r.runs] for r in rows])
    manifest_config = {"run": config.to_json_dict(), "partitions": partitions,
                       "study_seeds": seeds}
    _write_manifest(out, "partition", args.seed, manifest_config, started, [csv_path])
    return 0


# -- argument plumbing ---------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", default="out", help="output directory (default ./out)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel fitness evaluations; never changes outputs")


def _add_world_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--robots", type=int, help="robot team size")
    p.add_argument("--beacon", choices=("on", "off"), help="light beacon toggle")
    p.add_argument("--timesteps", type=int, help="episode length")
    p.add_argument("--resources", type=int, help="resource unit count")


def _add_run_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="run config JSON file")
    p.add_argument("--generations", type=int, help="GA generations")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--episodes", type=int, help="episodes per fitness evaluation")
    p.add_argument("--controller", choices=("ant", "fc", "pc"), help="controller family")
    p.add_argument("--mode", choices=("basis", "primitive"), help="behavior repertoire")
    p.add_argument("--boundary-mix", dest="boundary_mix", action="store_const", const=True,
                   help="alternate single-robot and full-team training episodes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neuroforage",
        description="Grid-world foraging simulator and neuroevolution batch runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run one evolution and save the champion")
    _add_common(p)
    _add_run_overrides(p)
    _add_world_overrides(p)
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("eval", help="score a stored genome and write replay traces")
    _add_common(p)
    p.add_argument("--genome", required=True, help="genome JSON file")
    p.add_argument("--episodes", type=int, help="episodes to average (default 10)")
    _add_world_overrides(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate a genome across team sizes")
    _add_common(p)
    p.add_argument("--genome", required=True, help="genome JSON file")
    p.add_argument("--counts", required=True, help="comma-separated robot counts")
    p.add_argument("--episodes", type=int, help="episodes per count (default 30)")
    _add_world_overrides(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("brigade", help="classify relay transport in replay traces")
    _add_common(p)
    p.add_argument("--traces", nargs="+", required=True,
                   help="trace files or directories of *.jsonl")
    p.add_argument("--threshold", type=float, default=0.25,
                   help="multi-mover fraction that counts as a brigade (default 0.25)")
    p.set_defaults(fn=cmd_brigade)

    p = sub.add_parser("beacon", help="evolution with the beacon on vs off per time budget")
    _add_common(p)
    _add_run_overrides(p)
    _add_world_overrides(p)
    p.add_argument("--budgets", required=True, help="comma-separated episode lengths")
    p.add_argument("--seeds", type=int, default=5, help="runs per condition (default 5)")
    p.set_defaults(fn=cmd_beacon)

    p = sub.add_parser("partition", help="evolution across floor partition templates")
    _add_common(p)
    _add_run_overrides(p)
    _add_world_overrides(p)
    p.add_argument("--partitions", help="comma-separated counts from {1,4,16} (default all)")
    p.add_argument("--seeds", type=int, default=5, help="runs per condition (default 5)")
    p.set_defaults(fn=cmd_partition)
    return parser


_INPUT_ERRORS = (ConfigInvalid, MalformedGenome, MalformedTrace)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles help/usage printing
        return 0 if exc.code in (0, None) else 2
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        if args.command == "eval" and isinstance(exc, ConfigInvalid):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4
    except NeuroforageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
