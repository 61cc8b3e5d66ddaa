"""Study harness: density sweeps, brigade detection, cue studies.

Each study is a deterministic function of its config and seed list and
returns plain rows ready for CSV emission. Evolution-backed studies
(beacon, partition) run one full GA per cell and aggregate champion
fitness as mean and standard error across seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ConfigInvalid, MalformedTrace
from .evolve import EvolutionConfig, EvolutionLog, build_decider, run_evolution
from .rng import derive_seed
from .world import WorldConfig, create_world, fitness_of, run_episode


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


@dataclass(frozen=True, slots=True)
class SweepRow:
    robot_count: int
    mean_fitness: float
    stderr: float
    episodes: int


@dataclass(frozen=True, slots=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def row(self, robot_count: int) -> SweepRow:
        for r in self.rows:
            if r.robot_count == robot_count:
                return r
        raise KeyError(robot_count)


def scalability_sweep(genome, robot_counts, world: WorldConfig,
                      n_episodes: int, seed: int) -> SweepResult:
    """Evaluate one genome at several team sizes, resources held constant."""
    if n_episodes < 1:
        raise ConfigInvalid("n_episodes must be >= 1")
    counts = sorted(set(int(c) for c in robot_counts))
    if not counts or counts[0] < 1:
        raise ConfigInvalid("robot_counts must be positive integers")
    rows = []
    for count in counts:
        decider = build_decider(genome)
        fits = []
        for e in range(n_episodes):
            wcfg = replace(world, robot_count=count,
                           rng_seed=derive_seed(seed, "sweep", count, e))
            wcfg.validate()
            w = create_world(wcfg)
            run_episode(w, [decider] * count)
            fits.append(fitness_of(w))
        mean, stderr = _mean_stderr(fits)
        rows.append(SweepRow(count, mean, stderr, n_episodes))
    return SweepResult(tuple(rows))


@dataclass(frozen=True, slots=True)
class BrigadeStats:
    delivered_units: int
    multi_mover_units: int
    brigade_fraction: float
    is_brigade_solution: bool


def _scan_trace(records) -> tuple[dict[int, set[int]], set[int]]:
    """Per-unit mover sets and the units resting in the dump at trace end."""
    movers: dict[int, set[int]] = {}
    in_dump: set[int] = set()
    if not isinstance(records, (list, tuple)):
        raise MalformedTrace("a trace is a list of timestep records")
    for rec in records:
        if not isinstance(rec, dict) or "t" not in rec or "events" not in rec:
            raise MalformedTrace(f"timestep record missing 't'/'events': {rec!r}")
        for ev in rec["events"]:
            if not isinstance(ev, dict) or "kind" not in ev:
                raise MalformedTrace(f"event missing 'kind': {ev!r}")
            kind = ev["kind"]
            if kind == "push":
                try:
                    unit = int(ev["unit"])
                    robot = int(ev["robot"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise MalformedTrace(f"bad push event: {ev!r}") from exc
                movers.setdefault(unit, set()).add(robot)
                in_dump.discard(unit)
            elif kind == "dump":
                try:
                    in_dump.add(int(ev["unit"]))
                except (KeyError, TypeError, ValueError) as exc:
                    raise MalformedTrace(f"bad dump event: {ev!r}") from exc
    return movers, in_dump


def brigade_classify(traces, threshold: float = 0.25) -> BrigadeStats:
    """Detect relay transport from replay traces.

    A unit counts as delivered when its event stream leaves it in the
    dump interior; delivered units pushed by two or more distinct
    robots are multi-mover. The brigade flag trips when the multi-mover
    fraction of delivered units reaches the threshold.
    """
    delivered = 0
    multi = 0
    for records in traces:
        movers, in_dump = _scan_trace(records)
        delivered += len(in_dump)
        multi += sum(1 for unit in in_dump if len(movers.get(unit, ())) >= 2)
    fraction = multi / delivered if delivered else 0.0
    return BrigadeStats(delivered, multi, fraction,
                        bool(delivered and fraction >= threshold))


@dataclass(frozen=True, slots=True)
class StudyRow:
    label: str
    mean_fitness: float
    stderr: float
    runs: int
    champion_fitnesses: tuple[float, ...]


def _study_runs(base: EvolutionConfig, seeds, world_override,
                workers: int = 1) -> tuple[float, float, list[float], list[EvolutionLog]]:
    logs = []
    for seed in seeds:
        config = replace(base, seed=int(seed),
                         world=replace(base.world, **world_override))
        logs.append(run_evolution(config, workers=workers))
    champs = [log.champion_fitness for log in logs]
    mean, stderr = _mean_stderr(champs)
    return mean, stderr, champs, logs


def beacon_study(base: EvolutionConfig, time_budgets, seeds,
                 workers: int = 1) -> list[StudyRow]:
    """Champion fitness with the beacon on vs off across time budgets."""
    if not time_budgets:
        raise ConfigInvalid("time_budgets must be non-empty")
    rows = []
    for budget in time_budgets:
        for beacon in (True, False):
            mean, stderr, champs, _ = _study_runs(
                base, seeds,
                {"max_timesteps": int(budget), "beacon_enabled": beacon},
                workers=workers)
            label = f"T={int(budget)},beacon={'on' if beacon else 'off'}"
            rows.append(StudyRow(label, mean, stderr, len(champs), tuple(champs)))
    return rows


def partition_study(base: EvolutionConfig, seeds, partitions=(1, 4, 16),
                    workers: int = 1) -> list[StudyRow]:
    """Champion fitness per floor-partitioning template, equal budgets."""
    rows = []
    for count in partitions:
        if count not in (1, 4, 16):
            raise ConfigInvalid("partition counts must be drawn from {1, 4, 16}")
        mean, stderr, champs, _ = _study_runs(
            base, seeds, {"partition_count": int(count)}, workers=workers)
        rows.append(StudyRow(f"partitions={count}", mean, stderr,
                             len(champs), tuple(champs)))
    return rows


def solution_probability(logs, bar: float = 0.9) -> float:
    """Fraction of runs whose best recorded fitness exceeds the bar."""
    logs = list(logs)
    if not logs:
        raise ConfigInvalid("need at least one evolution log")
    hits = sum(1 for log in logs if log.best_fitness > bar)
    return hits / len(logs)
