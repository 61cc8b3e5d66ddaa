"""Generational GA over controller genomes.

Reproducibility contract: every random draw derives from the master
seed through a named path. Initial genome i uses (seed, "init", i);
the evaluation of individual i at generation g uses (seed, "eval", g,
i) with one child seed per episode; breeding at generation g uses
(seed, "breed", g). Fitness therefore depends only on (genome, master
seed, generation, index), never on evaluation order or worker count.

Elites carry their recorded fitness into the next generation instead
of being re-evaluated on fresh episode seeds, which makes the
population-best curve exactly non-decreasing.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import fixednets, tissue
from .behaviors import Mode
from .controller import CachingDecider
from .errors import ConfigInvalid, MalformedGenome
from .rng import derive_seed, generator
from .tissue import genome_digest
from .world import WorldConfig, create_world, fitness_of, run_episode

CONTROLLER_KINDS = ("ant", "fc", "pc")

_EVOLUTION_FIELDS = (
    "population", "crossover_prob", "mutation_prob", "tournament_size", "episodes",
    "generations", "elitism", "controller", "mode", "seed", "boundary_mix",
    "checkpoint_interval", "world",
)


@dataclass(frozen=True, slots=True)
class EvolutionConfig:
    population: int = 100
    crossover_prob: float = 0.7
    mutation_prob: float = 0.025
    tournament_size: int | None = None  # default round(0.06 * population), min 2
    episodes: int = 10
    generations: int = 50
    elitism: int = 1
    controller: str = "ant"
    mode: Mode = Mode.BASIS
    seed: int = 0
    boundary_mix: bool = False  # alternate full-team and single-robot episodes
    checkpoint_interval: int = 0
    world: WorldConfig = field(default_factory=WorldConfig)

    def tournament(self) -> int:
        if self.tournament_size is not None:
            return self.tournament_size
        return max(2, round(0.06 * self.population))

    def validate(self) -> None:
        if self.population < 2:
            raise ConfigInvalid("population must be >= 2")
        if not 2 <= self.tournament() <= self.population:
            raise ConfigInvalid("tournament size must be in [2, population]")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigInvalid("crossover_prob must be in [0, 1]")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigInvalid("mutation_prob must be in [0, 1]")
        if self.episodes < 1:
            raise ConfigInvalid("episodes must be >= 1")
        if self.generations < 0:
            raise ConfigInvalid("generations must be >= 0")
        if not 0 <= self.elitism <= self.population:
            raise ConfigInvalid("elitism must be in [0, population]")
        if self.controller not in CONTROLLER_KINDS:
            raise ConfigInvalid(f"controller must be one of {CONTROLLER_KINDS}")
        if self.checkpoint_interval < 0:
            raise ConfigInvalid("checkpoint_interval must be >= 0")
        Mode(self.mode)
        self.world.validate()
        if self.world.resource_count < 1:
            raise ConfigInvalid("evolution needs at least one resource unit to score")

    def to_json_dict(self) -> dict:
        return {
            "population": self.population,
            "crossover_prob": self.crossover_prob,
            "mutation_prob": self.mutation_prob,
            "tournament_size": self.tournament(),
            "episodes": self.episodes,
            "generations": self.generations,
            "elitism": self.elitism,
            "controller": self.controller,
            "mode": Mode(self.mode).value,
            "seed": self.seed,
            "boundary_mix": self.boundary_mix,
            "checkpoint_interval": self.checkpoint_interval,
            "world": self.world.to_json_dict(),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "EvolutionConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("run config must be a JSON object")
        unknown = set(data) - set(_EVOLUTION_FIELDS)
        if unknown:
            raise ConfigInvalid(f"unknown run config key: {sorted(unknown)[0]}")
        kwargs: dict = dict(data)
        if "world" in kwargs:
            kwargs["world"] = WorldConfig.from_json_dict(kwargs["world"])
        if "mode" in kwargs:
            try:
                kwargs["mode"] = Mode(kwargs["mode"])
            except ValueError as exc:
                raise ConfigInvalid(f"mode must be 'basis' or 'primitive'") from exc
        try:
            config = EvolutionConfig(**kwargs)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc
        config.validate()
        return config


@dataclass(slots=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_genome_id: str
    wall_time: float


@dataclass(slots=True)
class EvolutionLog:
    config: EvolutionConfig
    stats: list[GenerationStats]
    champion: object  # tissue.Genome or fixednets.FixedNetGenome
    champion_fitness: float
    checkpoints: list[tuple[int, object]]

    @property
    def best_fitness(self) -> float:
        return max(s.best_fitness for s in self.stats)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["generation", "best_fitness", "mean_fitness", "best_genome_id"])
            for s in self.stats:
                writer.writerow([s.generation, repr(s.best_fitness),
                                 repr(s.mean_fitness), s.best_genome_id])


# -- genomes and controllers ------------------------------------------------


def init_genome(config: EvolutionConfig, index: int):
    rng = generator(config.seed, "init", index)
    if config.controller == "ant":
        return tissue.seed_genome(rng, config.mode)
    return fixednets.random_fixed_net(rng, config.controller, config.mode)


def build_decider(genome) -> CachingDecider:
    if isinstance(genome, tissue.Genome):
        return CachingDecider(tissue.TissueController(tissue.develop(genome)))
    if isinstance(genome, fixednets.FixedNetGenome):
        return CachingDecider(fixednets.FixedNetController(genome))
    raise MalformedGenome(f"not a controller genome: {type(genome).__name__}")


def controller_genome_to_dict(genome) -> dict:
    if isinstance(genome, tissue.Genome):
        return tissue.genome_to_dict(genome)
    if isinstance(genome, fixednets.FixedNetGenome):
        return fixednets.fixed_net_to_dict(genome)
    raise MalformedGenome(f"not a controller genome: {type(genome).__name__}")


def controller_genome_from_dict(data: dict):
    if not isinstance(data, dict):
        raise MalformedGenome("genome document must be a JSON object")
    kind = data.get("kind")
    if kind == "ant":
        return tissue.genome_from_dict(data)
    if kind == "fixed":
        return fixednets.fixed_net_from_dict(data)
    raise MalformedGenome(f"unknown genome kind {kind!r}")


def _mutate(genome, rng, p_m):
    if isinstance(genome, tissue.Genome):
        return tissue.mutate(genome, rng, p_m)
    return fixednets.mutate_fixed(genome, rng, p_m)


def _crossover(a, b, rng):
    if isinstance(a, tissue.Genome):
        return tissue.crossover(a, b, rng)
    return fixednets.crossover_fixed(a, b, rng)


# -- evaluation -------------------------------------------------------------


def evaluate_fitness(genome, config: EvolutionConfig, eval_seed: int) -> float:
    """Mean dump fraction over the config's episodes, all robots sharing the genome."""
    decider = build_decider(genome)
    total = 0.0
    for e in range(config.episodes):
        wcfg = replace(config.world, rng_seed=derive_seed(eval_seed, "episode", e))
        if config.boundary_mix and e % 2 == 1:
            wcfg = replace(wcfg, robot_count=1)
        world = create_world(wcfg)
        run_episode(world, [decider] * len(world.robots))
        total += fitness_of(world)
    return total / config.episodes


def _evaluate_task(args) -> tuple[int, float]:
    index, genome, config, eval_seed = args
    return index, evaluate_fitness(genome, config, eval_seed)


def _evaluate_population(population, config: EvolutionConfig, gen: int,
                         cached: dict[int, float], pool) -> list[float]:
    fits: list[float | None] = [cached.get(i) for i in range(len(population))]
    tasks = [(i, population[i], config, derive_seed(config.seed, "eval", gen, i))
             for i in range(len(population)) if fits[i] is None]
    if pool is not None and len(tasks) > 1:
        for i, fit in pool.map(_evaluate_task, tasks, chunksize=4):
            fits[i] = fit
    else:
        for task in tasks:
            i, fit = _evaluate_task(task)
            fits[i] = fit
    return fits  # type: ignore[return-value]


# -- selection and breeding ---------------------------------------------


def _tournament_index(fitnesses, rng: np.random.Generator, size: int) -> int:
    picks = rng.choice(len(fitnesses), size=size, replace=False)
    return min((int(i) for i in picks), key=lambda i: (-fitnesses[i], i))


def tournament_select(population, fitnesses, rng: np.random.Generator,
                      size: int | None = None):
    """Uniformly draw `size` distinct individuals, return the fittest.

    Ties break toward the lower index. Size defaults to round(0.06 * P)
    with a floor of 2.
    """
    if not population:
        raise ConfigInvalid("cannot select from an empty population")
    if size is None:
        size = max(2, round(0.06 * len(population)))
    size = min(size, len(population))
    return population[_tournament_index(fitnesses, rng, size)]


def next_generation(population, fitnesses, config: EvolutionConfig,
                    rng: np.random.Generator):
    """Elites plus tournament/crossover/mutation offspring.

    Returns (new population of the same size, carried fitness map for
    the copied elites).
    """
    p = len(population)
    order = sorted(range(p), key=lambda i: (-fitnesses[i], i))
    elites = order[:config.elitism]
    new = [population[i] for i in elites]
    carried = {slot: fitnesses[i] for slot, i in enumerate(elites)}
    size = config.tournament()
    while len(new) < p:
        i1 = _tournament_index(fitnesses, rng, size)
        i2 = _tournament_index(fitnesses, rng, size)
        a, b = population[i1], population[i2]
        if rng.random() < config.crossover_prob:
            a, b = _crossover(a, b, rng)
        new.append(_mutate(a, rng, config.mutation_prob))
        if len(new) < p:
            new.append(_mutate(b, rng, config.mutation_prob))
    return new, carried


def run_evolution(config: EvolutionConfig, workers: int = 1) -> EvolutionLog:
    """Full GA run; byte-identical results for a given config regardless of workers."""
    config.validate()
    population = [init_genome(config, i) for i in range(config.population)]
    cached: dict[int, float] = {}
    stats: list[GenerationStats] = []
    checkpoints: list[tuple[int, object]] = []
    champion = None
    champion_fitness = -1.0

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for gen in range(config.generations + 1):
            start = time.perf_counter()
            fits = _evaluate_population(population, config, gen, cached, pool)
            best_idx = min(range(len(population)), key=lambda i: (-fits[i], i))
            if fits[best_idx] > champion_fitness:
                champion = population[best_idx]
                champion_fitness = fits[best_idx]
            stats.append(GenerationStats(
                generation=gen,
                best_fitness=fits[best_idx],
                mean_fitness=sum(fits) / len(fits),
                best_genome_id=genome_digest(controller_genome_to_dict(population[best_idx])),
                wall_time=time.perf_counter() - start,
            ))
            if config.checkpoint_interval and gen % config.checkpoint_interval == 0:
                checkpoints.append((gen, population[best_idx]))
            if gen < config.generations:
                population, cached = next_generation(
                    population, fits, config, generator(config.seed, "breed", gen))
    finally:
        if pool is not None:
            pool.shutdown()
    return EvolutionLog(config, stats, champion, champion_fitness, checkpoints)
