"""Deterministic grid-world foraging simulator and neuroevolution engine.

Public surface: the world simulator (`world`), sensor encoding and the
controller contract (`controller`), the neural-tissue controller and
its genetic operators (`tissue`), fixed-topology baselines
(`fixednets`), the GA (`evolve`), study harnesses (`experiments`), and
the batch CLI (`cli`).
"""

__version__ = "0.1.0"

from .behaviors import BehaviorId, Mode, repertoire
from .controller import CachingDecider, DecisionSource, encode_inputs, sensor_space_size
from .errors import (
    ConfigInvalid,
    InvariantViolation,
    MalformedGenome,
    MalformedTrace,
    ModeMismatch,
    NeuroforageError,
    UnknownBehavior,
    UnknownRobot,
    ZeroResources,
)
from .evolve import (
    EvolutionConfig,
    EvolutionLog,
    GenerationStats,
    evaluate_fitness,
    next_generation,
    run_evolution,
    tournament_select,
)
from .experiments import (
    BrigadeStats,
    SweepResult,
    beacon_study,
    brigade_classify,
    partition_study,
    scalability_sweep,
    solution_probability,
)
from .fixednets import FixedNetGenome, activate_fixed, random_fixed_net
from .tissue import (
    DecisionGene,
    Genome,
    MotorGene,
    Tissue,
    activate,
    crossover,
    develop,
    mutate,
    seed_genome,
)
from .world import (
    FloorColor,
    Heading,
    LightPosition,
    Rect,
    SensorFrame,
    WorldConfig,
    WorldState,
    apply_behavior,
    create_world,
    fitness_of,
    run_episode,
    sense,
    step_all,
)

__all__ = [name for name in dir() if not name.startswith("_")]
