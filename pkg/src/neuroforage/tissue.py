"""Variable-topology neural tissue controller.

A genome is a bag of genes with unique 3D lattice positions (layer,
row, col), layer >= 1; layer 0 is the 4x4 sensor input plane. Two gene
kinds exist:

* Motor genes become motor neurons wired to the up-to-9 nodes in the
  3x3 neighborhood one layer below (input-plane nodes under layer 1,
  motor neurons elsewhere; absent neighbors contribute nothing). Each
  computes a binary output from a weighted sum through one of four
  two-threshold activation functions and may carry a behavior tag.
* Decision genes become regulator neurons reading the whole input
  plane. A firing decision neuron emits a chemical that fills an
  axis-aligned box around its position; motor neurons accumulate the
  emission strengths of every firing field covering them.

Coarse coding selects the motor neurons whose summed concentration is
maximal (and positive): only those compute and may trigger behaviors;
everything else is inhibited, which is what keeps spurious neurons
from drowning out useful ones. If no decision neuron fires the robot
idles.

Development (`develop`) is a pure function of the genome, and
`activate` is a pure function of (tissue, input plane).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .behaviors import BehaviorId, Mode, repertoire
from .controller import PLANE_COLS, PLANE_ROWS, InputPlane, plane_index
from .errors import MalformedGenome, ModeMismatch

WEIGHT_BOUND = 1.0
THRESHOLD_BOUND = 3.0
EXTENT_MIN = 1
EXTENT_MAX = 3
# Fresh decision genes draw extents from [SEED_EXTENT_MIN, EXTENT_MAX] so a
# young field covers a useful module; mutation may later shrink it to 1.
SEED_EXTENT_MIN = 2
MAX_NEURONS = 256  # structural cap, well above the 10..110 seeding range

THRESHOLD_FNS = ("up", "down", "ditch", "mound")

Position = tuple[int, int, int]


@dataclass(frozen=True, slots=True)
class MotorGene:
    position: Position
    weights: tuple[float, ...]  # 9 weights, row-major over the 3x3 neighborhood
    theta1: float
    theta2: float
    fn: str
    tag: BehaviorId | None


@dataclass(frozen=True, slots=True)
class DecisionGene:
    position: Position
    weights: tuple[float, ...]  # 16 weights over the input plane
    threshold: float
    extents: tuple[int, int, int]  # box half-extents (layer, row, col)
    strength: float


@dataclass(frozen=True, slots=True)
class Genome:
    mode: Mode
    motor_genes: tuple[MotorGene, ...]
    decision_genes: tuple[DecisionGene, ...]
    execution_order: tuple[int, ...] | None = None  # primitive mode only

    @property
    def size(self) -> int:
        return len(self.motor_genes) + len(self.decision_genes)


def _check_position(pos) -> None:
    if (not isinstance(pos, tuple) or len(pos) != 3
            or not all(isinstance(v, int) for v in pos)):
        raise MalformedGenome(f"position must be a 3-tuple of ints, got {pos!r}")
    if pos[0] < 1:
        raise MalformedGenome(f"gene layer must be >= 1, got {pos!r}")


def validate_genome(genome: Genome) -> None:
    """Raise MalformedGenome unless all structural invariants hold."""
    mode = Mode(genome.mode)
    rep = repertoire(mode)
    if not genome.motor_genes:
        raise MalformedGenome("genome has no motor genes")
    if genome.size > MAX_NEURONS:
        raise MalformedGenome(f"genome has {genome.size} genes, cap is {MAX_NEURONS}")
    positions = set()
    for gene in genome.motor_genes + genome.decision_genes:
        _check_position(gene.position)
        if gene.position in positions:
            raise MalformedGenome(f"duplicate gene position {gene.position}")
        positions.add(gene.position)
    tagged = 0
    for g in genome.motor_genes:
        if len(g.weights) != 9:
            raise MalformedGenome("motor gene needs 9 weights")
        if any(abs(w) > WEIGHT_BOUND for w in g.weights):
            raise MalformedGenome("motor weight out of bounds")
        if abs(g.theta1) > THRESHOLD_BOUND or abs(g.theta2) > THRESHOLD_BOUND:
            raise MalformedGenome("motor threshold out of bounds")
        if g.fn not in THRESHOLD_FNS:
            raise MalformedGenome(f"unknown threshold function {g.fn!r}")
        if g.tag is not None:
            if g.tag.mode != mode or not 0 <= g.tag.index < len(rep):
                raise MalformedGenome(f"tag {g.tag!r} not in the {mode.value} repertoire")
            tagged += 1
    if tagged == 0:
        raise MalformedGenome("genome needs at least one tagged motor gene")
    for g in genome.decision_genes:
        if len(g.weights) != 16:
            raise MalformedGenome("decision gene needs 16 weights")
        if any(abs(w) > WEIGHT_BOUND for w in g.weights):
            raise MalformedGenome("decision weight out of bounds")
        if abs(g.threshold) > THRESHOLD_BOUND:
            raise MalformedGenome("decision threshold out of bounds")
        if (len(g.extents) != 3
                or any(not isinstance(e, int) or not EXTENT_MIN <= e <= EXTENT_MAX
                       for e in g.extents)):
            raise MalformedGenome("decision field extents out of bounds")
        if not 0.0 < g.strength <= 1.0:
            raise MalformedGenome("decision emission strength must be in (0, 1]")
    if mode is Mode.PRIMITIVE:
        if genome.execution_order is None or sorted(genome.execution_order) != list(range(len(rep))):
            raise MalformedGenome("primitive genome needs an execution-order permutation")
    elif genome.execution_order is not None:
        raise MalformedGenome("basis genomes have a fixed execution order")


class Tissue:
    """Developed phenotype: wired lattice plus cached field geometry."""

    def __init__(self, genome: Genome):
        validate_genome(genome)
        self.genome = genome
        self.mode = Mode(genome.mode)
        rep = repertoire(self.mode)
        if self.mode is Mode.PRIMITIVE:
            self.order: tuple[BehaviorId, ...] = tuple(rep[i] for i in genome.execution_order)
        else:
            self.order = rep

        motors = sorted(genome.motor_genes, key=lambda g: g.position)
        self.motor_positions = [g.position for g in motors]
        self.tags = [g.tag for g in motors]
        index_of = {pos: i for i, pos in enumerate(self.motor_positions)}
        n = len(motors)

        self.umin = np.array([min(g.theta1, g.theta2) for g in motors])
        self.umax = np.array([max(g.theta1, g.theta2) for g in motors])
        self.fn_code = np.array([THRESHOLD_FNS.index(g.fn) for g in motors])

        # Per-layer dense weight matrices; layer 1 reads the input plane,
        # higher layers read the sorted motor outputs of the layer below.
        # Decision neurons occupy lattice slots but carry no wiring.
        by_layer: dict[int, list[int]] = {}
        for i, (layer, _, _) in enumerate(self.motor_positions):
            by_layer.setdefault(layer, []).append(i)
        self.layers = sorted(by_layer)
        self.layer_motors = {l: by_layer[l] for l in self.layers}
        self.layer_weights: dict[int, np.ndarray] = {}
        self.input_counts = [0] * n
        for layer in self.layers:
            rows = by_layer[layer]
            below = by_layer.get(layer - 1, []) if layer > 1 else []
            width = PLANE_ROWS * PLANE_COLS if layer == 1 else len(below)
            below_index = {self.motor_positions[j]: k for k, j in enumerate(below)}
            w = np.zeros((len(rows), width))
            for k, i in enumerate(rows):
                _, row, col = self.motor_positions[i]
                gene = motors[i]
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        weight = gene.weights[(dr + 1) * 3 + (dc + 1)]
                        if layer == 1:
                            r2, c2 = row + dr, col + dc
                            if 0 <= r2 < PLANE_ROWS and 0 <= c2 < PLANE_COLS:
                                w[k, plane_index(r2, c2)] = weight
                                self.input_counts[i] += 1
                        else:
                            j = below_index.get((layer - 1, row + dr, col + dc))
                            if j is not None:
                                w[k, j] = weight
                                self.input_counts[i] += 1
            self.layer_weights[layer] = w

        decisions = sorted(genome.decision_genes, key=lambda g: g.position)
        d = len(decisions)
        self.decision_positions = [g.position for g in decisions]
        self.decision_weights = np.array([g.weights for g in decisions]).reshape(d, 16)
        self.decision_thresholds = np.array([g.threshold for g in decisions])
        self.strengths = np.array([g.strength for g in decisions])
        # coverage[d, m]: does decision d's box cover motor m?
        cover = np.zeros((d, n))
        for di, g in enumerate(decisions):
            (gl, gr, gc), (el, er, ec) = g.position, g.extents
            for mi, (ml, mr, mc) in enumerate(self.motor_positions):
                if abs(ml - gl) <= el and abs(mr - gr) <= er and abs(mc - gc) <= ec:
                    cover[di, mi] = 1.0
        self.coverage = cover

    def input_connection_count(self, position: Position) -> int:
        return self.input_counts[self.motor_positions.index(position)]


def develop(genome: Genome) -> Tissue:
    """Grow the phenotype lattice from a genome (pure)."""
    return Tissue(genome)


def activate(tissue: Tissue, plane: InputPlane) -> tuple[frozenset[BehaviorId], tuple[BehaviorId, ...]]:
    """One decision pass: regulation, coarse-coded selection, motor outputs.

    Decision neurons fire when their weighted plane sum reaches their
    threshold. Motor neurons covered by the maximal (positive) summed
    field concentration are active; active neurons evaluate bottom-up,
    inactive ones output 0, and the union of tags on active neurons
    that output 1 is the triggered behavior set.
    """
    if len(tissue.decision_positions) == 0:
        return frozenset(), tissue.order
    x = np.asarray(plane)
    fired = (tissue.decision_weights @ x) >= tissue.decision_thresholds
    if not fired.any():
        return frozenset(), tissue.order
    conc = (tissue.strengths * fired) @ tissue.coverage
    cmax = conc.max()
    if not cmax > 0.0:
        return frozenset(), tissue.order
    active = conc == cmax

    n = len(tissue.motor_positions)
    outputs = np.zeros(n)
    prev = x
    for layer in tissue.layers:
        idx = tissue.layer_motors[layer]
        if layer > 1:
            below = tissue.layer_motors.get(layer - 1, [])
            prev = outputs[below] if below else np.zeros(0)
        u = tissue.layer_weights[layer] @ prev
        umin = tissue.umin[idx]
        umax = tissue.umax[idx]
        code = tissue.fn_code[idx]
        up = u >= umin
        ditch = up & (u < umax)
        out = np.select([code == 0, code == 1, code == 2], [up, ~up, ditch], default=~ditch)
        outputs[idx] = out & active[idx]

    triggered = {tissue.tags[i] for i in np.nonzero(outputs)[0] if tissue.tags[i] is not None}
    return frozenset(triggered), tissue.order


class TissueController:
    """DecisionSource adapter for a developed tissue."""

    def __init__(self, tissue: Tissue):
        self.tissue = tissue

    def decide(self, plane: InputPlane) -> tuple[frozenset[BehaviorId], Sequence[BehaviorId]]:
        return activate(self.tissue, plane)


# -- seeding and variation -------------------------------------------------


@dataclass(frozen=True, slots=True)
class SeedConfig:
    """Knobs for pre-growing the initial tissue population.

    The seed layer is centered over the 4x4 input plane (columns -1..4
    for the default 6) so nearly every seed neuron is wired to live
    sensor nodes rather than dangling off the plane's edge.
    """

    min_neurons: int = 10
    max_neurons: int = 110
    seed_rows: int = 3
    seed_cols: int = 6
    motor_fraction: float = 0.9

    @property
    def seed_col_offset(self) -> int:
        return -((self.seed_cols - PLANE_COLS) // 2)


_NEIGHBORHOOD = [(dl, dr, dc)
                 for dl in (-1, 0, 1) for dr in (-1, 0, 1) for dc in (-1, 0, 1)
                 if (dl, dr, dc) != (0, 0, 0)]


def _uniform(rng: np.random.Generator, bound: float, n: int) -> tuple[float, ...]:
    return tuple(float(v) for v in rng.uniform(-bound, bound, n))


def _draw_tag(rng: np.random.Generator, mode: Mode) -> BehaviorId:
    # Fresh genes always carry a tag; untagged (hidden) genes only arise
    # from explicit construction. Spurious tags are the raw material the
    # regulation layer learns to mask.
    rep = repertoire(mode)
    return rep[int(rng.integers(0, len(rep)))]


def _draw_motor(rng: np.random.Generator, position: Position, mode: Mode) -> MotorGene:
    return MotorGene(
        position=position,
        weights=_uniform(rng, WEIGHT_BOUND, 9),
        theta1=float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)),
        theta2=float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)),
        fn=THRESHOLD_FNS[int(rng.integers(0, 4))],
        tag=_draw_tag(rng, mode),
    )


def _draw_decision(rng: np.random.Generator, position: Position) -> DecisionGene:
    return DecisionGene(
        position=position,
        weights=_uniform(rng, WEIGHT_BOUND, 16),
        threshold=float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)),
        extents=tuple(int(v) for v in rng.integers(SEED_EXTENT_MIN, EXTENT_MAX + 1, 3)),
        strength=float(1.0 - rng.uniform(0.0, 1.0)),
    )


def _canonical(genes) -> tuple:
    """Genes in position order; constructors emit this canonical form."""
    return tuple(sorted(genes, key=lambda g: g.position))


def _free_adjacent(occupied: set[Position]) -> set[Position]:
    free = set()
    for l, r, c in occupied:
        for dl, dr, dc in _NEIGHBORHOOD:
            pos = (l + dl, r + dr, c + dc)
            if pos[0] >= 1 and pos not in occupied:
                free.add(pos)
    return free


def _occupy(pos: Position, occupied: set[Position], frontier: set[Position]) -> None:
    occupied.add(pos)
    frontier.discard(pos)
    l, r, c = pos
    for dl, dr, dc in _NEIGHBORHOOD:
        n = (l + dl, r + dr, c + dc)
        if n[0] >= 1 and n not in occupied:
            frontier.add(n)


def _grow_gene(rng: np.random.Generator, mode: Mode, cfg: SeedConfig,
               motor: list[MotorGene], decision: list[DecisionGene],
               occupied: set[Position], frontier: set[Position]) -> None:
    candidates = sorted(frontier)
    pos = candidates[int(rng.integers(0, len(candidates)))]
    if rng.random() < cfg.motor_fraction:
        motor.append(_draw_motor(rng, pos, mode))
    else:
        decision.append(_draw_decision(rng, pos))
    _occupy(pos, occupied, frontier)


def seed_genome(rng: np.random.Generator, mode: Mode,
                config: SeedConfig = SeedConfig()) -> Genome:
    """Pre-grown starter genome: fixed motor layer plus random growth.

    A seed culture of seed_rows x seed_cols motor genes fills layer 1;
    genes are then grown at free adjacent positions until the total
    reaches a uniform draw from [min_neurons, max_neurons], floored at
    the seed-layer size. The first two grown genes are decision genes
    (a tissue without one can never fire); the rest split 90% motor /
    10% decision by default.
    """
    mode = Mode(mode)
    target = int(rng.integers(config.min_neurons, config.max_neurons + 1))
    motor: list[MotorGene] = []
    decision: list[DecisionGene] = []
    occupied: set[Position] = set()
    frontier: set[Position] = set()
    col0 = config.seed_col_offset
    for r in range(config.seed_rows):
        for c in range(config.seed_cols):
            pos = (1, r, col0 + c)
            motor.append(_draw_motor(rng, pos, mode))
            _occupy(pos, occupied, frontier)
    while len(occupied) < min(target, len(motor) + 2):
        candidates = sorted(frontier)
        pos = candidates[int(rng.integers(0, len(candidates)))]
        decision.append(_draw_decision(rng, pos))
        _occupy(pos, occupied, frontier)
    while len(occupied) < target:
        _grow_gene(rng, mode, config, motor, decision, occupied, frontier)
    if all(g.tag is None for g in motor):
        i = int(rng.integers(0, len(motor)))
        rep = repertoire(mode)
        motor[i] = replace(motor[i], tag=rep[int(rng.integers(0, len(rep)))])
    order = tuple(int(i) for i in rng.permutation(len(repertoire(mode)))) \
        if mode is Mode.PRIMITIVE else None
    genome = Genome(mode, _canonical(motor), _canonical(decision), order)
    validate_genome(genome)
    return genome


_MOTOR_FIELDS = tuple(f"w{i}" for i in range(9)) + ("theta1", "theta2", "fn", "tag")
_DECISION_FIELDS = tuple(f"v{i}" for i in range(16)) + (
    "threshold", "e0", "e1", "e2", "strength")


def _mutate_motor(rng: np.random.Generator, g: MotorGene, p: float, mode: Mode) -> MotorGene:
    weights = list(g.weights)
    theta1, theta2, fn, tag = g.theta1, g.theta2, g.fn, g.tag
    for name in _MOTOR_FIELDS:
        if rng.random() >= p:
            continue
        if name.startswith("w"):
            weights[int(name[1:])] = float(rng.uniform(-WEIGHT_BOUND, WEIGHT_BOUND))
        elif name == "theta1":
            theta1 = float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND))
        elif name == "theta2":
            theta2 = float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND))
        elif name == "fn":
            fn = THRESHOLD_FNS[int(rng.integers(0, 4))]
        else:
            tag = _draw_tag(rng, mode)
    return MotorGene(g.position, tuple(weights), theta1, theta2, fn, tag)


def _mutate_decision(rng: np.random.Generator, g: DecisionGene, p: float) -> DecisionGene:
    weights = list(g.weights)
    threshold, strength = g.threshold, g.strength
    extents = list(g.extents)
    for name in _DECISION_FIELDS:
        if rng.random() >= p:
            continue
        if name.startswith("v"):
            weights[int(name[1:])] = float(rng.uniform(-WEIGHT_BOUND, WEIGHT_BOUND))
        elif name == "threshold":
            threshold = float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND))
        elif name == "strength":
            strength = float(1.0 - rng.uniform(0.0, 1.0))
        else:
            extents[int(name[1])] = int(rng.integers(EXTENT_MIN, EXTENT_MAX + 1))
    return DecisionGene(g.position, tuple(weights), threshold, tuple(extents), strength)


def mutate(genome: Genome, rng: np.random.Generator, p_m: float,
           config: SeedConfig = SeedConfig()) -> Genome:
    """Field redraws, gene insertion/deletion, and order swaps at rate p_m.

    Every gene field is independently redrawn within its bounds with
    probability p_m; one random gene may be inserted at a free adjacent
    position; each gene may be deleted (never the last tagged motor
    gene); primitive genomes may swap two execution-order slots. The
    result always validates.
    """
    if not 0.0 <= p_m <= 1.0:
        raise ValueError(f"p_m must be in [0, 1], got {p_m}")
    mode = Mode(genome.mode)
    motor = [_mutate_motor(rng, g, p_m, mode) for g in genome.motor_genes]
    decision = [_mutate_decision(rng, g, p_m) for g in genome.decision_genes]

    if rng.random() < p_m and len(motor) + len(decision) < MAX_NEURONS:
        occupied = {g.position for g in motor} | {g.position for g in decision}
        _grow_gene(rng, mode, config, motor, decision, occupied)

    kept_motor: list[MotorGene] = []
    for i, g in enumerate(motor):
        if rng.random() < p_m:
            others = kept_motor + motor[i + 1:]
            if not others:
                kept_motor.append(g)  # never drop the final motor gene
            elif g.tag is not None and not any(m.tag is not None for m in others):
                kept_motor.append(g)  # deletion would strip the last tag
            continue
        kept_motor.append(g)
    motor = kept_motor
    decision = [g for g in decision if rng.random() >= p_m]

    order = genome.execution_order
    if mode is Mode.PRIMITIVE and rng.random() < p_m:
        i, j = (int(v) for v in rng.choice(len(order), 2, replace=False))
        swapped = list(order)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        order = tuple(swapped)

    if all(g.tag is None for g in motor):
        i = int(rng.integers(0, len(motor)))
        rep = repertoire(mode)
        motor[i] = replace(motor[i], tag=rep[int(rng.integers(0, len(rep)))])
    child = Genome(mode, _canonical(motor), _canonical(decision), order)
    validate_genome(child)
    return child


def crossover(a: Genome, b: Genome, rng: np.random.Generator) -> tuple[Genome, Genome]:
    """Single-cut recombination over position-sorted gene lists.

    Both parents' genes are sorted by lattice position; the children
    exchange gene suffixes at one cut index. When a prefix and suffix
    carry genes at the same position, the suffix donor's gene wins.
    Execution order follows the prefix donor.
    """
    if Mode(a.mode) != Mode(b.mode):
        raise ModeMismatch(f"cannot cross {a.mode} with {b.mode}")
    genes_a = sorted(a.motor_genes + a.decision_genes, key=lambda g: g.position)
    genes_b = sorted(b.motor_genes + b.decision_genes, key=lambda g: g.position)
    cut = int(rng.integers(0, max(len(genes_a), len(genes_b)) + 1))

    def build(prefix, suffix, donor: Genome) -> Genome:
        merged = {g.position: g for g in prefix}
        merged.update({g.position: g for g in suffix})
        genes = sorted(merged.values(), key=lambda g: g.position)
        motor = tuple(g for g in genes if isinstance(g, MotorGene))
        decision = tuple(g for g in genes if isinstance(g, DecisionGene))
        if not motor:
            return donor  # degenerate cut; fall back to the prefix donor
        if all(g.tag is None for g in motor):
            i = int(rng.integers(0, len(motor)))
            rep = repertoire(Mode(donor.mode))
            motor = motor[:i] + (replace(motor[i], tag=rep[int(rng.integers(0, len(rep)))]),) \
                + motor[i + 1:]
        child = Genome(Mode(donor.mode), motor, decision, donor.execution_order)
        validate_genome(child)
        return child

    child1 = build(genes_a[:cut], genes_b[cut:], a)
    child2 = build(genes_b[:cut], genes_a[cut:], b)
    return child1, child2


# -- serialization ---------------------------------------------------------


def _hex(value: float) -> str:
    return float(value).hex()


def _unhex(value) -> float:
    try:
        return float.fromhex(value)
    except (TypeError, ValueError) as exc:
        raise MalformedGenome(f"bad float encoding {value!r}") from exc


def _tag_to_dict(tag: BehaviorId | None):
    return None if tag is None else {"mode": tag.mode.value, "index": tag.index}


def _tag_from_dict(data) -> BehaviorId | None:
    if data is None:
        return None
    try:
        return BehaviorId(Mode(data["mode"]), int(data["index"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedGenome(f"bad behavior tag {data!r}") from exc


def genome_to_dict(genome: Genome) -> dict:
    """JSON-ready form; floats use hex encoding for exact round-trips."""
    return {
        "kind": "ant",
        "mode": genome.mode.value,
        "execution_order": list(genome.execution_order) if genome.execution_order else None,
        "motor_genes": [
            {
                "position": list(g.position),
                "weights": [_hex(w) for w in g.weights],
                "theta1": _hex(g.theta1),
                "theta2": _hex(g.theta2),
                "fn": g.fn,
                "tag": _tag_to_dict(g.tag),
            }
            for g in genome.motor_genes
        ],
        "decision_genes": [
            {
                "position": list(g.position),
                "weights": [_hex(w) for w in g.weights],
                "threshold": _hex(g.threshold),
                "extents": list(g.extents),
                "strength": _hex(g.strength),
            }
            for g in genome.decision_genes
        ],
    }


def genome_from_dict(data: dict) -> Genome:
    if not isinstance(data, dict) or data.get("kind") != "ant":
        raise MalformedGenome("expected a tissue genome document (kind == 'ant')")
    try:
        mode = Mode(data["mode"])
        motor = tuple(
            MotorGene(
                position=tuple(int(v) for v in g["position"]),
                weights=tuple(_unhex(w) for w in g["weights"]),
                theta1=_unhex(g["theta1"]),
                theta2=_unhex(g["theta2"]),
                fn=g["fn"],
                tag=_tag_from_dict(g.get("tag")),
            )
            for g in data["motor_genes"]
        )
        decision = tuple(
            DecisionGene(
                position=tuple(int(v) for v in g["position"]),
                weights=tuple(_unhex(w) for w in g["weights"]),
                threshold=_unhex(g["threshold"]),
                extents=tuple(int(v) for v in g["extents"]),
                strength=_unhex(g["strength"]),
            )
            for g in data["decision_genes"]
        )
        raw_order = data.get("execution_order")
        order = tuple(int(i) for i in raw_order) if raw_order is not None else None
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedGenome(f"malformed genome document: {exc}") from exc
    genome = Genome(mode, motor, decision, order)
    validate_genome(genome)
    return genome


def genome_digest(data: dict) -> str:
    """Short stable id for a serialized genome document."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]
