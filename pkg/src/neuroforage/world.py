"""Deterministic 2D grid world for the resource-collection task.

Geometry conventions (frozen; tests depend on them):

* Cells are addressed (x, y) with x increasing east and y increasing
  north, so heading N is +y, E is +x, S is -y, W is -x. A left turn is
  N -> W -> S -> E -> N.
* A robot occupies a 2x2 footprint whose ``anchor`` is the min-x/min-y
  corner. Rotations happen in place; the footprint cells do not depend
  on heading, only the notion of "front" does.
* The outermost ring of the grid is the Orange work-area perimeter.
  Robots may never enter it and resources may never be pushed onto it.
* The dump is a rectangle whose outermost ring is painted Blue and the
  ring inside that Red; the dump interior (everything inside the Blue
  ring, Red included) is where delivered resources count.
* Resource transport is bulldozing: a robot moving into a cell shoves
  every unit in that cell one step further along the push direction.
  Piles are allowed (many units per cell) and pushes merge piles.
  Moves that cannot push (the dump behavior's backward step) treat
  units as obstacles, so a robot footprint never covers a unit.
* Partition cues are Blue grid lines painted on the floor. They are
  templates, not walls; robots drive over them freely.

Within a timestep robots act in ascending id order; each one senses the
world as left by its predecessors, then executes its triggered
behaviors in repertoire order. Blocked moves are no-ops recorded as
events. All randomness is confined to world creation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from . import behaviors as bh
from .behaviors import BehaviorId
from .errors import ConfigInvalid, InvariantViolation, UnknownBehavior, UnknownRobot, ZeroResources


class Heading(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3


_VX = (0, 1, 0, -1)
_VY = (1, 0, -1, 0)
_LEFT = (Heading.W, Heading.N, Heading.E, Heading.S)
_RIGHT = (Heading.E, Heading.S, Heading.W, Heading.N)
_HEADING_ANGLE = (90.0, 0.0, -90.0, 180.0)

# Front-edge corner cells of the 2x2 footprint, as anchor offsets:
# (front-left, front-right) for each heading.
_FRONT = (
    ((0, 1), (1, 1)),  # N
    ((1, 1), (1, 0)),  # E
    ((1, 0), (0, 0)),  # S
    ((0, 0), (0, 1)),  # W
)


class FloorColor(IntEnum):
    FLOOR = 0
    BLUE = 1
    RED = 2
    ORANGE = 3


class LightPosition(IntEnum):
    NOT_VISIBLE = 0
    LEFT = 1
    CENTER = 2
    RIGHT = 3


@dataclass(frozen=True, slots=True)
class Rect:
    x: int
    y: int
    width: int
    height: int

    def contains(self, x: int, y: int) -> bool:
        return self.x <= x < self.x + self.width and self.y <= y < self.y + self.height

    def cells(self) -> list[tuple[int, int]]:
        return [(x, y) for y in range(self.y, self.y + self.height)
                for x in range(self.x, self.x + self.width)]


_CONFIG_FIELDS = (
    "grid_width", "grid_height", "robot_count", "resource_count", "dump_rect",
    "beacon_position", "beacon_enabled", "partition_count", "max_timesteps", "rng_seed",
)


@dataclass(frozen=True, slots=True)
class WorldConfig:
    """Parameters of one episode's world.

    ``dump_rect`` and ``beacon_position`` default to a 4x4 dump centered
    against the north wall and a beacon at the dump's center point.
    """

    grid_width: int = 16
    grid_height: int = 16
    robot_count: int = 4
    resource_count: int = 30
    dump_rect: Rect | None = None
    beacon_position: tuple[float, float] | None = None
    beacon_enabled: bool = True
    partition_count: int = 1
    max_timesteps: int = 300
    rng_seed: int = 0

    def resolved(self) -> "WorldConfig":
        """Copy with defaults expanded to concrete values."""
        dump = self.dump_rect
        if dump is None:
            dump = Rect((self.grid_width - 4) // 2, self.grid_height - 5, 4, 4)
        beacon = self.beacon_position
        if beacon is None:
            beacon = (dump.x + dump.width / 2.0, dump.y + dump.height / 2.0)
        return replace(self, dump_rect=dump, beacon_position=beacon)

    def validate(self) -> None:
        c = self.resolved()
        w, h = c.grid_width, c.grid_height
        if w < 6 or h < 6:
            raise ConfigInvalid("grid must be at least 6x6 to hold a perimeter, dump, and robots")
        if c.robot_count < 1:
            raise ConfigInvalid("robot_count must be >= 1")
        if c.resource_count < 0:
            raise ConfigInvalid("resource_count must be >= 0")
        if c.max_timesteps < 1:
            raise ConfigInvalid("max_timesteps must be >= 1")
        dump = c.dump_rect
        if dump.width < 3 or dump.height < 3:
            raise ConfigInvalid("dump_rect must be at least 3x3 so it has an interior")
        if not (1 <= dump.x and 1 <= dump.y
                and dump.x + dump.width <= w - 1 and dump.y + dump.height <= h - 1):
            raise ConfigInvalid("dump_rect must lie fully inside the work area (off the perimeter)")
        if c.partition_count not in (1, 4, 16):
            raise ConfigInvalid("partition_count must be one of 1, 4, 16")
        p = int(math.isqrt(c.partition_count))
        if p > 1 and ((w - 2) % p or (h - 2) % p):
            raise ConfigInvalid(
                f"work area {w - 2}x{h - 2} does not divide into {c.partition_count} equal regions")
        bx, by = c.beacon_position
        if not (0.0 <= bx <= w and 0.0 <= by <= h):
            raise ConfigInvalid("beacon_position must lie within the grid")
        # Necessary (not sufficient) placement bound; geometric failures
        # surface as ConfigInvalid from create_world's placement loop.
        free = _eligible_floor_count(c)
        if c.robot_count * 4 + c.resource_count > free:
            raise ConfigInvalid(
                f"{c.robot_count} robots and {c.resource_count} units need more than "
                f"the {free} available floor cells")

    def to_json_dict(self) -> dict:
        c = self.resolved()
        return {
            "grid_width": c.grid_width,
            "grid_height": c.grid_height,
            "robot_count": c.robot_count,
            "resource_count": c.resource_count,
            "dump_rect": [c.dump_rect.x, c.dump_rect.y, c.dump_rect.width, c.dump_rect.height],
            "beacon_position": list(c.beacon_position),
            "beacon_enabled": c.beacon_enabled,
            "partition_count": c.partition_count,
            "max_timesteps": c.max_timesteps,
            "rng_seed": c.rng_seed,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "WorldConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("world config must be a JSON object")
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ConfigInvalid(f"unknown world config key: {sorted(unknown)[0]}")
        kwargs: dict = dict(data)
        if kwargs.get("dump_rect") is not None:
            rect = kwargs["dump_rect"]
            if not (isinstance(rect, list) and len(rect) == 4):
                raise ConfigInvalid("dump_rect must be [x, y, width, height]")
            kwargs["dump_rect"] = Rect(*(int(v) for v in rect))
        if kwargs.get("beacon_position") is not None:
            pos = kwargs["beacon_position"]
            if not (isinstance(pos, list) and len(pos) == 2):
                raise ConfigInvalid("beacon_position must be [x, y]")
            kwargs["beacon_position"] = (float(pos[0]), float(pos[1]))
        try:
            config = WorldConfig(**kwargs)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc
        config.validate()
        return config


class SensorFrame(NamedTuple):
    """One robot's discretized sensor readout.

    v1..v4 and c1..c4 cover the 2x2 block directly ahead of the front
    edge, ordered near-left, near-right, far-left, far-right (left and
    right relative to the heading). Cells beyond the grid read as
    Orange with no resource. s1/s2 scan three cells ahead of the
    front-left/front-right column for another robot, the perimeter, or
    the grid edge. lp/ld give beacon bearing and binned range; m1..m4
    echo the memory bits.
    """

    v1: int
    v2: int
    v3: int
    v4: int
    c1: FloorColor
    c2: FloorColor
    c3: FloorColor
    c4: FloorColor
    s1: int
    s2: int
    lp: LightPosition
    ld: int
    m1: int
    m2: int
    m3: int
    m4: int


@dataclass(slots=True)
class ResourceUnit:
    id: int
    position: tuple[int, int]
    last_mover: int | None = None
    mover_set: set[int] = field(default_factory=set)


@dataclass(slots=True)
class RobotState:
    id: int
    ax: int
    ay: int
    heading: Heading
    memory: list[int]

    @property
    def anchor(self) -> tuple[int, int]:
        return (self.ax, self.ay)

    @property
    def pose(self) -> tuple[int, int, Heading]:
        return (self.ax, self.ay, self.heading)

    def footprint(self) -> tuple[tuple[int, int], ...]:
        ax, ay = self.ax, self.ay
        return ((ax, ay), (ax + 1, ay), (ax, ay + 1), (ax + 1, ay + 1))


@dataclass(frozen=True, slots=True)
class Cell:
    floor_color: FloorColor
    resource_units: tuple[int, ...]


@dataclass(slots=True)
class Event:
    t: int
    kind: str
    robot: int
    behavior: str | None = None
    unit: int | None = None
    src: tuple[int, int] | None = None
    dst: tuple[int, int] | None = None
    bit: int | None = None
    value: int | None = None

    def to_record(self) -> dict:
        rec: dict = {"kind": self.kind, "robot": self.robot}
        if self.behavior is not None:
            rec["behavior"] = self.behavior
        if self.unit is not None:
            rec["unit"] = self.unit
        if self.src is not None:
            rec["from"] = list(self.src)
        if self.dst is not None:
            rec["to"] = list(self.dst)
        if self.bit is not None:
            rec["bit"] = self.bit
            rec["value"] = self.value
        return rec


class WorldState:
    """Mutable simulation state; the single source of truth for one episode."""

    def __init__(self, config: WorldConfig):
        config.validate()
        c = config.resolved()
        self.config = c
        w, h = c.grid_width, c.grid_height
        self.width = w
        self.height = h
        self.timestep = 0
        self.colors: list[FloorColor] = [FloorColor.FLOOR] * (w * h)
        self.units: list[ResourceUnit] = []
        self.units_by_cell: dict[tuple[int, int], list[int]] = {}
        self.robots: list[RobotState] = []
        self.robot_cells: dict[tuple[int, int], int] = {}
        self.dump_rect = c.dump_rect
        self.dump_interior: frozenset[tuple[int, int]] = frozenset()
        self.beacon = c.beacon_position
        self.beacon_enabled = c.beacon_enabled
        self.max_diagonal = math.hypot(w, h)

    # -- queries ---------------------------------------------------------

    def in_grid(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_perimeter(self, x: int, y: int) -> bool:
        return x == 0 or y == 0 or x == self.width - 1 or y == self.height - 1

    def color_at(self, x: int, y: int) -> FloorColor:
        return self.colors[y * self.width + x]

    def cell(self, x: int, y: int) -> Cell:
        if not self.in_grid(x, y):
            raise ConfigInvalid(f"cell ({x}, {y}) outside {self.width}x{self.height} grid")
        return Cell(self.color_at(x, y), tuple(self.units_by_cell.get((x, y), ())))

    def robot(self, robot_id: int) -> RobotState:
        if not 0 <= robot_id < len(self.robots):
            raise UnknownRobot(f"no robot with id {robot_id}")
        return self.robots[robot_id]


def _default_partition_lines(w: int, h: int, count: int) -> tuple[set[int], set[int]]:
    p = int(math.isqrt(count))
    cols = {1 + i * ((w - 2) // p) for i in range(1, p)}
    rows = {1 + i * ((h - 2) // p) for i in range(1, p)}
    return cols, rows


def _eligible_floor_cells(c: WorldConfig) -> list[tuple[int, int]]:
    """Plain-floor cells outside the dump, in row-major order."""
    w, h = c.grid_width, c.grid_height
    dump = c.dump_rect
    cols, rows = _default_partition_lines(w, h, c.partition_count)
    out = []
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            if dump.contains(x, y) or x in cols or y in rows:
                continue
            out.append((x, y))
    return out


def _eligible_floor_count(c: WorldConfig) -> int:
    return len(_eligible_floor_cells(c))


def create_world(config: WorldConfig) -> WorldState:
    """Build a world: floor templates, beacon, resources, robot poses.

    Layout is a pure function of the config (including rng_seed); the
    same config always produces an identical world.
    """
    world = WorldState(config)
    c = world.config
    w, h = world.width, world.height

    for x in range(w):
        world.colors[x] = FloorColor.ORANGE
        world.colors[(h - 1) * w + x] = FloorColor.ORANGE
    for y in range(h):
        world.colors[y * w] = FloorColor.ORANGE
        world.colors[y * w + w - 1] = FloorColor.ORANGE

    cols, rows = _default_partition_lines(w, h, c.partition_count)
    for x in cols:
        for y in range(1, h - 1):
            world.colors[y * w + x] = FloorColor.BLUE
    for y in rows:
        for x in range(1, w - 1):
            world.colors[y * w + x] = FloorColor.BLUE

    dump = c.dump_rect
    interior = []
    for x, y in dump.cells():
        on_outer = (x == dump.x or y == dump.y
                    or x == dump.x + dump.width - 1 or y == dump.y + dump.height - 1)
        on_inner = not on_outer and (x == dump.x + 1 or y == dump.y + 1
                                     or x == dump.x + dump.width - 2 or y == dump.y + dump.height - 2)
        if on_outer:
            world.colors[y * w + x] = FloorColor.BLUE
        elif on_inner:
            world.colors[y * w + x] = FloorColor.RED
            interior.append((x, y))
        else:
            interior.append((x, y))
    world.dump_interior = frozenset(interior)

    rng = np.random.default_rng(c.rng_seed)
    eligible = _eligible_floor_cells(c)
    if c.resource_count > 0:
        picks = rng.choice(len(eligible), size=c.resource_count, replace=False)
        for uid, idx in enumerate(picks):
            pos = eligible[int(idx)]
            world.units.append(ResourceUnit(uid, pos))
            world.units_by_cell.setdefault(pos, []).append(uid)

    for rid in range(c.robot_count):
        placed = False
        for _ in range(10_000):
            ax = int(rng.integers(1, w - 2))
            ay = int(rng.integers(1, h - 2))
            heading = Heading(int(rng.integers(0, 4)))
            cells = ((ax, ay), (ax + 1, ay), (ax, ay + 1), (ax + 1, ay + 1))
            ok = True
            for cx, cy in cells:
                if (world.color_at(cx, cy) != FloorColor.FLOOR
                        or dump.contains(cx, cy)
                        or (cx, cy) in world.units_by_cell
                        or (cx, cy) in world.robot_cells):
                    ok = False
                    break
            if ok:
                robot = RobotState(rid, ax, ay, heading, [0, 0, 0, 0])
                world.robots.append(robot)
                for cell in cells:
                    world.robot_cells[cell] = rid
                placed = True
                break
        if not placed:
            raise ConfigInvalid(f"could not place robot {rid}; work area too crowded")
    return world


# -- sensing -------------------------------------------------------------


def sense(world: WorldState, robot_id: int) -> SensorFrame:
    """Read one robot's sensors. Never mutates the world."""
    r = world.robot(robot_id)
    h = r.heading
    vx, vy = _VX[h], _VY[h]
    (flx, fly), (frx, fry) = _FRONT[h]
    flx += r.ax
    fly += r.ay
    frx += r.ax
    fry += r.ay

    ahead = (
        (flx + vx, fly + vy),
        (frx + vx, fry + vy),
        (flx + 2 * vx, fly + 2 * vy),
        (frx + 2 * vx, fry + 2 * vy),
    )
    v = []
    cc = []
    for x, y in ahead:
        if world.in_grid(x, y):
            v.append(1 if (x, y) in world.units_by_cell else 0)
            cc.append(world.colors[y * world.width + x])
        else:
            v.append(0)
            cc.append(FloorColor.ORANGE)

    s = []
    for cx, cy in ((flx, fly), (frx, fry)):
        hit = 0
        for k in (1, 2, 3):
            x, y = cx + k * vx, cy + k * vy
            if not world.in_grid(x, y) or world.is_perimeter(x, y) or (x, y) in world.robot_cells:
                hit = 1
                break
        s.append(hit)

    if world.beacon_enabled:
        cx, cy = r.ax + 1.0, r.ay + 1.0  # footprint center in lattice units
        dx = world.beacon[0] - cx
        dy = world.beacon[1] - cy
        dist = math.hypot(dx, dy)
        ld = min(10, int(10.0 * dist / world.max_diagonal))
        if dist == 0.0:
            lp = LightPosition.CENTER
        else:
            rel = (math.degrees(math.atan2(dy, dx)) - _HEADING_ANGLE[h]) % 360.0
            if rel > 180.0:
                rel -= 360.0
            if abs(rel) <= 22.5:
                lp = LightPosition.CENTER
            elif 22.5 < rel <= 90.0:
                lp = LightPosition.LEFT
            elif -90.0 <= rel < -22.5:
                lp = LightPosition.RIGHT
            else:
                lp = LightPosition.NOT_VISIBLE
    else:
        lp = LightPosition.NOT_VISIBLE
        ld = 10

    m = r.memory
    return SensorFrame(v[0], v[1], v[2], v[3], cc[0], cc[1], cc[2], cc[3],
                       s[0], s[1], lp, ld, m[0], m[1], m[2], m[3])


# -- acting --------------------------------------------------------------


def _translate(world: WorldState, r: RobotState, dx: int, dy: int,
               push: bool, action: str) -> list[Event]:
    """Move a footprint by (dx, dy), bulldozing units when push is set.

    Returns the emitted events; a single Blocked event (and no state
    change) when any entered or push-target cell is unavailable.
    """
    ax, ay = r.ax, r.ay
    nax, nay = ax + dx, ay + dy
    old = ((ax, ay), (ax + 1, ay), (ax, ay + 1), (ax + 1, ay + 1))
    new = ((nax, nay), (nax + 1, nay), (nax, nay + 1), (nax + 1, nay + 1))
    old_set = set(old)
    new_set = set(new)
    entered = [cell for cell in new if cell not in old_set]

    xmax, ymax = world.width - 2, world.height - 2
    blocked = False
    for x, y in entered:
        if x < 1 or y < 1 or x > xmax or y > ymax or (x, y) in world.robot_cells:
            blocked = True
            break

    moves: list[tuple[tuple[int, int], tuple[int, int]]] = []
    if not blocked:
        ux = (dx > 0) - (dx < 0)
        uy = (dy > 0) - (dy < 0)
        for cell in entered:
            if cell not in world.units_by_cell:
                continue
            if not push:
                blocked = True
                break
            tx, ty = cell
            while True:
                tx += ux
                ty += uy
                if (tx, ty) not in new_set:
                    break
            if tx < 1 or ty < 1 or tx > xmax or ty > ymax or (tx, ty) in world.robot_cells:
                blocked = True
                break
            moves.append((cell, (tx, ty)))

    if blocked:
        return [Event(world.timestep, "blocked", r.id, behavior=action)]

    events: list[Event] = []
    for src, dst in moves:
        ids = world.units_by_cell.pop(src)
        for uid in ids:
            unit = world.units[uid]
            unit.position = dst
            unit.last_mover = r.id
            unit.mover_set.add(r.id)
            events.append(Event(world.timestep, "push", r.id, behavior=action,
                                unit=uid, src=src, dst=dst))
            if dst in world.dump_interior:
                events.append(Event(world.timestep, "dump", r.id, unit=uid))
        world.units_by_cell.setdefault(dst, []).extend(ids)

    for cell in old:
        del world.robot_cells[cell]
    for cell in new:
        world.robot_cells[cell] = r.id
    r.ax, r.ay = nax, nay
    events.append(Event(world.timestep, "move", r.id, behavior=action))
    return events


def apply_behavior(world: WorldState, robot_id: int, behavior: BehaviorId) -> list[Event]:
    """Execute one behavior for one robot, returning the emitted events."""
    r = world.robot(robot_id)
    action = bh.action_of(behavior)
    h = r.heading
    vx, vy = _VX[h], _VY[h]
    lh = _LEFT[h]
    rh = _RIGHT[h]

    if action == bh.FORWARD:
        return _translate(world, r, vx, vy, True, action)
    if action == bh.TURN_LEFT:
        r.heading = lh
        return [Event(world.timestep, "move", r.id, behavior=action)]
    if action == bh.TURN_RIGHT:
        r.heading = rh
        return [Event(world.timestep, "move", r.id, behavior=action)]
    if action == bh.DUMP:
        # One square back (units block the reverse), then turn left.
        events = _translate(world, r, -vx, -vy, False, action)
        r.heading = lh
        return events
    if action == bh.SLIDE_LEFT:
        return _translate(world, r, _VX[lh], _VY[lh], True, action)
    if action == bh.SLIDE_RIGHT:
        return _translate(world, r, _VX[rh], _VY[rh], True, action)
    if action == bh.DIAG_LEFT:
        return _translate(world, r, vx + _VX[lh], vy + _VY[lh], True, action)
    if action == bh.DIAG_RIGHT:
        return _translate(world, r, vx + _VX[rh], vy + _VY[rh], True, action)
    if action == bh.PIVOT_LEFT_FWD:
        events = _translate(world, r, 2 * _VX[lh], 2 * _VY[lh], True, action)
        if events[-1].kind == "move":
            r.heading = lh
        return events
    if action == bh.PIVOT_RIGHT_FWD:
        events = _translate(world, r, 2 * _VX[rh], 2 * _VY[rh], True, action)
        if events[-1].kind == "move":
            r.heading = rh
        return events
    if action == bh.PIVOT_LEFT_BACK:
        events = _translate(world, r, -2 * vx, -2 * vy, True, action)
        if events[-1].kind == "move":
            r.heading = rh
        return events
    if action == bh.PIVOT_RIGHT_BACK:
        events = _translate(world, r, -2 * vx, -2 * vy, True, action)
        if events[-1].kind == "move":
            r.heading = lh
        return events

    op = bh.bit_op(action)
    if op is None:
        raise UnknownBehavior(f"no action for behavior {behavior!r}")
    bit, value = op
    r.memory[bit] = value
    return [Event(world.timestep, "bitop", r.id, behavior=action, bit=bit, value=value)]


DecideFn = Callable[[SensorFrame], tuple[frozenset[BehaviorId], Sequence[BehaviorId]]]


def step_all(world: WorldState, deciders: Sequence[DecideFn]) -> list[Event]:
    """Advance one timestep: each robot senses, decides, and acts in id order.

    Each decider maps a SensorFrame to (triggered set, execution order);
    triggered behaviors run in the given order. Blocked moves surface as
    events, never as errors.
    """
    if len(deciders) != len(world.robots):
        raise ConfigInvalid(f"need {len(world.robots)} deciders, got {len(deciders)}")
    world.timestep += 1
    events: list[Event] = []
    for r in world.robots:
        frame = sense(world, r.id)
        triggered, order = deciders[r.id](frame)
        if not triggered:
            continue
        for behavior in order:
            if behavior in triggered:
                events.extend(apply_behavior(world, r.id, behavior))
    return events


def fitness_of(world: WorldState) -> float:
    """Fraction of resource units inside the dump interior, in [0, 1]."""
    total = len(world.units)
    if total == 0:
        raise ZeroResources("fitness undefined for a world with no resource units")
    inside = sum(1 for u in world.units if u.position in world.dump_interior)
    return inside / total


# -- episodes and traces --------------------------------------------------


def _trace_record(world: WorldState, events: list[Event]) -> dict:
    return {
        "t": world.timestep,
        "robots": [{"id": r.id, "x": r.ax, "y": r.ay, "h": r.heading.name,
                    "mem": list(r.memory)} for r in world.robots],
        "events": [e.to_record() for e in events],
    }


def run_episode(world: WorldState, deciders: Sequence[DecideFn],
                steps: int | None = None, record_trace: bool = False) -> list[dict] | None:
    """Run the world for ``steps`` timesteps (default: config.max_timesteps).

    With record_trace, returns JSON-ready records: a t=0 snapshot plus
    one record per timestep with that step's events.
    """
    if steps is None:
        steps = world.config.max_timesteps
    records = [_trace_record(world, [])] if record_trace else None
    for _ in range(steps):
        events = step_all(world, deciders)
        if records is not None:
            records.append(_trace_record(world, events))
    return records


def write_trace(records: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_trace(path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def check_invariants(world: WorldState) -> None:
    """Raise InvariantViolation if conserved quantities drifted. Test aid."""
    c = world.config
    if len(world.units) != c.resource_count:
        raise InvariantViolation("resource unit count changed")
    indexed = sorted(uid for ids in world.units_by_cell.values() for uid in ids)
    if indexed != sorted(u.id for u in world.units):
        raise InvariantViolation("unit spatial index out of sync")
    for unit in world.units:
        x, y = unit.position
        if not world.in_grid(x, y) or world.is_perimeter(x, y):
            raise InvariantViolation(f"unit {unit.id} at illegal cell {unit.position}")
        if unit.id not in world.units_by_cell.get(unit.position, ()):
            raise InvariantViolation(f"unit {unit.id} missing from its cell")
        if unit.last_mover is not None and unit.last_mover not in unit.mover_set:
            raise InvariantViolation(f"unit {unit.id} mover bookkeeping broken")
    seen: dict[tuple[int, int], int] = {}
    for r in world.robots:
        for x, y in r.footprint():
            if not world.in_grid(x, y) or world.is_perimeter(x, y):
                raise InvariantViolation(f"robot {r.id} footprint at illegal cell ({x}, {y})")
            if (x, y) in seen:
                raise InvariantViolation(f"robots {seen[(x, y)]} and {r.id} overlap at ({x}, {y})")
            seen[(x, y)] = r.id
            if (x, y) in world.units_by_cell:
                raise InvariantViolation(f"robot {r.id} stands on units at ({x}, {y})")
        if any(bit not in (0, 1) for bit in r.memory):
            raise InvariantViolation(f"robot {r.id} memory bits corrupt")
    if seen != world.robot_cells:
        raise InvariantViolation("robot cell index out of sync")
    if c.resource_count > 0:
        f = fitness_of(world)
        if not 0.0 <= f <= 1.0:
            raise InvariantViolation(f"fitness {f} out of range")
