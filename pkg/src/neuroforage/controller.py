"""Sensor encoding and the controller decision contract.

Every controller sees the same 16-node input plane, laid out as a 4x4
grid (row-major, row 0 first):

    row 0: v1 v2 v3 v4      resource bits ahead
    row 1: c1 c2 c3 c4      floor colors ahead
    row 2: s1 s2 lp ld      obstacle bits, light bearing, light range
    row 3: m1 m2 m3 m4      memory bits

All values live in [0, 1]. Binary sensors map to {0, 1}; the 4-state
color and bearing sensors map to {0, 1/3, 2/3, 1}; the 11-state range
sensor maps to value/10. The encoding is injective on sensor frames,
so no information is lost, and one node per variable keeps the plane
at 4x4 (one-hot would need 35 nodes).
"""

from __future__ import annotations

from typing import Protocol, Sequence

from .behaviors import BehaviorId
from .world import SensorFrame

InputPlane = tuple[float, ...]

PLANE_ROWS = 4
PLANE_COLS = 4
PLANE_SIZE = PLANE_ROWS * PLANE_COLS

_QUARTERS = (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)
_TENTHS = tuple(i / 10.0 for i in range(11))


def encode_inputs(frame: SensorFrame) -> InputPlane:
    """Encode a discrete sensor frame into the 16-node input plane."""
    return (
        float(frame.v1), float(frame.v2), float(frame.v3), float(frame.v4),
        _QUARTERS[frame.c1], _QUARTERS[frame.c2], _QUARTERS[frame.c3], _QUARTERS[frame.c4],
        float(frame.s1), float(frame.s2), _QUARTERS[frame.lp], _TENTHS[frame.ld],
        float(frame.m1), float(frame.m2), float(frame.m3), float(frame.m4),
    )


def plane_index(row: int, col: int) -> int:
    return row * PLANE_COLS + col


def sensor_space_size(light_position_states: int = 4) -> int:
    """Number of distinct sensor frames.

    The bearing sensor has 4 reachable states here (left, center,
    right, not-visible); passing 3 gives the count for the 3-state
    reading of the same input space.
    """
    return (2 ** 4) * (4 ** 4) * (2 ** 2) * light_position_states * 11 * (2 ** 4)


class DecisionSource(Protocol):
    """A controller: pure mapping from input plane to triggered behaviors.

    ``decide`` returns the set of triggered behaviors plus the execution
    order to run them in (a permutation of the repertoire; fixed in
    basis mode, genome-supplied in primitive mode).
    """

    def decide(self, plane: InputPlane) -> tuple[frozenset[BehaviorId], Sequence[BehaviorId]]:
        ...


class CachingDecider:
    """Frame-level memo around a DecisionSource.

    Controllers are pure per episode, and robots revisit few distinct
    frames, so caching decisions on the frame dominates simulation
    cost. Instances are cheap; use one per genome evaluation.
    """

    def __init__(self, source: DecisionSource):
        self.source = source
        self._cache: dict[SensorFrame, tuple[frozenset[BehaviorId], Sequence[BehaviorId]]] = {}

    def __call__(self, frame: SensorFrame) -> tuple[frozenset[BehaviorId], Sequence[BehaviorId]]:
        hit = self._cache.get(frame)
        if hit is None:
            hit = self.source.decide(encode_inputs(frame))
            self._cache[frame] = hit
        return hit
