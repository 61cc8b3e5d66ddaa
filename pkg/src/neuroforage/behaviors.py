"""Behavior repertoires.

Robots execute discrete behaviors drawn from one of two repertoires:

* ``basis``: 12 pre-ordered macro behaviors (dump, forward, the two
  turns, and set/clear for each of the 4 memory bits). The execution
  order within a timestep is fixed.
* ``primitive``: 20 behaviors; the 12 movement primitives (the four
  basis moves plus lateral slides, diagonal steps, and four corner
  pivots) and the 8 bit operations. The execution order is a genome
  parameter in this mode.

A :class:`BehaviorId` is (mode, index); the underlying physical action
is shared between modes and named by :attr:`BehaviorId.action`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import UnknownBehavior


class Mode(str, Enum):
    BASIS = "basis"
    PRIMITIVE = "primitive"


# Physical action names understood by the world.
DUMP = "dump"
FORWARD = "forward"
TURN_RIGHT = "turn_right"
TURN_LEFT = "turn_left"
SLIDE_LEFT = "slide_left"
SLIDE_RIGHT = "slide_right"
DIAG_LEFT = "diag_left"
DIAG_RIGHT = "diag_right"
PIVOT_LEFT_FWD = "pivot_left_fwd"
PIVOT_LEFT_BACK = "pivot_left_back"
PIVOT_RIGHT_FWD = "pivot_right_fwd"
PIVOT_RIGHT_BACK = "pivot_right_back"

BIT_SET = tuple(f"bit_set_{i}" for i in range(1, 5))
BIT_CLEAR = tuple(f"bit_clear_{i}" for i in range(1, 5))

# Bit ops interleaved set/clear per bit, matching the basis ordering
# (orders 5..12: set1, clear1, set2, clear2, ...).
_BIT_OPS = tuple(op for pair in zip(BIT_SET, BIT_CLEAR) for op in pair)

_BASIS_ACTIONS = (DUMP, FORWARD, TURN_RIGHT, TURN_LEFT) + _BIT_OPS

_PRIMITIVE_ACTIONS = (
    DUMP,
    FORWARD,
    TURN_RIGHT,
    TURN_LEFT,
    SLIDE_LEFT,
    SLIDE_RIGHT,
    DIAG_LEFT,
    DIAG_RIGHT,
    PIVOT_LEFT_FWD,
    PIVOT_LEFT_BACK,
    PIVOT_RIGHT_FWD,
    PIVOT_RIGHT_BACK,
) + _BIT_OPS

_ACTIONS = {Mode.BASIS: _BASIS_ACTIONS, Mode.PRIMITIVE: _PRIMITIVE_ACTIONS}


@dataclass(frozen=True, slots=True)
class BehaviorId:
    mode: Mode
    index: int

    @property
    def action(self) -> str:
        return _ACTIONS[self.mode][self.index]

    def __repr__(self) -> str:  # "basis:forward" reads better in traces
        actions = _ACTIONS.get(self.mode, ())
        if 0 <= self.index < len(actions):
            return f"{self.mode.value}:{actions[self.index]}"
        return f"{self.mode.value}:#{self.index}"


_REPERTOIRES = {
    mode: tuple(BehaviorId(mode, i) for i in range(len(actions)))
    for mode, actions in _ACTIONS.items()
}


def repertoire(mode: Mode) -> tuple[BehaviorId, ...]:
    """The mode's behaviors in default execution order.

    Basis order is the fixed 12-slot ordering; primitive order is the
    identity ordering (evolution supplies permutations on top of it).
    """
    return _REPERTOIRES[Mode(mode)]


def action_of(behavior: BehaviorId) -> str:
    """Physical action name, raising UnknownBehavior for bad ids."""
    try:
        actions = _ACTIONS[behavior.mode]
    except (KeyError, AttributeError) as exc:
        raise UnknownBehavior(f"unknown behavior mode: {behavior!r}") from exc
    if not 0 <= behavior.index < len(actions):
        raise UnknownBehavior(f"behavior index out of range: {behavior!r}")
    return actions[behavior.index]


def bit_op(action: str) -> tuple[int, int] | None:
    """Decode a bit operation into (bit index 0..3, value), else None."""
    if action in BIT_SET:
        return BIT_SET.index(action), 1
    if action in BIT_CLEAR:
        return BIT_CLEAR.index(action), 0
    return None
