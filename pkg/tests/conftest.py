"""Shared fixtures and scene-building helpers."""

from __future__ import annotations

import numpy as np
import pytest

from neuroforage.world import Heading, ResourceUnit, WorldState


def arrange(world: WorldState, poses: dict[int, tuple[int, int, Heading]]) -> None:
    """Teleport several robots at once, keeping the spatial index coherent."""
    for rid in poses:
        for cell in world.robot(rid).footprint():
            del world.robot_cells[cell]
    for rid, (ax, ay, heading) in poses.items():
        r = world.robot(rid)
        r.ax, r.ay, r.heading = ax, ay, Heading(heading)
        for cell in r.footprint():
            assert cell not in world.robot_cells, "test scene placed robots overlapping"
            world.robot_cells[cell] = rid


def place_robot(world: WorldState, robot_id: int, ax: int, ay: int,
                heading: Heading) -> None:
    """Teleport one robot to a pose."""
    arrange(world, {robot_id: (ax, ay, heading)})


def add_unit(world: WorldState, x: int, y: int) -> int:
    """Inject a resource unit into a hand-built scene; returns its id."""
    uid = len(world.units)
    world.units.append(ResourceUnit(uid, (x, y)))
    world.units_by_cell.setdefault((x, y), []).append(uid)
    return uid


@pytest.fixture
def rng():
    return np.random.default_rng(0xA5A5)
