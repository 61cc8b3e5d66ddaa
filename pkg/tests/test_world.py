"""World mechanics: construction, sensing, behaviors, stepping, fitness."""

from __future__ import annotations

import numpy as np
import pytest

import neuroforage as nf
from neuroforage.behaviors import Mode, repertoire
from neuroforage.errors import ConfigInvalid, UnknownBehavior, UnknownRobot, ZeroResources
from neuroforage.world import (
    FloorColor,
    Heading,
    LightPosition,
    Rect,
    WorldConfig,
    apply_behavior,
    check_invariants,
    create_world,
    fitness_of,
    sense,
    step_all,
)

from conftest import add_unit, arrange, place_robot

BASIS = repertoire(Mode.BASIS)
PRIM = repertoire(Mode.PRIMITIVE)
DUMP_B, FWD, TR, TL = BASIS[0], BASIS[1], BASIS[2], BASIS[3]


def by_action(rep, action):
    return next(b for b in rep if b.action == action)


def empty_world(width=8, height=8, robots=1, dump=Rect(2, 4, 4, 3), **kw) -> nf.WorldState:
    """Unit-free world for hand-built scenes."""
    cfg = WorldConfig(grid_width=width, grid_height=height, robot_count=robots,
                      resource_count=0, dump_rect=dump, rng_seed=3, **kw)
    return create_world(cfg)


class TestCreateWorld:
    def test_deterministic_layout(self):
        cfg = WorldConfig(grid_width=16, grid_height=16, robot_count=4,
                          resource_count=30, rng_seed=7)
        a, b = create_world(cfg), create_world(cfg)
        assert [u.position for u in a.units] == [u.position for u in b.units]
        assert [r.pose for r in a.robots] == [r.pose for r in b.robots]
        assert len(a.units) == 30 and len(a.robots) == 4
        check_invariants(a)

    def test_different_seed_different_layout(self):
        base = WorldConfig(rng_seed=7)
        other = WorldConfig(rng_seed=8)
        a, b = create_world(base), create_world(other)
        assert [u.position for u in a.units] != [u.position for u in b.units]

    def test_orange_perimeter_ring(self):
        w = create_world(WorldConfig(rng_seed=1))
        for x in range(16):
            assert w.color_at(x, 0) == FloorColor.ORANGE
            assert w.color_at(x, 15) == FloorColor.ORANGE
        for y in range(16):
            assert w.color_at(0, y) == FloorColor.ORANGE
            assert w.color_at(15, y) == FloorColor.ORANGE

    def test_dump_rings_and_interior(self):
        w = empty_world()
        rect = Rect(2, 4, 4, 3)
        blue = {(x, y) for (x, y) in rect.cells()
                if x in (2, 5) or y in (4, 6)}
        red = set(rect.cells()) - blue
        for x, y in blue:
            assert w.color_at(x, y) == FloorColor.BLUE
        for x, y in red:
            assert w.color_at(x, y) == FloorColor.RED
        assert w.dump_interior == frozenset(red)

    def test_units_start_on_plain_floor_outside_dump(self):
        w = create_world(WorldConfig(rng_seed=11))
        dump = w.config.dump_rect
        positions = [u.position for u in w.units]
        assert len(set(positions)) == len(positions)  # distinct cells
        for x, y in positions:
            assert w.color_at(x, y) == FloorColor.FLOOR
            assert not dump.contains(x, y)

    def test_partition_lines_divide_work_area(self):
        # 18x18 grid: the 16x16 work area splits into 16 equal regions.
        cfg = WorldConfig(grid_width=18, grid_height=18, partition_count=16,
                          robot_count=2, resource_count=10, rng_seed=5)
        w = create_world(cfg)
        line_cols = {1 + 4, 1 + 8, 1 + 12}
        for x in line_cols:
            for y in range(1, 17):
                if not cfg.resolved().dump_rect.contains(x, y):
                    assert w.color_at(x, y) in (FloorColor.BLUE, FloorColor.RED)
        # region widths between the lines are all four cells
        widths = np.diff(sorted({1} | line_cols | {17}))
        assert all(v == 4 for v in widths)

    def test_partition_one_has_no_interior_lines(self):
        w = create_world(WorldConfig(rng_seed=2, partition_count=1))
        dump = w.config.dump_rect
        for y in range(1, 15):
            for x in range(1, 15):
                if not dump.contains(x, y):
                    assert w.color_at(x, y) == FloorColor.FLOOR or (x, y) in [
                        u.position for u in w.units]

    def test_indivisible_partition_rejected(self):
        with pytest.raises(ConfigInvalid):
            WorldConfig(partition_count=16).validate()  # 14 % 4 != 0

    def test_too_many_resources_rejected(self):
        with pytest.raises(ConfigInvalid):
            WorldConfig(resource_count=10_000).validate()

    def test_dump_on_perimeter_rejected(self):
        with pytest.raises(ConfigInvalid):
            WorldConfig(dump_rect=Rect(0, 3, 4, 4)).validate()

    def test_config_json_round_trip_rejects_unknown_keys(self):
        data = WorldConfig(rng_seed=9).to_json_dict()
        again = WorldConfig.from_json_dict(data)
        assert again.to_json_dict() == data
        data["gird_width"] = 10
        with pytest.raises(ConfigInvalid, match="gird_width"):
            WorldConfig.from_json_dict(data)


class TestSense:
    """Hand-enumerated 8x8 oracle scene, checked cell by cell.

    Scene: dump Rect(2,4,4,3) (blue ring, red interior {(3,5),(4,5)}),
    beacon defaulted to the dump center (4.0, 5.5), one robot anchored
    at (2,1), units at (2,3) and (3,4).
    """

    def scene(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        add_unit(w, 2, 3)
        add_unit(w, 3, 4)
        return w

    def test_facing_north(self):
        w = self.scene()
        f = sense(w, 0)
        # ahead block: near (2,3),(3,3); far (2,4),(3,4)
        assert (f.v1, f.v2, f.v3, f.v4) == (1, 0, 0, 1)
        assert (f.c1, f.c2, f.c3, f.c4) == (
            FloorColor.FLOOR, FloorColor.FLOOR, FloorColor.BLUE, FloorColor.BLUE)
        assert (f.s1, f.s2) == (0, 0)
        # beacon (4.0,5.5) from center (3.0,2.0): dist=sqrt(13.25),
        # bearing 74.05deg - 90deg = -15.95deg -> Center;
        # ld = floor(10*3.6401/11.3137) = 3
        assert f.lp == LightPosition.CENTER
        assert f.ld == 3
        assert (f.m1, f.m2, f.m3, f.m4) == (0, 0, 0, 0)

    def test_facing_west_sees_wall_and_loses_beacon(self):
        w = self.scene()
        place_robot(w, 0, 2, 1, Heading.W)
        f = sense(w, 0)
        assert (f.v1, f.v2, f.v3, f.v4) == (0, 0, 0, 0)
        # far cells (0,1),(0,2) are the orange perimeter
        assert (f.c1, f.c2, f.c3, f.c4) == (
            FloorColor.FLOOR, FloorColor.FLOOR, FloorColor.ORANGE, FloorColor.ORANGE)
        assert (f.s1, f.s2) == (1, 1)  # perimeter two cells ahead
        # bearing 74.05deg - 180deg = -105.95deg -> behind the robot
        assert f.lp == LightPosition.NOT_VISIBLE
        assert f.ld == 3

    def test_facing_east_beacon_left(self):
        w = self.scene()
        place_robot(w, 0, 2, 1, Heading.E)
        f = sense(w, 0)
        assert (f.v1, f.v2, f.v3, f.v4) == (0, 0, 0, 0)
        assert (f.s1, f.s2) == (0, 0)
        assert f.lp == LightPosition.LEFT  # bearing +74.05deg
        assert f.ld == 3

    def test_facing_south_off_grid_reads_orange(self):
        w = self.scene()
        place_robot(w, 0, 2, 1, Heading.S)
        f = sense(w, 0)
        # near cells (3,0),(2,0) orange; far cells are off-grid
        assert (f.c1, f.c2, f.c3, f.c4) == (FloorColor.ORANGE,) * 4
        assert (f.v1, f.v2, f.v3, f.v4) == (0, 0, 0, 0)
        assert (f.s1, f.s2) == (1, 1)
        assert f.lp == LightPosition.NOT_VISIBLE

    def test_other_robot_trips_obstacle_bits(self):
        w = empty_world(robots=2)
        arrange(w, {0: (2, 1, Heading.N), 1: (2, 4, Heading.E)})
        f = sense(w, 0)
        assert (f.s1, f.s2) == (1, 1)  # footprint cells two cells ahead

    def test_memory_echo(self):
        w = self.scene()
        w.robot(0).memory = [1, 0, 1, 1]
        f = sense(w, 0)
        assert (f.m1, f.m2, f.m3, f.m4) == (1, 0, 1, 1)

    def test_ld_zero_at_beacon(self):
        w = empty_world(beacon_position=(4.0, 2.0))
        place_robot(w, 0, 3, 1, Heading.N)  # footprint center == beacon
        f = sense(w, 0)
        assert f.ld == 0
        assert f.lp == LightPosition.CENTER

    def test_beacon_disabled_reads_not_visible(self):
        w = empty_world(beacon_enabled=False)
        place_robot(w, 0, 2, 1, Heading.N)
        f = sense(w, 0)
        assert f.lp == LightPosition.NOT_VISIBLE
        assert f.ld == 10

    def test_sense_is_read_only(self):
        w = self.scene()
        before = ([u.position for u in w.units], [r.pose for r in w.robots],
                  dict(w.units_by_cell), dict(w.robot_cells))
        for _ in range(3):
            sense(w, 0)
        after = ([u.position for u in w.units], [r.pose for r in w.robots],
                 dict(w.units_by_cell), dict(w.robot_cells))
        assert before == after

    def test_unknown_robot(self):
        with pytest.raises(UnknownRobot):
            sense(self.scene(), 5)


class TestApplyBehavior:
    def test_move_forward_empty(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        events = apply_behavior(w, 0, FWD)
        assert [e.kind for e in events] == ["move"]
        assert w.robot(0).pose == (2, 2, Heading.N)

    def test_move_forward_pushes_unit(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        uid = add_unit(w, 2, 3)
        events = apply_behavior(w, 0, FWD)
        kinds = [e.kind for e in events]
        assert kinds == ["push", "move"]
        assert w.units[uid].position == (2, 4)
        assert w.units[uid].last_mover == 0
        assert w.units[uid].mover_set == {0}
        assert w.robot(0).pose == (2, 2, Heading.N)

    def test_push_into_dump_interior_emits_dump(self):
        w = empty_world()
        place_robot(w, 0, 3, 2, Heading.N)
        uid = add_unit(w, 3, 4)
        events = apply_behavior(w, 0, FWD)
        assert [e.kind for e in events] == ["push", "dump", "move"]
        assert w.units[uid].position == (3, 5)
        assert (3, 5) in w.dump_interior

    def test_push_merges_piles(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        a = add_unit(w, 2, 3)
        b = add_unit(w, 2, 4)
        apply_behavior(w, 0, FWD)
        # unit a joins b's cell; b itself is not chained forward
        assert w.units[a].position == (2, 4)
        assert w.units[b].position == (2, 4)
        assert w.units_by_cell[(2, 4)] == [b, a]

    def test_move_blocked_by_perimeter_push_target(self):
        w = empty_world()
        place_robot(w, 0, 2, 4, Heading.N)
        uid = add_unit(w, 2, 6)
        events = apply_behavior(w, 0, FWD)
        assert [e.kind for e in events] == ["blocked"]
        assert w.robot(0).pose == (2, 4, Heading.N)
        assert w.units[uid].position == (2, 6)

    def test_move_blocked_by_other_robot(self):
        w = empty_world(robots=2)
        arrange(w, {0: (2, 1, Heading.N), 1: (2, 3, Heading.S)})
        events = apply_behavior(w, 0, FWD)
        assert [e.kind for e in events] == ["blocked"]

    def test_turns_rotate_in_place(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        apply_behavior(w, 0, TL)
        assert w.robot(0).pose == (2, 1, Heading.W)
        apply_behavior(w, 0, TR)
        assert w.robot(0).pose == (2, 1, Heading.N)

    def test_dump_backs_up_and_turns_left(self):
        w = empty_world()
        place_robot(w, 0, 2, 2, Heading.N)
        events = apply_behavior(w, 0, DUMP_B)
        assert [e.kind for e in events] == ["move"]
        assert w.robot(0).pose == (2, 1, Heading.W)  # (x, y-1), left turn

    def test_dump_never_moves_units(self):
        w = empty_world()
        place_robot(w, 0, 2, 2, Heading.N)
        uid = add_unit(w, 2, 1)  # directly behind
        events = apply_behavior(w, 0, DUMP_B)
        assert [e.kind for e in events] == ["blocked"]
        assert w.units[uid].position == (2, 1)
        # the turn half still happens; the footprint never covers the unit
        assert w.robot(0).pose == (2, 2, Heading.W)

    def test_bit_ops(self):
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        set3 = by_action(BASIS, "bit_set_3")
        clear3 = by_action(BASIS, "bit_clear_3")
        events = apply_behavior(w, 0, set3)
        assert events[0].kind == "bitop" and events[0].bit == 2 and events[0].value == 1
        assert w.robot(0).memory == [0, 0, 1, 0]
        apply_behavior(w, 0, clear3)
        assert w.robot(0).memory == [0, 0, 0, 0]

    def test_unknown_behavior(self):
        from neuroforage.behaviors import BehaviorId
        w = empty_world()
        with pytest.raises(UnknownBehavior):
            apply_behavior(w, 0, BehaviorId(Mode.BASIS, 99))


class TestPrimitiveMoves:
    def setup_scene(self, heading=Heading.N):
        w = empty_world(width=12, height=12, dump=Rect(4, 8, 4, 3))
        place_robot(w, 0, 5, 5, heading)
        return w

    def test_slide_left_translates_without_turning(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "slide_left"))
        assert w.robot(0).pose == (4, 5, Heading.N)

    def test_slide_right_pushes_sideways(self):
        w = self.setup_scene()
        uid = add_unit(w, 7, 5)
        apply_behavior(w, 0, by_action(PRIM, "slide_right"))
        assert w.robot(0).pose == (6, 5, Heading.N)
        assert w.units[uid].position == (8, 5)

    def test_diag_left(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "diag_left"))
        assert w.robot(0).pose == (4, 6, Heading.N)

    def test_diag_right_pushes_diagonally(self):
        w = self.setup_scene()
        uid = add_unit(w, 7, 7)  # swept-into corner cell
        apply_behavior(w, 0, by_action(PRIM, "diag_right"))
        assert w.robot(0).pose == (6, 6, Heading.N)
        assert w.units[uid].position == (8, 8)

    def test_pivot_left_fwd(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "pivot_left_fwd"))
        assert w.robot(0).pose == (3, 5, Heading.W)

    def test_pivot_left_back(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "pivot_left_back"))
        assert w.robot(0).pose == (5, 3, Heading.E)

    def test_pivot_right_fwd(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "pivot_right_fwd"))
        assert w.robot(0).pose == (7, 5, Heading.E)

    def test_pivot_right_back(self):
        w = self.setup_scene()
        apply_behavior(w, 0, by_action(PRIM, "pivot_right_back"))
        assert w.robot(0).pose == (5, 3, Heading.W)

    def test_pivot_pushes_out_of_new_footprint(self):
        w = self.setup_scene()
        uid = add_unit(w, 4, 5)  # inside the pivot's destination block
        apply_behavior(w, 0, by_action(PRIM, "pivot_left_fwd"))
        # pushed left out of the new footprint {3,4}x{5,6}
        assert w.units[uid].position == (2, 5)

    def test_blocked_pivot_keeps_heading(self):
        w = self.setup_scene()
        place_robot(w, 0, 1, 5, Heading.N)  # against the west wall
        events = apply_behavior(w, 0, by_action(PRIM, "pivot_left_fwd"))
        assert [e.kind for e in events] == ["blocked"]
        assert w.robot(0).pose == (1, 5, Heading.N)


class TestStepAll:
    def test_idle_controllers_only_advance_time(self):
        w = create_world(WorldConfig(rng_seed=3))
        idle = lambda frame: (frozenset(), BASIS)
        events = step_all(w, [idle] * 4)
        assert events == []
        assert w.timestep == 1

    def test_basis_execution_order_moves_before_turning(self):
        # triggered {TurnLeft, MoveForward}: Table order runs forward (2)
        # before turn_left (4), so the robot advances along its old heading.
        w = empty_world()
        place_robot(w, 0, 2, 1, Heading.N)
        decider = lambda frame: (frozenset([TL, FWD]), BASIS)
        step_all(w, [decider])
        assert w.robot(0).pose == (2, 2, Heading.W)

    def test_dump_executes_first_in_basis_order(self):
        w = empty_world()
        place_robot(w, 0, 2, 2, Heading.N)
        decider = lambda frame: (frozenset([DUMP_B, FWD]), BASIS)
        step_all(w, [decider])
        # dump (order 1) backs to (2,1) turning W, then forward moves west
        assert w.robot(0).pose == (1, 1, Heading.W)

    def test_conflict_resolved_by_id_order(self):
        # Two robots converge on the same cell; the lower id wins, hand-traced:
        # robot 0 at (2,3) facing E moves into columns 4-5; robot 1 at (5,3)
        # facing W then needs columns 3-4, overlapping robot 0's new cells.
        w = empty_world(width=10, height=10, robots=2, dump=Rect(3, 6, 4, 3))
        arrange(w, {0: (2, 3, Heading.E), 1: (5, 3, Heading.W)})
        fwd_all = lambda frame: (frozenset([FWD]), BASIS)
        events = step_all(w, [fwd_all, fwd_all])
        assert w.robot(0).pose == (3, 3, Heading.E)
        assert w.robot(1).pose == (5, 3, Heading.W)
        assert [e.kind for e in events if e.robot == 0] == ["move"]
        assert [e.kind for e in events if e.robot == 1] == ["blocked"]

    def test_primitive_execution_order_is_respected(self):
        w = empty_world(width=12, height=12, dump=Rect(4, 8, 4, 3))
        place_robot(w, 0, 5, 5, Heading.N)
        fwd = by_action(PRIM, "forward")
        tl = by_action(PRIM, "turn_left")
        order = [tl] + [b for b in PRIM if b != tl]
        decider = lambda frame: (frozenset([fwd, tl]), order)
        step_all(w, [decider])
        # turn first, then forward moves west
        assert w.robot(0).pose == (4, 5, Heading.W)


class TestFitness:
    def test_endpoints(self):
        w = empty_world()
        add_unit(w, 3, 5)
        add_unit(w, 4, 5)
        assert fitness_of(w) == 1.0
        w2 = empty_world()
        add_unit(w2, 1, 1)
        assert fitness_of(w2) == 0.0

    def test_fraction(self):
        w = empty_world()
        add_unit(w, 3, 5)
        for i in range(3):
            add_unit(w, 1, 1 + i % 2)
        assert fitness_of(w) == 0.25

    def test_zero_resources(self):
        w = empty_world()
        with pytest.raises(ZeroResources):
            fitness_of(w)

    def test_monotone_in_dumped_units(self):
        w = empty_world()
        ids = [add_unit(w, 1, i + 1) for i in range(4)]
        scores = [fitness_of(w)]
        targets = [(3, 5), (4, 5), (3, 5), (4, 5)]
        for uid, pos in zip(ids, targets):
            w.units_by_cell[w.units[uid].position].remove(uid)
            w.units[uid].position = pos
            w.units_by_cell.setdefault(pos, []).append(uid)
            scores.append(fitness_of(w))
        assert scores == sorted(scores)
        assert scores[0] == 0.0 and scores[-1] == 1.0


class TestInvariantsUnderRandomDriving:
    def test_random_behavior_storm_preserves_world_invariants(self, rng):
        """Conservation/exclusion hold across thousands of random behaviors."""
        total_steps = 0
        for trial in range(6):
            cfg = WorldConfig(grid_width=12, grid_height=12, robot_count=3,
                              resource_count=12, dump_rect=Rect(4, 8, 4, 3),
                              rng_seed=trial)
            w = create_world(cfg)
            rep = PRIM if trial % 2 else BASIS

            def storm(frame, rep=rep):
                k = int(rng.integers(0, 4))
                picks = rng.choice(len(rep), size=k, replace=False)
                return frozenset(rep[int(i)] for i in picks), rep

            for _ in range(120):
                step_all(w, [storm] * 3)
                total_steps += 1
            check_invariants(w)
            assert sorted(u.id for u in w.units) == list(range(12))
        assert total_steps == 720

    def test_turn_left_then_right_restores_pose(self):
        w = empty_world()
        place_robot(w, 0, 3, 2, Heading.E)
        apply_behavior(w, 0, TL)
        apply_behavior(w, 0, TR)
        assert w.robot(0).pose == (3, 2, Heading.E)
