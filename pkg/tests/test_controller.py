"""Input encoding and repertoire contracts."""

from __future__ import annotations

import numpy as np
import pytest

from neuroforage.behaviors import Mode, repertoire
from neuroforage.controller import (
    PLANE_SIZE,
    CachingDecider,
    encode_inputs,
    plane_index,
    sensor_space_size,
)
from neuroforage.world import FloorColor, LightPosition, SensorFrame


def random_frame(rng) -> SensorFrame:
    return SensorFrame(
        *(int(rng.integers(0, 2)) for _ in range(4)),
        *(FloorColor(int(rng.integers(0, 4))) for _ in range(4)),
        int(rng.integers(0, 2)),
        int(rng.integers(0, 2)),
        LightPosition(int(rng.integers(0, 4))),
        int(rng.integers(0, 11)),
        *(int(rng.integers(0, 2)) for _ in range(4)),
    )


class TestEncodeInputs:
    def test_all_zero_frame(self):
        frame = SensorFrame(0, 0, 0, 0,
                            FloorColor.FLOOR, FloorColor.FLOOR,
                            FloorColor.FLOOR, FloorColor.FLOOR,
                            0, 0, LightPosition.NOT_VISIBLE, 0,
                            0, 0, 0, 0)
        assert encode_inputs(frame) == (0.0,) * 16

    def test_values_and_layout(self):
        frame = SensorFrame(1, 0, 1, 0,
                            FloorColor.BLUE, FloorColor.RED,
                            FloorColor.ORANGE, FloorColor.FLOOR,
                            0, 1, LightPosition.CENTER, 7,
                            1, 1, 0, 1)
        plane = encode_inputs(frame)
        assert len(plane) == PLANE_SIZE
        assert plane[plane_index(0, 0)] == 1.0  # v1
        assert plane[plane_index(1, 0)] == pytest.approx(1 / 3)  # blue
        assert plane[plane_index(1, 1)] == pytest.approx(2 / 3)  # red
        assert plane[plane_index(1, 2)] == 1.0  # orange
        assert plane[plane_index(2, 1)] == 1.0  # s2
        assert plane[plane_index(2, 2)] == pytest.approx(2 / 3)  # center bearing
        assert plane[plane_index(2, 3)] == pytest.approx(0.7)  # ld 7
        assert plane[plane_index(3, 2)] == 0.0  # m3

    def test_bounded_unit_interval(self, rng):
        for _ in range(500):
            plane = encode_inputs(random_frame(rng))
            assert all(0.0 <= v <= 1.0 for v in plane)

    def test_injective_over_random_pairs(self, rng):
        """Brute-force injectivity check across 10,000 random frame pairs."""
        seen: dict[tuple, SensorFrame] = {}
        for _ in range(10_000):
            frame = random_frame(rng)
            plane = encode_inputs(frame)
            if plane in seen:
                assert seen[plane] == frame
            else:
                seen[plane] = frame

    def test_purity(self, rng):
        frame = random_frame(rng)
        assert encode_inputs(frame) == encode_inputs(frame)


class TestSensorSpaceSize:
    def test_three_state_bearing_count(self):
        # 2^4 * 4^4 * 2^2 * 3 * 11 * 2^4, the classic discretized-input count
        assert sensor_space_size(3) == 8_650_752

    def test_four_state_bearing_count(self):
        assert sensor_space_size(4) == 8_650_752 // 3 * 4


class TestRepertoire:
    def test_basis_has_twelve_ordered_behaviors(self):
        rep = repertoire(Mode.BASIS)
        assert len(rep) == 12
        assert rep[0].action == "dump"
        assert rep[1].action == "forward"
        assert rep[2].action == "turn_right"
        assert rep[3].action == "turn_left"
        assert [b.action for b in rep[4:]] == [
            "bit_set_1", "bit_clear_1", "bit_set_2", "bit_clear_2",
            "bit_set_3", "bit_clear_3", "bit_set_4", "bit_clear_4"]

    def test_primitive_has_twenty(self):
        rep = repertoire(Mode.PRIMITIVE)
        assert len(rep) == 20
        moves = [b.action for b in rep[:12]]
        assert moves[:4] == ["dump", "forward", "turn_right", "turn_left"]
        assert set(moves[4:]) == {"slide_left", "slide_right", "diag_left",
                                  "diag_right", "pivot_left_fwd", "pivot_left_back",
                                  "pivot_right_fwd", "pivot_right_back"}
        assert sum(b.action.startswith("bit_") for b in rep) == 8

    def test_ids_are_mode_scoped(self):
        basis_fwd = repertoire(Mode.BASIS)[1]
        prim_fwd = repertoire(Mode.PRIMITIVE)[1]
        assert basis_fwd.action == prim_fwd.action == "forward"
        assert basis_fwd != prim_fwd


class TestCachingDecider:
    def test_cache_matches_source(self, rng):
        class Source:
            def __init__(self):
                self.calls = 0

            def decide(self, plane):
                self.calls += 1
                rep = repertoire(Mode.BASIS)
                return frozenset([rep[sum(v > 0 for v in plane) % 12]]), rep

        src = Source()
        decider = CachingDecider(src)
        frames = [random_frame(rng) for _ in range(50)]
        first = [decider(f) for f in frames for _ in range(3)]
        assert src.calls == len({f for f in frames})
        again = [decider(f) for f in frames for _ in range(3)]
        assert first == again
