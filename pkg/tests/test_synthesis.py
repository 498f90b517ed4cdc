import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from detour_choice.core import MODES, Dataset, Mode, NetworkParams, ScalingConfig
from detour_choice.errors import SpecificationError
from detour_choice.model_spec import ModelSpec, Term
from detour_choice.synthesis import (
    ATTRIBUTE_TABLE_COLUMNS, DesignMatrix, alternative_detour_times, attribute_table_csv,
    build_design_matrix, detour_cost, detour_distance, profit, reconstruct_attributes,
)

from conftest import make_obs

modes = st.sampled_from(list(MODES))
minutes = st.floats(min_value=15.0, max_value=60.0)


class TestDistance:
    def test_car_30_minutes(self):
        assert detour_distance(Mode.CAR, 30.0) == pytest.approx(11.5, rel=1e-12)

    def test_walking_15_minutes(self):
        assert detour_distance(Mode.WALKING, 15.0) == pytest.approx(1.0, rel=1e-12)

    def test_vanishes_with_time(self):
        assert detour_distance(Mode.BIKE, 1e-12) < 1e-12

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_nonpositive_rejected(self, t):
        with pytest.raises(ValueError):
            detour_distance(Mode.BUS, t)


class TestTimes:
    def test_metro_and_bus_from_11_5_km(self):
        t = alternative_detour_times(11.5)
        assert t[Mode.METRO] == pytest.approx(53.08, abs=5e-3)
        assert t[Mode.BUS] == pytest.approx(76.67, abs=5e-3)

    def test_zero_distance(self):
        assert all(v == 0 for v in alternative_detour_times(0.0).values())

    def test_negative_distance(self):
        with pytest.raises(ValueError):
            alternative_detour_times(-1.0)

    @given(st.floats(min_value=1e-3, max_value=100.0))
    def test_ordered_inversely_to_speed(self, km):
        t = alternative_detour_times(km)
        order = [Mode.BIKE, Mode.CAR, Mode.METRO, Mode.BUS, Mode.ELECTRIC_GROUND_PT, Mode.WALKING]
        assert all(t[a] < t[b] for a, b in zip(order, order[1:]))

    @given(modes, minutes)
    def test_round_trip(self, m, t):
        back = alternative_detour_times(detour_distance(m, t))[m]
        assert abs(back - t) <= 1e-9 * t


class TestCost:
    def test_bus_flat_fare(self):
        assert detour_cost(Mode.BUS, 0.5) == 10
        assert detour_cost(Mode.BUS, 40.0) == 10

    def test_car_fuel(self):
        assert detour_cost(Mode.CAR, 11.5) == pytest.approx(24.84, rel=1e-12)

    @pytest.mark.parametrize("m", [Mode.WALKING, Mode.BIKE])
    def test_free_modes(self, m):
        assert detour_cost(m, 11.5) == 0

    def test_profit(self):
        assert profit(90, 10) == 80
        assert profit(60, 0) == 60
        assert profit(50, detour_cost(Mode.CAR, 11.5)) == pytest.approx(25.16, rel=1e-12)
        assert profit(10, 24.84) < 0


def _one(**kw):
    return Dataset((make_obs(1, **kw),))


class TestDesignMatrix:
    def test_car_chosen_example(self):
        X = build_design_matrix(_one(chosen_mode=Mode.CAR, stated_detour_min=30.0,
                                     remuneration_uah=90.0, income_uah=10000.0))
        bus = X.values[0, Mode.BUS]
        assert bus[X.index("time")] == pytest.approx(7.667, abs=5e-4)
        assert bus[X.index("cost")] == 1.0
        assert bus[X.index("income")] == 1.0
        assert X.distance_km[0] == pytest.approx(11.5)

    @given(modes.filter(lambda m: m != Mode.CAR), st.floats(min_value=1.0, max_value=200.0))
    def test_chosen_cell_passes_through(self, m, t):
        X = build_design_matrix(_one(chosen_mode=m, stated_detour_min=t))
        assert X.values[0, m, X.index("time")] == t / 10

    def test_unavailable_car_masked_not_sentinel(self):
        X = build_design_matrix(_one(car_available=False))
        assert not X.available[0, Mode.CAR]
        assert np.all(np.isfinite(X.values))

    def test_attributes_identities(self, bundled):
        att = reconstruct_attributes(bundled)
        assert np.array_equal(att.profit_uah + att.cost_uah, np.broadcast_to(
            att.remuneration_uah[:, None], att.cost_uah.shape))
        assert np.all(att.cost_uah[:, [Mode.WALKING, Mode.BIKE]] == 0)
        rows = np.arange(len(bundled))
        assert np.array_equal(att.time_min[rows, bundled.chosen],
                              bundled.column("stated_detour_min").astype(float))

    def test_scaling_round_trip(self, bundled):
        s = ScalingConfig(detour_time_divisor=7.0, profit_divisor=33.0)
        X = build_design_matrix(bundled, s=s)
        att = reconstruct_attributes(bundled)
        raw = X.raw()
        assert_allclose(raw[:, :, X.index("time")], att.time_min, rtol=1e-12)
        assert_allclose(raw[:, :, X.index("profit")], att.profit_uah, rtol=1e-12)

    def test_unknown_attribute_in_spec(self, bundled):
        spec = ModelSpec((Term("B_SPEED", "speed", [Mode.BUS]),))
        with pytest.raises(SpecificationError, match="speed"):
            build_design_matrix(bundled, spec=spec)
        with pytest.raises(SpecificationError):
            build_design_matrix(bundled).index("speed")

    def test_custom_network(self):
        net = NetworkParams(fuel_consumption_l_per_km=0.1)
        X = build_design_matrix(_one(chosen_mode=Mode.CAR, stated_detour_min=30.0), net=net)
        assert X.raw()[0, Mode.CAR, X.index("cost")] == pytest.approx(11.5 * 0.1 * 27)

    def test_take_and_block(self, bundled_design):
        X = bundled_design
        sub = X.take([3, 1])
        assert sub.ids == (X.ids[3], X.ids[1])
        assert np.array_equal(sub.values[0], X.values[3])
        assert X.block(2).n_obs == 1

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            DesignMatrix.from_arrays(np.zeros((2, 6, 3)), np.ones((2, 6)), [0, 0],
                                     attributes=("a", "b"))
        with pytest.raises(ValueError, match="available"):
            DesignMatrix.from_arrays(np.zeros((1, 6, 1)), [[False, True] + [True] * 4], [0],
                                     attributes=("a",))

    def test_order_preserved(self, bundled, bundled_design):
        assert bundled_design.ids == bundled.ids


def test_attribute_table(bundled):
    d = bundled.subset([i < 3 for i in range(len(bundled))])
    text = attribute_table_csv(build_design_matrix(d))
    lines = text.splitlines()
    assert lines[0].split(",") == list(ATTRIBUTE_TABLE_COLUMNS)
    assert len(lines) == 1 + 3 * 6
    first = dict(zip(ATTRIBUTE_TABLE_COLUMNS, lines[1].split(",")))
    assert first["mode"] == "walking" and first["detour_cost"] == "0"
