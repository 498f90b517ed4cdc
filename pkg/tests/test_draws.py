import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose, assert_array_equal
from scipy.special import ndtri

from detour_choice.draws import MAX_DIMS, PRIMES, halton_sequence, make_draws


def test_base_two_start():
    assert_allclose(halton_sequence(3, 2, skip=0), [0.5, 0.25, 0.75])


def test_base_three_start():
    assert_allclose(halton_sequence(4, 3, skip=0), [1 / 3, 2 / 3, 1 / 9, 4 / 9])


def test_skip_drops_leading_points():
    assert_array_equal(halton_sequence(5, 5, skip=10), halton_sequence(15, 5, skip=0)[10:])


@given(st.sampled_from(PRIMES[:12]), st.integers(1, 500))
def test_points_in_open_unit_interval(base, n):
    u = halton_sequence(n, base)
    assert np.all((u > 0) & (u < 1))
    assert len(np.unique(u)) == n


def test_inverse_normal_midpoint():
    assert ndtri(0.5) == 0.0


def test_moments():
    z = make_draws(100, 100, 2)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1) < 0.01


def test_dimensions_use_distinct_primes():
    z = make_draws(50, 20, 3)
    assert abs(np.corrcoef(z[:, :, 0].ravel(), z[:, :, 1].ravel())[0, 1]) < 0.05


def test_deal_order():
    z = make_draws(3, 4, 1)
    flat = ndtri(halton_sequence(12, 2))
    assert_array_equal(z[1, :, 0], flat[4:8])


def test_too_many_dimensions():
    with pytest.raises(ValueError, match=str(MAX_DIMS)):
        make_draws(2, 2, MAX_DIMS + 1)


def test_unknown_type():
    with pytest.raises(ValueError):
        make_draws(2, 2, 1, draw_type="sobol")


def test_deterministic():
    assert_array_equal(make_draws(10, 10, 2), make_draws(10, 10, 2))
    a = make_draws(10, 10, 2, "pseudo_random", seed=3)
    assert_array_equal(a, make_draws(10, 10, 2, "random", seed=3))
    assert not np.array_equal(a, make_draws(10, 10, 2, "pseudo_random", seed=4))
