import numpy as np
import pytest

from bellcond.rng import DRAW_G1, DRAW_G2, DRAW_OUTCOME, stream_key, uniforms


def test_uniforms_are_in_unit_interval():
    u = uniforms(7, np.arange(100_000), DRAW_OUTCOME)
    assert u.dtype == np.float64
    assert (u >= 0.0).all() and (u < 1.0).all()


def test_uniforms_mean_and_variance():
    u = uniforms(42, np.arange(200_000), DRAW_G1)
    se = (1 / 12 / u.size) ** 0.5
    assert abs(u.mean() - 0.5) < 5 * se
    assert u.var() == pytest.approx(1 / 12, rel=0.01)


def test_draws_depend_only_on_seed_and_index():
    whole = uniforms(99, np.arange(1000), DRAW_G2)
    parts = np.concatenate([uniforms(99, np.arange(0, 400), DRAW_G2), uniforms(99, np.arange(400, 1000), DRAW_G2)])
    np.testing.assert_array_equal(whole, parts)
    np.testing.assert_array_equal(uniforms(99, np.array([737]), DRAW_G2), whole[737:738])


def test_draw_slots_and_seeds_differ():
    indices = np.arange(1000)
    assert not np.array_equal(uniforms(1, indices, DRAW_G1), uniforms(1, indices, DRAW_G2))
    assert not np.array_equal(uniforms(1, indices, DRAW_G1), uniforms(2, indices, DRAW_G1))


def test_largest_seed_is_accepted():
    stream_key((1 << 64) - 1)


@pytest.mark.parametrize("seed", [-1, 1 << 64])
def test_seed_out_of_range(seed):
    with pytest.raises(ValueError):
        stream_key(seed)
