import numpy as np
import pytest
from hypothesis import given, strategies as st

from anthill.rng import (
    RngStream,
    bernoulli_step,
    derive_seed,
    random_walk,
    scale_walk,
    step_from_uniform,
    walk_from_uniforms,
)


def test_splitmix64_reference_vectors():
    # published SplitMix64 outputs (Vigna's reference C code)
    r = RngStream(1234567)
    assert [r.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]
    r = RngStream(0)
    assert [r.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_first_uniform_seed_zero_golden():
    # (0xE220A8397B1DCDAF >> 11) / 2**53
    assert RngStream(0).next_uniform() == 0.8833108082136426


def test_equal_seeds_equal_streams():
    a, b = RngStream(99), RngStream(99)
    assert [a.next_uniform() for _ in range(1000)] == [b.next_uniform() for _ in range(1000)]


def test_batch_matches_scalar_draws():
    a, b = RngStream(7), RngStream(7)
    batch = a.uniforms(257)
    assert batch.tolist() == [b.next_uniform() for _ in range(257)]
    assert a.state == b.state


def test_uniform_mean_monte_carlo():
    u = RngStream(2024).uniforms(10**6)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_spawned_streams_differ_and_leave_parent_alone():
    parent = RngStream(5)
    c0, c1 = parent.spawn(0), parent.spawn(1)
    assert parent.state == 5
    assert c0.state != c1.state
    assert c0.state == derive_seed(5, 0)


@pytest.mark.parametrize("u, step", [(0.7, 1), (0.2, -1), (0.5, -1)])
def test_step_rule(u, step):
    assert step_from_uniform(u) == step


def test_bernoulli_step_uses_one_draw():
    r = RngStream(3)
    expected = 1 if RngStream(3).next_uniform() > 0.5 else -1
    assert bernoulli_step(r) == expected
    ref = RngStream(3)
    ref.next_uniform()
    assert r.state == ref.state


def test_walk_examples():
    assert random_walk(0, RngStream(1)) == [0.0]
    assert walk_from_uniforms([0.7, 0.2, 0.9]) == [0, 1, 0, 1]
    assert walk_from_uniforms([0.1, 0.3, 0.49]) == [0, -1, -2, -3]


def test_walk_consumes_exactly_n_draws():
    r = RngStream(11)
    random_walk(40, r)
    ref = RngStream(11)
    ref.uniforms(40)
    assert r.state == ref.state


def test_negative_steps_rejected():
    with pytest.raises(ValueError):
        random_walk(-1, RngStream(0))


def test_scale_walk_examples():
    assert scale_walk([0, 1, 0, 1], -1, 1) == [-1, 1, -1, 1]
    assert scale_walk([0], 2, 4) == [3]
    assert scale_walk([0, -1, -2, 5], 1.5, 1.5) == [1.5] * 4
    with pytest.raises(ValueError):
        scale_walk([0, 1], 1, 0)


@given(st.integers(0, 2**64 - 1), st.integers(0, 200))
def test_walk_shape_properties(seed, n):
    w = random_walk(n, RngStream(seed))
    assert len(w) == n + 1
    assert w[0] == 0
    assert all(abs(b - a) == 1 for a, b in zip(w, w[1:]))
    assert w == random_walk(n, RngStream(seed))


@given(st.integers(0, 2**64 - 1), st.integers(0, 60),
       st.floats(-1e6, 1e6), st.floats(0, 1e6))
def test_scaled_walk_stays_in_interval(seed, n, lo, width):
    hi = lo + width
    ys = scale_walk(random_walk(n, RngStream(seed)), lo, hi)
    assert all(lo <= y <= hi for y in ys)


def test_final_position_unbiased():
    r = RngStream(77)
    finals = np.array([random_walk(100, r)[-1] for _ in range(10_000)])
    # 5 sigma of the mean of 1e4 walks with variance 100
    assert abs(finals.mean()) <= 5 * 10 / np.sqrt(10_000)
