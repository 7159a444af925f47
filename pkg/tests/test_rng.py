from lllab.rng import MASK64, mix64, shuffle_in_place, stream_u64, stream_unit


def test_mix64_is_64bit_and_deterministic():
    vals = [mix64(z) for z in (0, 1, 2 ** 63, MASK64, 0x123456789ABCDEF)]
    assert vals == [mix64(z) for z in (0, 1, 2 ** 63, MASK64, 0x123456789ABCDEF)]
    assert all(0 <= v <= MASK64 for v in vals)
    assert len(set(vals)) == len(vals)


def test_stream_is_a_pure_function_of_the_triple():
    a = stream_u64(42, 7, 3)
    assert a == stream_u64(42, 7, 3)
    assert a != stream_u64(43, 7, 3)
    assert a != stream_u64(42, 8, 3)
    assert a != stream_u64(42, 7, 4)


def test_stream_unit_range_and_rough_uniformity():
    us = [stream_unit(1, k, i) for k in range(20) for i in range(200)]
    assert all(0.0 <= u < 1.0 for u in us)
    mean = sum(us) / len(us)
    assert abs(mean - 0.5) < 0.02


def test_no_collisions_on_a_grid():
    seen = {stream_u64(5, k, i) for k in range(100) for i in range(100)}
    assert len(seen) == 100 * 100


def test_shuffle_deterministic_and_a_permutation():
    items = list(range(30))
    a, b = list(items), list(items)
    shuffle_in_place(a, seed=9, key=4)
    shuffle_in_place(b, seed=9, key=4)
    assert a == b
    assert sorted(a) == items
    c = list(items)
    shuffle_in_place(c, seed=9, key=5)
    assert c != a
