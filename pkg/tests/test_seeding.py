import numpy as np

from dect import seeding


def test_substream_reproducible():
    a = seeding.substream(3, seeding.DATA).random(5)
    b = seeding.substream(3, seeding.DATA).random(5)
    np.testing.assert_array_equal(a, b)


def test_substreams_independent_of_request_order():
    first = seeding.substream(3, seeding.INIT).random(3)
    seeding.substream(3, seeding.SHUFFLE).random(100)
    np.testing.assert_array_equal(seeding.substream(3, seeding.INIT).random(3), first)


def test_names_and_seeds_differ():
    draws = {
        (seed, name): tuple(seeding.substream(seed, name).random(3))
        for seed in (0, 1)
        for name in (seeding.DATA, seeding.INIT, seeding.SHUFFLE)
    }
    assert len(set(draws.values())) == 6


def test_subseed():
    value = seeding.subseed(5, seeding.DATA)
    assert 0 <= value < 2**31 - 1
    assert value == seeding.subseed(5, seeding.DATA)
    assert value != seeding.subseed(5, seeding.INIT)
