import random

import pytest

from mith.field import Modulus, RandomSource


@pytest.fixture
def m11():
    return Modulus(11)


@pytest.fixture
def m97():
    return Modulus(97)


@pytest.fixture
def m101():
    return Modulus(101)


@pytest.fixture
def rng():
    return RandomSource(0xC0FFEE)


@pytest.fixture
def rnd():
    return random.Random(0xBEEF)
