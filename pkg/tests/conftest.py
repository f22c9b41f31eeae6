import math
import random

import pytest

from combpol.field import field_make


@pytest.fixture
def gf2():
    return field_make(2)


@pytest.fixture
def gf3():
    return field_make(3)


@pytest.fixture
def gf4():
    return field_make(2, 2)


@pytest.fixture
def rationals():
    return field_make(math.inf)


@pytest.fixture
def rng():
    return random.Random(1234)
