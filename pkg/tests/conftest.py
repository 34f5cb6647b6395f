import random

import pytest

from core.base import TruncationWindow


@pytest.fixture
def window():
    return TruncationWindow()


@pytest.fixture
def small_window():
    return TruncationWindow(max_arity=2, degree_min=-4, degree_max=4, max_weight=2)


@pytest.fixture
def rng():
    return random.Random(20240611)
