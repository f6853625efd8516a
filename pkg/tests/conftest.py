import random

import pytest

from eccnoc.presets import PRESETS


@pytest.fixture
def p17():
    return PRESETS["p17"]


@pytest.fixture
def b4():
    return PRESETS["b4"]


def seeded(seed: int) -> random.Random:
    return random.Random(seed)
