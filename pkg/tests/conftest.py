import math

import numpy as np
import pytest

from pointer_entropy import Grid, ProbabilityDensity
from pointer_entropy.states import normalized_density


def gaussian_density(variance: float, grid: Grid) -> ProbabilityDensity:
    values = np.exp(-grid.points ** 2 / (2.0 * variance))
    return normalized_density(grid, values)


def gaussian_grid(variance: float, count: int = 4097) -> Grid:
    half = 8.0 * math.sqrt(variance) + 2.0
    return Grid(-half, half, count)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
