import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from einverse import DenseTensor, GroupedShape

# deterministic example generation: the suite either passes or fails, never flakes
settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240901))


def random_tensor(rng, row_dims, col_dims) -> DenseTensor:
    shape = GroupedShape(tuple(row_dims), tuple(col_dims))
    n = shape.row_count * shape.col_count
    return DenseTensor(shape, rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
