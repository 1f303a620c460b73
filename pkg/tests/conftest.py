import numpy as np
import pytest

from plotwire.table import ColumnTable, make_column


def random_xy_table(rng: np.random.Generator, n: int, name: str = "t",
                    with_nulls: bool = False) -> ColumnTable:
    x = rng.normal(0.0, 1.0, n)
    y = rng.normal(0.0, 1.0, n)
    nulls_x = rng.random(n) < 0.05 if with_nulls else None
    if with_nulls:
        nan_lanes = rng.random(n) < 0.05
        x = x.copy()
        x[nan_lanes] = np.nan
    return ColumnTable(name, (
        make_column("x", "float64", x, nulls_x),
        make_column("y", "float64", y),
        make_column("mag", "float64", rng.uniform(0.0, 20.0, n)),
        make_column("flag", "int64", rng.integers(0, 3, n)),
    ))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
