import numpy as np
import pytest
from hypothesis import settings

from rxmflow.perception import (
    CATEGORICAL, CONSTANT, NUMERIC, ColumnProfile, DatasetFrame,
    DatasetMetadata,
)

settings.register_profile("engine", deadline=None)
settings.load_profile("engine")


def make_frame(columns: dict) -> DatasetFrame:
    """Build a DatasetFrame from {name: cells}; cells use floats, strs, None."""
    names = list(columns)
    cols = [list(columns[name]) for name in names]
    n_rows = len(cols[0]) if cols else 0
    return DatasetFrame(column_names=names, columns=cols, n_rows=n_rows)


def make_profile(name, dtype=NUMERIC, missing_pct=0.0, unique_count=10,
                 n_rows=100, **extra) -> ColumnProfile:
    missing = int(round(missing_pct * n_rows))
    non_missing = n_rows - missing
    return ColumnProfile(
        name=name,
        inferred_dtype=dtype,
        missing_count=missing,
        missing_pct=missing_pct,
        unique_count=unique_count,
        uniqueness_ratio=unique_count / non_missing if non_missing else 0.0,
        **extra,
    )


def make_metadata(profiles, n_rows=100, memory_bytes=1024) -> DatasetMetadata:
    return DatasetMetadata(
        n_rows=n_rows,
        n_cols=len(profiles),
        profiles=list(profiles),
        estimated_memory_bytes=memory_bytes,
        preview=[],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
