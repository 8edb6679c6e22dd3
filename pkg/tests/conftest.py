from __future__ import annotations

from datetime import date, datetime, timedelta, timezone

import pytest

from spcc.model import DataSeries, MeasurementPoint

EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


def day(n: int) -> datetime:
    """UTC midnight n days after the fixture epoch (2024-01-01)."""
    return EPOCH + timedelta(days=n)


def dt(n: int) -> date:
    return (EPOCH + timedelta(days=n)).date()


def series(metric: str, entity: str, values, start: int = 0) -> DataSeries:
    """Daily series from a value list, starting at fixture day `start`."""
    points = [MeasurementPoint(metric, entity, day(start + i), float(v))
              for i, v in enumerate(values)]
    return DataSeries(metric, entity, tuple(points))


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "spcc-data"
