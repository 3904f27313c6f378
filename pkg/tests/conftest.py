"""Shared fixtures for the ergolab test suite."""

import json
from fractions import Fraction

import pytest

from src.systems import RationalVec, doubling, interval_map, vec
from src.utils.result_store import ResultStore


@pytest.fixture
def store(tmp_path):
    return ResultStore(base_dir=tmp_path)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON payload under tmp_path and return its path as a string."""
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def square():
    return interval_map("square")


@pytest.fixture
def doubling_map():
    return doubling()


@pytest.fixture
def seventh():
    return RationalVec((Fraction(1, 7),))


@pytest.fixture
def square_grid():
    return [vec((k / 10,)) for k in range(10)] + [vec((1.0,))]
