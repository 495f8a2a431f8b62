import os
import sys
from fractions import Fraction

import numpy as np
import pytest

# flat module layout: make the repository root importable
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import vlcconfig
from genericclasses import Block, CostModel, FrequencyTable


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch):
    """Keep flags and parameters set by one test (or by start.main) out of the next."""
    monkeypatch.setattr(vlcconfig, "verbose", False)
    monkeypatch.setattr(vlcconfig, "showprogress", False)
    monkeypatch.setattr(vlcconfig, "slim_log", True)
    monkeypatch.setattr(vlcconfig, "evaluation_parameters", dict(vlcconfig.evaluation_parameters))


@pytest.fixture
def rng():
    return np.random.RandomState(20151)


@pytest.fixture
def two_bit_freqs():
    """Data words 00, 01, 10, 11 with frequencies .1, .2, .3, .4."""
    return FrequencyTable(2, (Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)))


@pytest.fixture
def asym():
    return CostModel(Fraction(2), Fraction(1))


@pytest.fixture
def sym():
    return CostModel(Fraction(1), Fraction(1))


@pytest.fixture
def random_block(rng):
    """Function drawing uniformly random blocks from the seeded rng."""

    def draw(block_bytes=64):
        return Block(rng.randint(0, 256, size=block_bytes).astype(np.uint8).tobytes())

    return draw
