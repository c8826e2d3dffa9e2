import numpy as np
import pytest

from src.plantlab import (
    InputSpec,
    LpvModelSource,
    PendulumSource,
    example1_model,
    example1_scheduling,
    generate_dictionary,
    make_input
)
from src.predictor import build_blocks

SEED = 42


@pytest.fixture(scope='session')
def example1_source():
    return LpvModelSource(example1_model(), example1_scheduling, label='example1')


@pytest.fixture(scope='session')
def example1_dictionary(example1_source):
    return generate_dictionary(example1_source, InputSpec('uniform', 1.0), 48, SEED, 5)


@pytest.fixture(scope='session')
def example1_blocks(example1_dictionary):
    return build_blocks(example1_dictionary, 2, 5)


@pytest.fixture(scope='session')
def long_example1_dictionary(example1_source):
    """Recording long enough for a past window of 2 and horizon 10."""
    return generate_dictionary(example1_source, InputSpec('uniform', 1.0), 120, SEED, 10)


@pytest.fixture(scope='session')
def example2_dictionary():
    return generate_dictionary(PendulumSource(), InputSpec('multisine', 0.25, 8), 34, SEED, 5)


@pytest.fixture(scope='session')
def example1_trajectory(example1_source):
    """Independent 40-sample recording of the academic system."""
    u = make_input(InputSpec('uniform', 1.0), 40, SEED + 7)
    return example1_source.record(u)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
