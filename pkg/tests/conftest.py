import numpy as np
import pytest

from patchreid.descriptor import PartSet, SamplingConfig
from patchreid.evaluation import synth_pairs


def random_histogram(rng, bins=40):
    """Random non-negative histogram normalized to sum 1."""
    h = rng.random(bins)
    return h / h.sum()


def random_part_set(rng, size, bins=40):
    hsv = rng.random((size, bins))
    hsv /= hsv.sum(axis=1, keepdims=True)
    y = rng.random(size)
    return PartSet(hsv, y)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_sampling():
    # Small patch budget keeps descriptor-heavy tests fast.
    return SamplingConfig(patches=16, seed=0)


@pytest.fixture
def tiny_pairs():
    """Four synthetic persons with untouched probes."""
    return synth_pairs(4, seed=11, probe_coeff=1.0)


@pytest.fixture
def person_image(tiny_pairs):
    _, raster, _, mask = tiny_pairs[0]
    return raster, mask
