import random

import pytest

from orthoposet.constructs import FIXTURES, boolean_algebra, chain2, fixture
from orthoposet.enumeration import EnumJob, enumerate_job
from orthoposet.ortho import validate_orthoposet


@pytest.fixture(scope="session")
def fixtures():
    return {name: fixture(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def small_structures():
    """Every bounded involutive poset with 2..8 elements, one per class."""
    res = enumerate_job(EnumJob(8, (), keep=True))
    return [op for _, op in res.representatives]


@pytest.fixture(scope="session")
def corpus(fixtures, small_structures):
    """Fixtures, a few Boolean algebras and all small enumerated structures."""
    named = list(fixtures.values()) + [chain2(), boolean_algebra(2), boolean_algebra(3)]
    return named + small_structures


@pytest.fixture(scope="session")
def ortho_corpus(corpus):
    return [op for op in corpus if validate_orthoposet(op.poset, op.prime).verdict]


@pytest.fixture
def rng():
    return random.Random(20240611)
