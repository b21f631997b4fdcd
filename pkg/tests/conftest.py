"""
Shared fixtures: testing configuration, the cost database built to cost 5
and seeded random sources
"""

import random

import pytest

from qsynth import create_app
from qsynth.services.cache import build_database, clear_all_cache

SEED = 20240607


@pytest.fixture(scope='session', autouse=True)
def app():
    clear_all_cache()
    return create_app('testing')


@pytest.fixture(autouse=True)
def active_app(app):
    """CLI invocations replace the active app; restore the testing one"""
    yield
    create_app('testing')


@pytest.fixture(scope='session')
def db5(app):
    db, _ = build_database(5)
    return db


@pytest.fixture(scope='session')
def db_stats5(app):
    return build_database(5)[1]


@pytest.fixture
def rng():
    return random.Random(SEED)
