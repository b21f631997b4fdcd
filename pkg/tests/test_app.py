"""
Application factory, configuration profiles and the database cache
"""

import pytest

from qsynth import create_app, current_app
from qsynth.services import cache
from qsynth.services.cache import (
    build_database,
    clear_all_cache,
    generate_cache_key,
    get_cache_stats,
)


def test_profiles():
    """Test 1: each profile resolves its own values"""
    assert create_app('production').config['WORKER_THREADS'] == 4
    assert create_app('development').config['LOG_LEVEL'] == 'DEBUG'
    app = create_app('testing')
    assert app.config['MEMORY_CEILING_MB'] == 1024
    assert current_app() is app


def test_overrides():
    """Test 2: keyword overrides win, None leaves the profile value"""
    app = create_app('testing', worker_threads=2, search_key=None)
    assert app.config['WORKER_THREADS'] == 2
    assert app.config['SEARCH_KEY'] == 'trajectory'


def test_unknown_profile():
    """Test 3: profiles are selected by known name only"""
    with pytest.raises(KeyError):
        create_app('staging')


def test_cache_hits_and_keys():
    """Test 4: a second build with the same parameters is a hit"""
    clear_all_cache()
    first = build_database(2)
    second = build_database(2, threads=3)
    stats = get_cache_stats()
    assert first is second
    assert stats['hits'] == 1
    assert stats['misses'] == 1
    assert stats['keys'] == [generate_cache_key(2, False, 'trajectory')]
    assert generate_cache_key(2, False, 'trajectory').startswith('db_k2_')
    assert generate_cache_key(2, True, 'trajectory') != generate_cache_key(2, False, 'trajectory')


def test_cache_eviction():
    """Test 5: entries beyond DATABASE_CACHE_SIZE are dropped, oldest first"""
    clear_all_cache()
    create_app('testing', database_cache_size=2)
    for k in range(4):
        build_database(k)
    assert get_cache_stats()['total_entries'] == 2
    assert generate_cache_key(3, False, 'trajectory') in cache._cache
    assert generate_cache_key(0, False, 'trajectory') not in cache._cache
