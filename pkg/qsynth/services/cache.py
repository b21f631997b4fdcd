"""
In-process memo of built cost databases
Keyed by a hash of the build parameters; thread count is not part of the key
because it does not change the result
"""

import hashlib
import json
import time
from functools import wraps

from qsynth import current_app
from qsynth.extensions import logger
from qsynth.services.finding import finding

# Format: {cache_key: (timestamp, (database, layer_stats))}
_cache = {}
_stats = {'hits': 0, 'misses': 0}


def generate_cache_key(max_cost, free_nots, key):
    """
    Cache key from the parameters that determine a database
    Format: db_k{max_cost}_{hash}
    """
    cache_params = {
        'max_cost': max_cost,
        'free_nots': bool(free_nots),
        'key': key,
        'order': current_app().config['RESIDUAL_ORDER'],
    }
    param_str = json.dumps(cache_params, sort_keys=True)
    param_hash = hashlib.md5(param_str.encode()).hexdigest()[:12]
    return f"db_k{max_cost}_{param_hash}"


def cache_database(func):
    """
    Memoise a finding-style builder `func(max_cost, free_nots=False, key=None, **kwargs)`
    Oldest entries are evicted past DATABASE_CACHE_SIZE
    """
    @wraps(func)
    def wrapper(max_cost, free_nots=False, key=None, **kwargs):
        settings = current_app().config
        key = key or settings['SEARCH_KEY']
        cache_key = generate_cache_key(max_cost, free_nots, key)

        if cache_key in _cache:
            _stats['hits'] += 1
            logger.debug(f"database cache hit: {cache_key}")
            return _cache[cache_key][1]

        _stats['misses'] += 1
        result = func(max_cost, free_nots, key=key, **kwargs)
        _cache[cache_key] = (time.time(), result)
        _evict(settings.get('DATABASE_CACHE_SIZE', 4))
        return result

    return wrapper


def _evict(capacity):
    """Drop the oldest entries beyond capacity"""
    while len(_cache) > max(0, capacity):
        oldest = min(_cache, key=lambda k: _cache[k][0])
        del _cache[oldest]


def clear_all_cache():
    _cache.clear()
    _stats['hits'] = 0
    _stats['misses'] = 0


def get_cache_stats():
    """Cache statistics for monitoring"""
    return {
        'total_entries': len(_cache),
        'hits': _stats['hits'],
        'misses': _stats['misses'],
        'keys': sorted(_cache),
    }


@cache_database
def build_database(max_cost, free_nots=False, key=None, **kwargs):
    """finding() with results memoised per process"""
    return finding(max_cost, free_nots, key=key, **kwargs)
