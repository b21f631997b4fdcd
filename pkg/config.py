"""
Configuration classes for the qsynth engine
Selected by name through create_app(); no environment lookup
"""


class Config:
    # Breadth-first search budget (resident bytes of frontier + seen keys)
    MEMORY_CEILING_MB = 2048
    WORKER_THREADS = 1

    # 'trajectory' keys states by their images of the 8 binary entries,
    # 'full' by the complete 64-entry partial permutation
    SEARCH_KEY = 'trajectory'

    # Side on which the NOT layer sits in a synthesis: 'notfirst' | 'notlast'
    RESIDUAL_ORDER = 'notfirst'

    # Largest bound accepted by the database-free DFS
    DFS_MAX_COST = 7

    # Built databases kept in the process cache
    DATABASE_CACHE_SIZE = 4

    LOG_LEVEL = 'WARNING'


class DevelopmentConfig(Config):
    LOG_LEVEL = 'DEBUG'


class TestingConfig(Config):
    """Configuration for the test suite"""
    MEMORY_CEILING_MB = 1024
    DATABASE_CACHE_SIZE = 8


class ProductionConfig(Config):
    # Long table runs (cost 7 and closure)
    MEMORY_CEILING_MB = 8192
    WORKER_THREADS = 4
    LOG_LEVEL = 'INFO'


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': Config
}
