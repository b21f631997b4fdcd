"""
Shared singletons to avoid circular imports
"""

import logging

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

logger = logging.getLogger('qsynth')


def init_logging(level='WARNING'):
    """Attach one stderr handler to the package logger (idempotent)"""
    if not any(getattr(h, '_qsynth', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._qsynth = True
        logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger
