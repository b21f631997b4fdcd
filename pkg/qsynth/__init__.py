"""
qsynth: exact minimum-cost synthesis of 3-qubit NOT/CNOT/CV/CV-dagger circuits
Application factory and access to the active configuration
"""

from typing import Any, Dict, Optional

from config import config
from qsynth.extensions import init_logging, logger

__version__ = '1.0.0'


class QSynthApp:
    """Resolved configuration plus the package logger"""

    def __init__(self, config_name: str, settings: Dict[str, Any]):
        self.name = config_name
        self.config = settings
        self.logger = logger

    def __repr__(self):
        return f'<QSynthApp {self.name}>'


_current: Optional[QSynthApp] = None


def create_app(config_name=None, **overrides) -> QSynthApp:
    """Create the application object and make it the active one"""
    global _current

    if config_name is None:
        config_name = 'default'
    if config_name not in config:
        raise KeyError(f"unknown configuration '{config_name}' (known: {', '.join(sorted(config))})")

    config_class = config[config_name]
    settings = {key: getattr(config_class, key) for key in dir(config_class) if key.isupper()}
    settings.update({key.upper(): value for key, value in overrides.items() if value is not None})

    init_logging(settings.get('LOG_LEVEL', 'WARNING'))

    app = QSynthApp(config_name, settings)
    _current = app
    logger.debug(f"created {app} with {settings}")
    return app


def current_app() -> QSynthApp:
    """The active application, created with the default configuration on first use"""
    if _current is None:
        return create_app()
    return _current
