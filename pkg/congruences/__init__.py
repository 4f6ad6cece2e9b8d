import logging
import random
from dataclasses import dataclass, replace

from congruences.errors import ConfigError

__version__ = '0.3.0'

logger = logging.getLogger(__name__)

sentry_handler = None
try:
    from raven.conf import setup_logging
    from raven.handlers.logging import SentryHandler
    from congruences.app_config import SENTRY_DSN

    if SENTRY_DSN:
        sentry_handler = SentryHandler(SENTRY_DSN)
        setup_logging(sentry_handler)
except ImportError:
    pass
except KeyError:
    pass


@dataclass(frozen=True)
class Config(object):
    seed: int = 0
    rational_height_bound: int = 10**4
    retry_limit: int = 4
    output_path: str = None
    check_infinity: bool = True
    log_level: str = 'WARNING'

    def __post_init__(self):
        if self.retry_limit < 1:
            raise ConfigError('retry limit must be at least 1, got {0}'.format(self.retry_limit))
        if self.rational_height_bound < 100:
            raise ConfigError('rational height bound must be at least 100, '
                              'got {0}'.format(self.rational_height_bound))
        if self.seed < 0:
            raise ConfigError('seed must be non-negative, got {0}'.format(self.seed))

    def rng(self, offset=0):
        return random.Random(self.seed + offset)


def create_config(**overrides):
    """
    Build a Config from congruences.app_config, then apply keyword
    overrides (None values are ignored so argparse defaults pass through).
    """
    values = {}
    try:
        from congruences import app_config
    except ImportError:
        app_config = None

    if app_config is not None:
        for field in ('seed', 'rational_height_bound', 'retry_limit',
                      'output_path', 'check_infinity', 'log_level'):
            if hasattr(app_config, field.upper()):
                values[field] = getattr(app_config, field.upper())

    config = Config(**values)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        config = replace(config, **overrides)
    return config


DEFAULT_CONFIG = Config()
