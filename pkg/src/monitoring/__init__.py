"""
Monitoring for clustering runs

Provides:
- Sentry error tracking with run context (enabled by SENTRY_DSN)
- Decorators for error capture and slow-run warnings
"""

from .config import MonitoringConfig
from .decorators import (
    capture_errors,
    track_performance,
    with_run_context,
)
from .sentry import (
    init_sentry,
    set_run_context,
    add_breadcrumb,
    capture_exception,
    capture_message,
)

__all__ = [
    # Config
    'MonitoringConfig',
    # Decorators
    'capture_errors',
    'track_performance',
    'with_run_context',
    # Sentry
    'init_sentry',
    'set_run_context',
    'add_breadcrumb',
    'capture_exception',
    'capture_message',
]
