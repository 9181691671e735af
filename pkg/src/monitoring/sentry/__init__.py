"""
Sentry Error Tracking Module

Provides exception capture with clustering-run context.
"""

from .setup import (
    init_sentry,
    is_initialized,
    set_run_context,
    add_breadcrumb,
    capture_exception,
    capture_message,
)

__all__ = [
    'init_sentry',
    'is_initialized',
    'set_run_context',
    'add_breadcrumb',
    'capture_exception',
    'capture_message',
]
