"""CLI package for HC-SVD."""

from .main import cli

__all__ = ['cli']
