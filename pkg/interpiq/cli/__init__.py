"""
InterpIQ CLI Module

The typer application behind the ``interpiq`` command.
"""

from .main import app as main_app

__all__ = [
    "main_app",
]
