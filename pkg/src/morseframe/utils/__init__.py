"""
Utilities package.
"""
from .serialization import dumps, format_float, loads

__all__ = ["dumps", "format_float", "loads"]
