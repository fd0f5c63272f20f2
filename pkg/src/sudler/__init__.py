"""Certified evaluation of Sudler products and the limit functions that control them."""
from __future__ import annotations

__version__ = "0.1.0"
