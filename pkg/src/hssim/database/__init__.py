"""Database integration components."""
from __future__ import annotations

from .models import Base, RunRecord
from .storage import RunOverview, Storage, create_storage

__all__ = [
    "Base",
    "RunOverview",
    "RunRecord",
    "Storage",
    "create_storage",
]
