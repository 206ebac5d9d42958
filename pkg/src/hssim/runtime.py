"""Application level helpers for assembling runner dependencies."""
from __future__ import annotations

from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Optional

from .config import AppConfig
from .database import Storage, create_storage
from .pipeline import ScenarioRunner

LOGGER = logging.getLogger(__name__)


@dataclass(slots=True)
class RunnerResources:
    """Container bundling the objects needed to execute scenarios."""

    runner: ScenarioRunner
    storage: Storage | None
    owns_storage: bool = True

    def close(self) -> None:
        if self.owns_storage and self.storage is not None:
            self.storage.dispose()


def create_runner(
    config: AppConfig,
    *,
    output_root: Optional[Path] = None,
    storage: Storage | None = None,
) -> RunnerResources:
    """Build a :class:`ScenarioRunner`; the run registry is opened unless disabled."""

    root = Path(output_root) if output_root is not None else config.output_root
    owns_storage = storage is None
    storage_instance = storage
    if storage_instance is None:
        url = config.registry_url(root)
        if url:
            storage_instance = create_storage(url, echo=config.storage.echo_sql)
        else:
            LOGGER.info("Run registry disabled")
    runner = ScenarioRunner(output_root=root, storage=storage_instance)
    return RunnerResources(runner=runner, storage=storage_instance, owns_storage=owns_storage)


__all__ = ["RunnerResources", "create_runner"]
