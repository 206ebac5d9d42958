"""Persistence helpers built on SQLAlchemy."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
import math
from pathlib import Path
from typing import Iterator, Optional

from sqlalchemy import create_engine, select
from sqlalchemy.engine import Engine
from sqlalchemy.engine.url import make_url
from sqlalchemy.orm import Session, sessionmaker

from .models import Base, RunRecord


@dataclass(slots=True)
class RunOverview:
    """Lightweight representation of a registered run."""

    identifier: int
    name: str
    sweep: Optional[str]
    alpha: float
    kappa: float
    n: int
    status: str
    t_final: float
    blowup_time: Optional[float]
    blowup_rate: Optional[float]
    output_dir: Optional[str]
    created_at: Optional[datetime]


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


class Storage:
    """Wrapper around SQLAlchemy that records simulation runs."""

    def __init__(self, engine: Engine) -> None:
        self._engine = engine
        self._session_factory = sessionmaker(bind=engine, expire_on_commit=False)

    @contextmanager
    def session(self) -> Iterator[Session]:
        session = self._session_factory()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def ensure_schema(self) -> None:
        Base.metadata.create_all(self._engine)

    def record_run(
        self,
        *,
        name: str,
        alpha: float,
        kappa: float,
        n: int,
        status: str,
        t_final: float,
        blowup_time: Optional[float] = None,
        blowup_rate: Optional[float] = None,
        a_drift: Optional[float] = None,
        min_slope: Optional[float] = None,
        output_dir: Optional[str] = None,
        sweep: Optional[str] = None,
    ) -> int:
        """Insert one run and return its identifier."""

        with self.session() as session:
            record = RunRecord(
                name=name,
                sweep=sweep,
                alpha=alpha,
                kappa=kappa,
                n=n,
                status=status,
                t_final=t_final,
                blowup_time=_finite_or_none(blowup_time),
                blowup_rate=_finite_or_none(blowup_rate),
                a_drift=_finite_or_none(a_drift),
                min_slope=_finite_or_none(min_slope),
                output_dir=output_dir,
            )
            session.add(record)
            session.flush()
            return record.id

    def dispose(self) -> None:
        """Dispose the underlying SQLAlchemy engine."""

        self._engine.dispose()

    def list_runs(self, limit: int = 25, *, sweep: Optional[str] = None) -> list[RunOverview]:
        """Return the most recently recorded runs, newest first."""

        with self.session() as session:
            stmt = select(RunRecord)
            if sweep is not None:
                stmt = stmt.where(RunRecord.sweep == sweep)
            stmt = stmt.order_by(RunRecord.id.desc()).limit(limit)
            return [
                RunOverview(
                    identifier=record.id,
                    name=record.name,
                    sweep=record.sweep,
                    alpha=record.alpha,
                    kappa=record.kappa,
                    n=record.n,
                    status=record.status,
                    t_final=record.t_final,
                    blowup_time=record.blowup_time,
                    blowup_rate=record.blowup_rate,
                    output_dir=record.output_dir,
                    created_at=record.created_at,
                )
                for record in session.scalars(stmt)
            ]


def create_storage(database_url: str, *, echo: bool = False) -> Storage:
    url = make_url(database_url)
    if url.get_backend_name() == "sqlite" and url.database and url.database != ":memory:":
        Path(url.database).parent.mkdir(parents=True, exist_ok=True)
    engine = create_engine(database_url, echo=echo, future=True)
    storage = Storage(engine)
    storage.ensure_schema()
    return storage


__all__ = ["RunOverview", "Storage", "create_storage"]
