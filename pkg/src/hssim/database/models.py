"""SQLAlchemy models for the run registry."""
from __future__ import annotations

from datetime import datetime
from typing import Optional

from sqlalchemy import DateTime, Float, Integer, String, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    """Declarative SQLAlchemy base class."""


class RunRecord(Base):
    """One executed scenario or sweep cell."""

    __tablename__ = "runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    name: Mapped[str] = mapped_column(String(256), index=True)
    sweep: Mapped[Optional[str]] = mapped_column(String(256), nullable=True, index=True)
    alpha: Mapped[float] = mapped_column(Float)
    kappa: Mapped[float] = mapped_column(Float)
    n: Mapped[int] = mapped_column(Integer)
    status: Mapped[str] = mapped_column(String(32))
    t_final: Mapped[float] = mapped_column(Float)
    blowup_time: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    blowup_rate: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    a_drift: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    min_slope: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    output_dir: Mapped[Optional[str]] = mapped_column(String(1024), nullable=True)
    created_at: Mapped[datetime] = mapped_column(DateTime, server_default=func.now())


__all__ = ["Base", "RunRecord"]
