"""Scenario and sweep documents."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
import json
import math
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from ..core.sampling import InitialDataDescriptor, make_grid, sample
from ..core.types import PeriodicGrid, SimState, SystemParams
from ..evolution import StepControl
from .settings import ConfigFieldError, _dataclass_from_dict

ObserverKind = Literal["conservation", "sobolev", "characteristics", "origin_slope"]
OBSERVER_KINDS: tuple[str, ...] = ("conservation", "sobolev", "characteristics", "origin_slope")


class ScenarioConfigError(ValueError):
    """An invalid scenario or sweep document.

    ``path`` names the offending field (``control.cfl``); ``line`` and
    ``column`` are set for JSON syntax errors.
    """

    def __init__(
        self,
        message: str,
        *,
        path: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ) -> None:
        location = ""
        if source:
            location = source
            if line is not None:
                location += f":{line}:{column or 0}"
            location += ": "
        detail = f"{path}: {message}" if path else message
        super().__init__(location + detail)
        self.path = path
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True, slots=True)
class ObserverSpec:
    """One observer attached to a run.

    ``sobolev`` reads ``orders``; ``characteristics`` reads ``seeds`` (``None``
    seeds the grid nodes) and ``every`` for history thinning.
    """

    kind: ObserverKind
    orders: tuple[float, ...] = ()
    seeds: Optional[int] = None
    every: int = 1

    def __post_init__(self) -> None:
        if self.kind not in OBSERVER_KINDS:
            raise ValueError(f"unknown observer {self.kind!r}; expected one of {', '.join(OBSERVER_KINDS)}")
        if self.kind == "sobolev" and not self.orders:
            raise ValueError("sobolev observer needs at least one order")
        if self.seeds is not None and self.seeds < 1:
            raise ValueError(f"seeds must be positive, got {self.seeds}")
        if self.every < 1:
            raise ValueError(f"every must be at least 1, got {self.every}")


@dataclass(frozen=True, slots=True)
class ScenarioConfig:
    """Everything needed to reproduce one simulation."""

    name: str
    alpha: float
    kappa: float
    n: int
    u0: InitialDataDescriptor
    rho0: InitialDataDescriptor
    horizon: float
    dealias: bool = True
    gauge_constant: float = 0.0
    control: StepControl = field(default_factory=StepControl)
    observers: tuple[ObserverSpec, ...] = (ObserverSpec("conservation"),)
    snapshot_times: tuple[float, ...] = ()
    output_dir: Optional[str] = None
    description: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("name must not be empty")
        PeriodicGrid(self.n)
        if not (math.isfinite(self.horizon) and self.horizon > 0.0):
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        for t in self.snapshot_times:
            if not 0.0 <= t <= self.horizon:
                raise ValueError(f"snapshot time {t} lies outside [0, {self.horizon}]")
        kinds = [observer.kind for observer in self.observers]
        if len(kinds) != len(set(kinds)):
            raise ValueError("each observer kind may be listed once")

    @property
    def grid(self) -> PeriodicGrid:
        return make_grid(self.n)

    def params(self) -> SystemParams:
        if self.gauge_constant:
            drift = self.gauge_constant
            return SystemParams(self.alpha, self.kappa, gauge=lambda t: drift, dealias=self.dealias)
        return SystemParams(self.alpha, self.kappa, dealias=self.dealias)

    def initial_state(self) -> SimState:
        grid = self.grid
        return SimState(t=0.0, u=sample(self.u0, grid), rho=sample(self.rho0, grid))

    def observer(self, kind: ObserverKind) -> Optional[ObserverSpec]:
        for spec in self.observers:
            if spec.kind == kind:
                return spec
        return None

    def with_parameters(self, alpha: float, kappa: float) -> "ScenarioConfig":
        return replace(self, alpha=alpha, kappa=kappa, name=f"{self.name}-alpha{alpha:g}-kappa{kappa:g}")

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, slots=True)
class SweepConfig:
    """A scenario repeated over an ``(alpha, kappa)`` lattice."""

    base: ScenarioConfig
    alphas: tuple[float, ...]
    kappas: tuple[float, ...]
    parallelism: int = 1

    def __post_init__(self) -> None:
        if not self.alphas or not self.kappas:
            raise ValueError("sweep axes alphas and kappas must not be empty")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be at least 1, got {self.parallelism}")

    def cells(self) -> list[ScenarioConfig]:
        """Cells in row-major ``(alpha, kappa)`` order."""

        return [self.base.with_parameters(alpha, kappa) for alpha in self.alphas for kappa in self.kappas]


def _parse(cls: type, data: Any, source: Optional[str]) -> Any:
    if not isinstance(data, dict):
        raise ScenarioConfigError("document must be a JSON object", source=source)
    try:
        return _dataclass_from_dict(cls, data, strict=True)
    except ConfigFieldError as exc:
        raise ScenarioConfigError(exc.message, path=exc.path, source=source) from exc


def parse_scenario(data: Dict[str, Any], *, source: Optional[str] = None) -> ScenarioConfig:
    return _parse(ScenarioConfig, data, source)


def parse_sweep(data: Dict[str, Any], *, source: Optional[str] = None) -> SweepConfig:
    return _parse(SweepConfig, data, source)


def _read_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf8")
    except OSError as exc:
        raise ScenarioConfigError(f"cannot read file ({exc.strerror or exc})", source=str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioConfigError(exc.msg, line=exc.lineno, column=exc.colno, source=str(path)) from exc


def load_scenario(path: Path) -> ScenarioConfig:
    """Read and validate a scenario JSON file."""

    return parse_scenario(_read_json(path), source=str(path))


def load_sweep(path: Path) -> SweepConfig:
    """Read and validate a sweep JSON file (``{"base": {...}, "alphas": [...], "kappas": [...]}``)."""

    return parse_sweep(_read_json(path), source=str(path))


__all__ = [
    "OBSERVER_KINDS",
    "ObserverKind",
    "ObserverSpec",
    "ScenarioConfig",
    "ScenarioConfigError",
    "SweepConfig",
    "load_scenario",
    "load_sweep",
    "parse_scenario",
    "parse_sweep",
]
