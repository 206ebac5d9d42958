"""Application configuration helpers for hssim."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
import types
from typing import Any, Dict, Literal, Optional, Type, TypeVar, Union, get_args, get_origin, get_type_hints


_DEFAULT_CONFIG_LOCATIONS = (
    Path("hssim.json"),
    Path.home() / ".config" / "hssim" / "config.json",
)

ENV_PREFIX = "HSSIM_"


class ConfigFieldError(ValueError):
    """A configuration value that cannot be converted; ``path`` is dotted (``control.cfl``)."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


@dataclass(slots=True)
class OutputConfig:
    """Where run directories are created."""

    root: str = "hssim-output"


@dataclass(slots=True)
class StorageConfig:
    """Run registry database. ``None`` means ``<output root>/runs.db``, ``""`` disables it."""

    database_url: Optional[str] = None
    echo_sql: bool = False


@dataclass(slots=True)
class LoggingConfig:
    level: str = "INFO"


@dataclass(slots=True)
class AppConfig:
    """High level application configuration."""

    output: OutputConfig
    storage: StorageConfig
    logging: LoggingConfig

    @property
    def output_root(self) -> Path:
        return Path(self.output.root)

    def registry_url(self, output_root: Optional[Path] = None) -> Optional[str]:
        """Database URL of the run registry, ``None`` when it is disabled."""

        url = self.storage.database_url
        if url is None:
            root = Path(output_root) if output_root is not None else self.output_root
            return f"sqlite:///{root / 'runs.db'}"
        return url or None


def _load_from_env(prefix: str) -> Dict[str, Any]:
    """Load configuration entries for ``prefix`` from the environment."""

    data: Dict[str, Any] = {}
    for key, value in os.environ.items():
        if key.startswith(prefix):
            data[key.removeprefix(prefix).lower()] = value
    return data


def _merge_dict(target: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    merged = target.copy()
    merged.update({k: v for k, v in updates.items() if v is not None})
    return merged


def _load_config_file(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    with path.open("r", encoding="utf8") as fh:
        return json.load(fh)


T = TypeVar("T")


def _coerce_value(value: Any, annotation: Any, path: str = "") -> Any:
    """Best-effort conversion of ``value`` to match ``annotation``."""

    if value is None:
        return None

    origin = get_origin(annotation)
    if origin in (Union, types.UnionType):
        args = [arg for arg in get_args(annotation) if arg is not type(None)]  # noqa: E721 - allow Optional
        if not args:
            return None
        last_error: Exception | None = None
        for candidate in args:
            try:
                return _coerce_value(value, candidate, path)
            except (TypeError, ValueError) as exc:
                last_error = exc
        raise ConfigFieldError(path, f"cannot convert {value!r} to {annotation}") from last_error

    if origin is Literal:
        allowed = get_args(annotation)
        if value not in allowed:
            raise ConfigFieldError(path, f"expected one of {', '.join(map(repr, allowed))}, got {value!r}")
        return value

    if origin in (tuple, list):
        if isinstance(value, (str, bytes)) or not isinstance(value, (list, tuple)):
            raise ConfigFieldError(path, f"expected a list, got {value!r}")
        args = get_args(annotation)
        item_type = args[0] if args else Any
        items = [_coerce_value(item, item_type, f"{path}[{index}]") for index, item in enumerate(value)]
        return tuple(items) if origin is tuple else items

    target_type = origin or annotation

    if target_type in {Any, object}:
        return value

    if dataclasses.is_dataclass(target_type):
        if isinstance(value, target_type):
            return value
        if not isinstance(value, dict):
            raise ConfigFieldError(path, f"expected an object, got {value!r}")
        return _dataclass_from_dict(target_type, value, path=path, strict=True)

    if target_type is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            normalized = value.strip().lower()
            if normalized in {"true", "1", "yes", "y", "on"}:
                return True
            if normalized in {"false", "0", "no", "n", "off"}:
                return False
        if isinstance(value, (int, float)):
            return bool(value)
        raise ConfigFieldError(path, f"cannot convert {value!r} to bool")

    if target_type is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, (float, str)):
            number = float(value)
            if not number.is_integer():
                raise ConfigFieldError(path, f"expected an integer, got {value!r}")
            return int(number)
        raise ConfigFieldError(path, f"cannot convert {value!r} to int")

    if target_type is float:
        if isinstance(value, bool):
            raise ConfigFieldError(path, f"cannot convert {value!r} to float")
        if isinstance(value, (int, float, str)):
            try:
                return float(value)
            except ValueError as exc:
                raise ConfigFieldError(path, f"cannot convert {value!r} to float") from exc
        raise ConfigFieldError(path, f"cannot convert {value!r} to float")

    if target_type is str:
        if isinstance(value, str):
            return value
        return str(value)

    return value


def _dataclass_from_dict(cls: Type[T], data: Dict[str, Any], *, path: str = "", strict: bool = False) -> T:
    """Create dataclass ``cls`` while coercing ``data`` to the proper types.

    With ``strict`` unknown keys are rejected. Validation errors raised by the
    dataclass itself are reported against ``path``.
    """

    kwargs: Dict[str, Any] = {}
    type_hints = get_type_hints(cls)
    known = {field.name for field in fields(cls) if field.init}
    if strict:
        unknown = sorted(set(data) - known)
        if unknown:
            where = f"{path}.{unknown[0]}" if path else unknown[0]
            raise ConfigFieldError(where, "unknown field")
    for field in fields(cls):
        if not field.init or field.name not in data:
            continue
        field_path = f"{path}.{field.name}" if path else field.name
        annotation = type_hints.get(field.name, field.type)
        try:
            kwargs[field.name] = _coerce_value(data[field.name], annotation, field_path)
        except ConfigFieldError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigFieldError(field_path, f"invalid value {data[field.name]!r} ({exc})") from exc
    try:
        return cls(**kwargs)
    except ConfigFieldError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigFieldError(path or cls.__name__, str(exc)) from exc


def load_config(explicit_path: Optional[Path] = None) -> AppConfig:
    """Create the application configuration.

    Defaults, the optional JSON file and ``HSSIM_SECTION_FIELD`` environment
    variables (e.g. ``HSSIM_OUTPUT_ROOT``, ``HSSIM_LOGGING_LEVEL``) are merged in
    that order.
    """

    base = {
        "output": asdict(OutputConfig()),
        "storage": asdict(StorageConfig()),
        "logging": asdict(LoggingConfig()),
    }

    file_data: Dict[str, Any] = {}
    if explicit_path:
        file_data = _load_config_file(explicit_path)
    else:
        for candidate in _DEFAULT_CONFIG_LOCATIONS:
            file_data = _load_config_file(candidate)
            if file_data:
                break

    sections = {name: _merge_dict(base[name], file_data.get(name, {}) or {}) for name in base}
    for name in sections:
        sections[name] = _merge_dict(sections[name], _load_from_env(f"{ENV_PREFIX}{name.upper()}_"))

    return AppConfig(
        output=_dataclass_from_dict(OutputConfig, sections["output"], path="output"),
        storage=_dataclass_from_dict(StorageConfig, sections["storage"], path="storage"),
        logging=_dataclass_from_dict(LoggingConfig, sections["logging"], path="logging"),
    )


__all__ = [
    "AppConfig",
    "ConfigFieldError",
    "LoggingConfig",
    "OutputConfig",
    "StorageConfig",
    "load_config",
]
