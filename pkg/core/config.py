from __future__ import annotations

import json
import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from .models import DistanceComponentSpec, RunConfig
from .types import ConfigError

WORKERS_ENV = "TNILM_WORKERS"


def load_run_config(path: str | Path) -> RunConfig:
    """读取 TOML / JSON 运行配置；数据文件路径相对配置文件所在目录解析。"""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    raw = _read_raw(config_path)
    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"invalid config {config_path}: {_format_validation(exc)}") from exc
    return _resolve_paths(config, config_path.resolve().parent)


def _read_raw(path: Path) -> dict[str, Any]:
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a table: {path}")
    return data


def _format_validation(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ()))
        parts.append(f"{location}: {error.get('msg', '')}")
    return "; ".join(parts)


def _resolve(base: Path, value: str | None) -> str | None:
    if value is None:
        return None
    candidate = Path(value).expanduser()
    if not candidate.is_absolute():
        candidate = base / candidate
    return str(candidate)


def _resolve_paths(config: RunConfig, base: Path) -> RunConfig:
    population = config.population
    distances: list[DistanceComponentSpec | str] = []
    for item in population.distances:
        if isinstance(item, DistanceComponentSpec) and item.kind == "matrix_file":
            item = item.model_copy(update={"path": _resolve(base, item.path)})
        distances.append(item)
    updates: dict[str, Any] = {
        "population": population.model_copy(
            update={"risks": _resolve(base, population.risks), "distances": distances}
        )
    }
    if config.fit is not None and config.fit.observations:
        updates["fit"] = config.fit.model_copy(
            update={"observations": _resolve(base, config.fit.observations)}
        )
    return config.model_copy(update=updates)


def apply_overrides(
    config: RunConfig,
    *,
    seed: Any = None,
    iterations: Any = None,
    output_dir: str | None = None,
    chains: Any = None,
    replicates: Any = None,
    tmax: Any = None,
    spill: Any = None,
) -> RunConfig:
    """命令行覆盖项；非法值回退到配置中的原值。"""
    updates: dict[str, Any] = {}
    if seed is not None:
        updates["seed"] = safe_int(seed, config.seed, min_value=0)
    if output_dir:
        updates["output"] = config.output.model_copy(update={"directory": output_dir})
    if config.fit is not None and (iterations is not None or chains is not None or spill is not None):
        updates["fit"] = config.fit.model_copy(
            update={
                "iterations": safe_int(iterations, config.fit.iterations, min_value=0),
                "chains": safe_int(chains, config.fit.chains, min_value=1, max_value=64),
                "spill": safe_bool(spill, config.fit.spill),
            }
        )
    if config.simulate is not None and (replicates is not None or tmax is not None):
        current = config.simulate
        updates["simulate"] = current.model_copy(
            update={
                "replicates": safe_int(replicates, current.replicates, min_value=1, max_value=100000),
                "tmax": _tmax(tmax, current.tmax),
            }
        )
    return config.model_copy(update=updates)


def _tmax(raw: Any, current: float | None) -> float | None:
    if raw is None:
        return current
    value = safe_float(raw, math.inf if current is None else current, min_value=0.0)
    return None if math.isinf(value) else value


def worker_count(raw: Any = None) -> int:
    if raw is None:
        raw = os.environ.get(WORKERS_ENV)
    return safe_int(raw, os.cpu_count() or 1, min_value=1, max_value=256)


def safe_int(
    value: Any,
    default: int,
    *,
    min_value: int | None = None,
    max_value: int | None = None,
) -> int:
    try:
        if value is None or value == "":
            result = int(default)
        else:
            result = int(value)
    except (TypeError, ValueError):
        result = int(default)
    return _clamp(result, min_value, max_value)


def safe_float(
    value: Any,
    default: float,
    *,
    min_value: float | None = None,
    max_value: float | None = None,
) -> float:
    try:
        if value is None or value == "":
            result = float(default)
        else:
            result = float(value)
    except (TypeError, ValueError):
        result = float(default)
    return _clamp(result, min_value, max_value)


def safe_bool(value: Any, default: bool) -> bool:
    if isinstance(value, bool):
        return value
    if value is None or value == "":
        return default
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "on"}:
        return True
    if text in {"0", "false", "no", "off"}:
        return False
    return default


def _clamp(value, min_value=None, max_value=None):
    if min_value is not None:
        value = max(min_value, value)
    if max_value is not None:
        value = min(max_value, value)
    return value
