from __future__ import annotations

import json
import platform
import time
from pathlib import Path
from typing import Any

import numpy as np

from core.models import RunConfig
from core.types import ConfigError, ModelClass

MANIFEST_FILE = "manifest.json"
RUN_INFO_FILE = "run_info.json"


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def new_manifest(command: str, config: RunConfig, **extra: Any) -> dict:
    manifest = {
        "command": command,
        "seed": config.seed,
        "model_class": ModelClass.parse(config.model.model_class).value,
        "python": platform.python_version(),
        "config": config.model_dump(mode="json", by_alias=True),
    }
    manifest.update(extra)
    return manifest


def write_manifest(directory: str | Path, manifest: dict) -> Path:
    target = Path(directory) / MANIFEST_FILE
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(_plain(manifest), ensure_ascii=False, indent=2), encoding="utf-8")
    return target


def write_run_info(directory: str | Path, command: str, **timing: Any) -> Path:
    """墙钟时间等每次运行都会变化的信息，单独写出，manifest.json 只含由配置与种子决定的内容。"""
    info = {"command": command, "created_at": int(time.time()), **timing}
    target = Path(directory) / RUN_INFO_FILE
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(_plain(info), ensure_ascii=False, indent=2), encoding="utf-8")
    return target


def read_manifest(run_dir: str | Path, command: str | None = None) -> dict:
    source = Path(run_dir) / MANIFEST_FILE
    if not source.is_file():
        raise ConfigError(f"no {MANIFEST_FILE} in {run_dir}")
    try:
        manifest = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from exc
    if command is not None and manifest.get("command") != command:
        raise ConfigError(f"{source} was written by {manifest.get('command')!r}, expected {command!r}")
    return manifest
