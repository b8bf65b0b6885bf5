from __future__ import annotations

from pathlib import Path

import pandas as pd

from core.types import ModelClass, ObservationError

from .records import EventObservations, Events, TransmissionNetwork


def _ensure_parent(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_events_csv(events: Events, path: str | Path) -> Path:
    target = _ensure_parent(Path(path))
    events.to_frame().to_csv(target, index=False)
    return target


def read_events_csv(model_class: ModelClass, path: str | Path) -> Events:
    return Events.from_frame(model_class, pd.read_csv(path))


def write_network_csv(network: TransmissionNetwork, path: str | Path) -> Path:
    target = _ensure_parent(Path(path))
    network.to_frame().to_csv(target, index=False)
    return target


def read_network_csv(path: str | Path, n: int) -> TransmissionNetwork:
    return TransmissionNetwork.from_frame(pd.read_csv(path, dtype={"source": str}), n)


def write_observations_csv(observations: EventObservations, path: str | Path) -> Path:
    target = _ensure_parent(Path(path))
    observations.to_frame().to_csv(target, index=False)
    return target


def read_observations_csv(model_class: ModelClass, path: str | Path) -> EventObservations:
    source = Path(path)
    if not source.is_file():
        raise ObservationError(f"observations file not found: {source}")
    try:
        frame = pd.read_csv(source)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ObservationError(f"cannot parse observations {source}: {exc}") from exc
    return EventObservations.from_frame(model_class, frame)


def write_frame_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    target = _ensure_parent(Path(path))
    frame.to_csv(target, index=False)
    return target
