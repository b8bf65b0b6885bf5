"""流行病记录：真实事件时刻、传播网络和观测数据。"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.types import DiseaseState, EventKind, ModelClass, ObservationError

NO_SOURCE = -2
EXTERNAL = -1


def _empty_times(n: int) -> np.ndarray:
    return np.full(n, np.nan)


@dataclass(slots=True)
class Events:
    """每个个体的转移时刻；NaN 表示未发生，-inf 表示窗口开始前已发生。"""

    model_class: ModelClass
    exposure: np.ndarray | None
    infection: np.ndarray
    removal: np.ndarray | None

    @classmethod
    def empty(cls, model_class: ModelClass, n: int) -> "Events":
        return cls(
            model_class,
            _empty_times(n) if model_class.has_exposed else None,
            _empty_times(n),
            _empty_times(n) if model_class.has_removed else None,
        )

    @property
    def n(self) -> int:
        return len(self.infection)

    def times(self, kind: EventKind) -> np.ndarray:
        values = {
            EventKind.EXPOSURE: self.exposure,
            EventKind.INFECTION: self.infection,
            EventKind.REMOVAL: self.removal,
        }[kind]
        if values is None:
            raise KeyError(f"{self.model_class.value} has no {kind.value} times")
        return values

    def get(self, kind: EventKind, individual: int) -> float:
        if kind not in self.model_class.event_kinds:
            return math.nan
        return float(self.times(kind)[individual])

    def set(self, kind: EventKind, individual: int, time: float) -> None:
        self.times(kind)[individual] = time

    @property
    def acquisition(self) -> np.ndarray:
        """离开 S 的时刻。"""
        return self.exposure if self.model_class.has_exposed else self.infection

    def ever_infected(self) -> np.ndarray:
        return ~np.isnan(self.acquisition)

    def copy(self) -> "Events":
        return Events(
            self.model_class,
            None if self.exposure is None else self.exposure.copy(),
            self.infection.copy(),
            None if self.removal is None else self.removal.copy(),
        )

    def as_array(self) -> np.ndarray:
        """3×n 数组，缺失的槽位整行为 NaN。"""
        rows = [
            self.exposure if self.exposure is not None else _empty_times(self.n),
            self.infection,
            self.removal if self.removal is not None else _empty_times(self.n),
        ]
        return np.vstack(rows)

    @classmethod
    def from_array(cls, model_class: ModelClass, array: np.ndarray) -> "Events":
        array = np.asarray(array, dtype=float).reshape(3, -1)
        return cls(
            model_class,
            array[0].copy() if model_class.has_exposed else None,
            array[1].copy(),
            array[2].copy() if model_class.has_removed else None,
        )

    def problems(self) -> list[str]:
        """逐个体检查时刻沿类别链严格递增。"""
        problems = []
        chain = [self.times(kind) for kind in self.model_class.event_kinds]
        for individual in range(self.n):
            seen_absent = False
            previous = -math.inf
            for times in chain:
                value = times[individual]
                if np.isnan(value):
                    seen_absent = True
                    continue
                if seen_absent:
                    problems.append(f"individual {individual + 1}: later event without earlier one")
                    break
                if value != -math.inf and not value > previous:
                    problems.append(f"individual {individual + 1}: event times not increasing")
                    break
                previous = value
        return problems

    def to_frame(self) -> pd.DataFrame:
        data = {"individual": np.arange(1, self.n + 1)}
        for kind in self.model_class.event_kinds:
            data[kind.value] = self.times(kind)
        return pd.DataFrame(data)

    @classmethod
    def from_frame(cls, model_class: ModelClass, frame: pd.DataFrame) -> "Events":
        ordered = frame.sort_values("individual")
        events = cls.empty(model_class, len(ordered))
        for kind in model_class.event_kinds:
            if kind.value in ordered.columns:
                events.times(kind)[:] = ordered[kind.value].to_numpy(dtype=float)
        return events


@dataclass(slots=True)
class TransmissionNetwork:
    """sources[i]：EXTERNAL 为外部来源，NO_SOURCE 为未感染或窗口前已感染，否则为传染源下标。"""

    sources: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "TransmissionNetwork":
        return cls(np.full(n, NO_SOURCE, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.sources)

    @property
    def internal(self) -> np.ndarray:
        """internal[k, i] 为真表示 k 感染了 i。"""
        matrix = np.zeros((self.n, self.n), dtype=bool)
        infectees = np.flatnonzero(self.sources >= 0)
        matrix[self.sources[infectees], infectees] = True
        return matrix

    def source_of(self, individual: int) -> int:
        return int(self.sources[individual])

    def set_source(self, individual: int, source: int) -> None:
        self.sources[individual] = source

    def offspring(self, individual: int) -> np.ndarray:
        return np.flatnonzero(self.sources == individual)

    def copy(self) -> "TransmissionNetwork":
        return TransmissionNetwork(self.sources.copy())

    def to_frame(self) -> pd.DataFrame:
        infectees = np.flatnonzero(self.sources != NO_SOURCE)
        sources = [
            "external" if self.sources[i] == EXTERNAL else str(int(self.sources[i]) + 1)
            for i in infectees
        ]
        return pd.DataFrame({"infectee": infectees + 1, "source": sources})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, n: int) -> "TransmissionNetwork":
        network = cls.empty(n)
        for infectee, source in zip(frame["infectee"], frame["source"]):
            text = str(source).strip()
            network.set_source(int(infectee) - 1, EXTERNAL if text == "external" else int(text) - 1)
        return network


@dataclass(slots=True)
class EventObservations:
    """观测到的感染 / 移除时刻。-inf 表示窗口开始前已处于该状态。"""

    model_class: ModelClass
    infection: np.ndarray
    removal: np.ndarray | None
    initial_states: np.ndarray

    def __post_init__(self) -> None:
        if self.removal is not None:
            unmatched = ~np.isnan(self.removal) & np.isnan(self.infection)
            if unmatched.any():
                first = int(np.argmax(unmatched)) + 1
                raise ObservationError(f"individual {first}: removal observed without infection")

    @property
    def n(self) -> int:
        return len(self.infection)

    def to_frame(self) -> pd.DataFrame:
        data = {
            "individual": np.arange(1, self.n + 1),
            "infection": self.infection,
        }
        if self.removal is not None:
            data["removal"] = self.removal
        data["initial_state"] = [DiseaseState.from_code(code).value for code in self.initial_states]
        return pd.DataFrame(data)

    @classmethod
    def from_frame(cls, model_class: ModelClass, frame: pd.DataFrame) -> "EventObservations":
        if "individual" not in frame.columns or "infection" not in frame.columns:
            raise ObservationError("observations need individual and infection columns")
        ordered = frame.sort_values("individual").reset_index(drop=True)
        expected = np.arange(1, len(ordered) + 1)
        if not np.array_equal(ordered["individual"].to_numpy(dtype=int), expected):
            raise ObservationError("observation individuals must be 1..n without gaps")
        infection = ordered["infection"].to_numpy(dtype=float)
        removal = None
        if model_class.has_removed:
            removal = (
                ordered["removal"].to_numpy(dtype=float)
                if "removal" in ordered.columns
                else np.full(len(ordered), np.nan)
            )
        if "initial_state" in ordered.columns:
            initial = [DiseaseState.parse(value).code for value in ordered["initial_state"].fillna("S")]
        else:
            removed = removal if removal is not None else np.full(len(infection), np.nan)
            initial = [
                DiseaseState.R.code
                if removed[index] == -math.inf
                else DiseaseState.I.code
                if value == -math.inf
                else DiseaseState.S.code
                for index, value in enumerate(infection)
            ]
        return cls(model_class, infection, removal, np.asarray(initial, dtype=np.int8))
