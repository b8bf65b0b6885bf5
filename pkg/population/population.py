from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from core.logger import logger
from core.types import PopulationError

from .columns import numeric_column
from .distances import DistanceComponent, build_distances


@dataclass(frozen=True, slots=True)
class Population:
    """风险因素表加可选的 n×n×d 距离数组。构造后不可变。"""

    risks: pd.DataFrame
    distances: np.ndarray | None = None
    validation_notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.risks)
        if n < 1:
            raise PopulationError("population needs at least one individual")
        if self.distances is not None:
            if self.distances.ndim != 3 or self.distances.shape[:2] != (n, n):
                raise PopulationError(
                    f"distances must have shape ({n}, {n}, d), got {self.distances.shape}"
                )
            if self.distances.shape[2] < 1:
                raise PopulationError("distances need at least one component")
            self.distances.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.risks)

    @property
    def components(self) -> int:
        return 0 if self.distances is None else int(self.distances.shape[2])

    def covariate(self, name: str) -> np.ndarray:
        if name not in self.risks.columns:
            raise PopulationError(f"unknown covariate column {name!r}")
        return self.risks[name].to_numpy(dtype=float)

    def distance_array(self, component: int) -> np.ndarray:
        """返回第 component 个（从 1 开始）分量的 n×n 数组。"""
        if self.distances is None:
            raise PopulationError("population has no distances")
        if not 1 <= component <= self.components:
            raise PopulationError(
                f"distance component {component} out of range 1..{self.components}"
            )
        return self.distances[:, :, component - 1]


def distance(pop: Population, i: int, k: int, component: int) -> float:
    """个体编号与分量编号均从 1 开始。"""
    if pop.distances is None:
        raise PopulationError("population has no distances")
    for label, value in (("i", i), ("k", k)):
        if not 1 <= value <= pop.n:
            raise PopulationError(f"individual {label}={value} out of range 1..{pop.n}")
    return float(pop.distance_array(component)[i - 1, k - 1])


def load_population(
    risk_file_path: str | Path,
    distance_spec: Sequence[DistanceComponent] = (),
    required_columns: Iterable[str] | None = None,
) -> Population:
    path = Path(risk_file_path)
    if not path.is_file():
        raise PopulationError("risk file not found", path=str(path))
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise PopulationError(f"cannot parse risk CSV: {exc}", path=str(path)) from exc
    frame.columns = [str(column).strip() for column in frame.columns]

    referenced = list(required_columns or ())
    for component in distance_spec:
        referenced.extend(component.referenced_columns())
    for column in dict.fromkeys(referenced):
        if column not in frame.columns:
            raise PopulationError("missing column", path=str(path), column=column)
    for column in frame.columns:
        frame[column] = numeric_column(frame[column], path, column)

    distances = build_distances(distance_spec, frame)
    notes = _validation_notes(distances)
    for note in notes:
        logger.warning(f"人群数据提示: {note}")
    population = Population(risks=frame, distances=distances, validation_notes=tuple(notes))
    logger.debug(f"已加载人群 {path}: n={population.n}, 距离分量={population.components}")
    return population


def _validation_notes(distances: np.ndarray | None) -> list[str]:
    if distances is None:
        return []
    notes = []
    for index in range(distances.shape[2]):
        layer = distances[:, :, index]
        if not np.array_equal(layer, layer.T):
            notes.append(f"distance component {index + 1} is asymmetric")
    return notes
