from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
import pandas as pd

from core.models import DistanceComponentSpec
from core.types import ConfigError, PopulationError

from .columns import numeric_column


@dataclass(frozen=True, slots=True)
class EuclideanDistance:
    columns: tuple[str, ...]
    same_location: float | None = None

    def referenced_columns(self) -> tuple[str, ...]:
        return self.columns

    def build(self, risks: pd.DataFrame) -> np.ndarray:
        coords = risks.loc[:, list(self.columns)].to_numpy(dtype=float)
        diff = coords[:, None, :] - coords[None, :, :]
        matrix = np.sqrt(np.sum(diff * diff, axis=-1))
        if self.same_location is not None:
            off_diagonal = ~np.eye(len(coords), dtype=bool)
            matrix[(matrix == 0.0) & off_diagonal] = self.same_location
        return matrix


@dataclass(frozen=True, slots=True)
class IndicatorDistance:
    """同值指示矩阵：两个体该列取值相同时为 1，对角线为 0。"""

    column: str

    def referenced_columns(self) -> tuple[str, ...]:
        return (self.column,)

    def build(self, risks: pd.DataFrame) -> np.ndarray:
        values = risks[self.column].to_numpy(dtype=float)
        matrix = (values[:, None] == values[None, :]).astype(float)
        np.fill_diagonal(matrix, 0.0)
        return matrix


@dataclass(frozen=True, slots=True)
class MatrixFileDistance:
    path: str

    def referenced_columns(self) -> tuple[str, ...]:
        return ()

    def build(self, risks: pd.DataFrame) -> np.ndarray:
        return read_matrix_file(self.path, expected=len(risks))


DistanceComponent = Union[EuclideanDistance, IndicatorDistance, MatrixFileDistance]
DistanceSpec = tuple[DistanceComponent, ...]

_SHORTHAND = re.compile(r"^\s*(euclidean|matrix_file|indicator)\s*\((.*)\)\s*$")


def parse_distance_component(text: str) -> DistanceComponent:
    """解析 `euclidean(x, y)` / `matrix_file(path)` / `indicator(col)` 简写。"""
    match = _SHORTHAND.match(text)
    if not match:
        raise ConfigError(f"unrecognised distance spec: {text!r}")
    kind, body = match.group(1), match.group(2)
    args = [part.strip() for part in body.split(",") if part.strip()]
    if kind == "euclidean":
        if not args:
            raise ConfigError(f"euclidean distance needs columns: {text!r}")
        same_location = None
        columns = []
        for arg in args:
            if arg.startswith("same_location="):
                same_location = float(arg.split("=", 1)[1])
            else:
                columns.append(arg)
        return EuclideanDistance(tuple(columns), same_location)
    if len(args) != 1:
        raise ConfigError(f"{kind} distance takes exactly one argument: {text!r}")
    if kind == "indicator":
        return IndicatorDistance(args[0])
    return MatrixFileDistance(args[0])


def distance_spec_from_config(items: Iterable[DistanceComponentSpec | str]) -> DistanceSpec:
    components: list[DistanceComponent] = []
    for item in items:
        if isinstance(item, str):
            if item.strip().lower() == "none":
                continue
            components.append(parse_distance_component(item))
        elif item.kind == "euclidean":
            components.append(EuclideanDistance(tuple(item.columns), item.same_location))
        elif item.kind == "indicator":
            components.append(IndicatorDistance(item.column or ""))
        else:
            components.append(MatrixFileDistance(item.path or ""))
    return tuple(components)


def read_matrix_file(path: str | Path, *, expected: int) -> np.ndarray:
    """读取 n×n 数值 CSV，接受 inf；逐格报告位置。"""
    matrix_path = Path(path)
    if not matrix_path.is_file():
        raise PopulationError("distance matrix file not found", path=str(matrix_path))
    try:
        frame = pd.read_csv(matrix_path, header=None, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise PopulationError(f"ragged or unreadable matrix: {exc}", path=str(matrix_path)) from exc
    frame = frame.fillna("")
    missing = frame.apply(lambda column: column.str.strip() == "").to_numpy()
    if missing.any():
        row, column = np.argwhere(missing)[0]
        raise PopulationError(
            f"ragged matrix: expected {frame.shape[1]} fields",
            path=str(matrix_path),
            row=int(row) + 1,
            column=str(int(column) + 1),
        )
    for position in frame.columns:
        frame[position] = numeric_column(
            frame[position],
            matrix_path,
            str(int(position) + 1),
            allow_inf=True,
            allow_negative=False,
        )
    matrix = frame.to_numpy(dtype=float)
    if matrix.shape != (expected, expected):
        raise PopulationError(
            f"matrix has shape {matrix.shape}, population needs ({expected}, {expected})",
            path=str(matrix_path),
        )
    return matrix


def build_distances(spec: Sequence[DistanceComponent], risks: pd.DataFrame) -> np.ndarray | None:
    if not spec:
        return None
    layers = [component.build(risks) for component in spec]
    return np.stack(layers, axis=-1)
