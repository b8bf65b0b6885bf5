"""内置纯函数注册表。每个实现返回 (结果, 非法位置掩码)。"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np

Result = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, slots=True)
class FunctionSpec:
    name: str
    min_args: int
    max_args: int | None
    apply: Callable[..., Result]

    def accepts(self, count: int) -> bool:
        if count < self.min_args:
            return False
        return self.max_args is None or count <= self.max_args

    def describe_arity(self) -> str:
        if self.max_args is None:
            return f"at least {self.min_args}"
        if self.max_args == self.min_args:
            return str(self.min_args)
        return f"{self.min_args}..{self.max_args}"


def _no_mask(value: np.ndarray) -> np.ndarray:
    return np.zeros(np.shape(value), dtype=bool)


def _exp(x: np.ndarray) -> Result:
    value = np.exp(x)
    return value, _no_mask(value)


def _log(x: np.ndarray) -> Result:
    return np.log(x), np.asarray(x <= 0)


def _sqrt(x: np.ndarray) -> Result:
    return np.sqrt(x), np.asarray(x < 0)


def _abs(x: np.ndarray) -> Result:
    value = np.abs(x)
    return value, _no_mask(value)


def _min(*args: np.ndarray) -> Result:
    value = reduce(np.minimum, args)
    return value, _no_mask(value)


def _max(*args: np.ndarray) -> Result:
    value = reduce(np.maximum, args)
    return value, _no_mask(value)


FUNCTIONS: dict[str, FunctionSpec] = {
    "exp": FunctionSpec("exp", 1, 1, _exp),
    "log": FunctionSpec("log", 1, 1, _log),
    "sqrt": FunctionSpec("sqrt", 1, 1, _sqrt),
    "abs": FunctionSpec("abs", 1, 1, _abs),
    "min": FunctionSpec("min", 2, None, _min),
    "max": FunctionSpec("max", 2, None, _max),
}
