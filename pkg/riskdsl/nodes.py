"""风险表达式语法树。节点均为不可变值对象，可直接比较结构相等。"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union


class ExprContext(str, Enum):
    SINGLE = "single"
    PAIR = "pair"


@dataclass(frozen=True, slots=True)
class Number:
    value: float


@dataclass(frozen=True, slots=True)
class Param:
    index: int


@dataclass(frozen=True, slots=True)
class Covariate:
    column: str
    source: bool = False


@dataclass(frozen=True, slots=True)
class Dist:
    first: str
    second: str
    component: int


@dataclass(frozen=True, slots=True)
class Negate:
    operand: "Node"


@dataclass(frozen=True, slots=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple["Node", ...]


@dataclass(frozen=True, slots=True)
class Indicator:
    op: str
    left: "Node"
    right: "Node"


Node = Union[Number, Param, Covariate, Dist, Negate, Binary, Call, Indicator]


def walk(node: Node) -> Iterator[Node]:
    yield node
    if isinstance(node, Negate):
        yield from walk(node.operand)
    elif isinstance(node, (Binary, Indicator)):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Call):
        for arg in node.args:
            yield from walk(arg)


@dataclass(frozen=True, slots=True)
class RiskExpr:
    root: Node
    context: ExprContext
    text: str
    param_count: int

    def columns(self) -> tuple[str, ...]:
        seen = dict.fromkeys(node.column for node in walk(self.root) if isinstance(node, Covariate))
        return tuple(seen)

    def uses_distances(self) -> bool:
        return any(isinstance(node, Dist) for node in walk(self.root))

    def __str__(self) -> str:
        return self.text
