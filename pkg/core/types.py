"""核心类型定义"""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple


class DiseaseState(str, Enum):
    S = "S"
    E = "E"
    I = "I"  # noqa: E741
    R = "R"

    @property
    def code(self) -> int:
        return _STATE_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "DiseaseState":
        return _STATES_BY_CODE[int(code)]

    @classmethod
    def parse(cls, value: "str | DiseaseState") -> "DiseaseState":
        if isinstance(value, DiseaseState):
            return value
        text = str(value).strip().upper()
        try:
            return cls(text)
        except ValueError as exc:
            raise ConfigError(f"unknown disease state: {value!r}") from exc


_STATE_CODES = {DiseaseState.S: 0, DiseaseState.E: 1, DiseaseState.I: 2, DiseaseState.R: 3}
_STATES_BY_CODE = {code: state for state, code in _STATE_CODES.items()}


class EventKind(str, Enum):
    EXPOSURE = "exposure"
    INFECTION = "infection"
    REMOVAL = "removal"

    @property
    def priority(self) -> int:
        """同时刻事件的排序优先级：E < I < R。"""
        return _KIND_PRIORITY[self]


_KIND_PRIORITY = {EventKind.EXPOSURE: 0, EventKind.INFECTION: 1, EventKind.REMOVAL: 2}


class ModelClass(str, Enum):
    SEIR = "SEIR"
    SEI = "SEI"
    SIR = "SIR"
    SI = "SI"

    @property
    def has_exposed(self) -> bool:
        return "E" in self.value

    @property
    def has_removed(self) -> bool:
        return "R" in self.value

    @property
    def states(self) -> tuple[DiseaseState, ...]:
        return tuple(DiseaseState(letter) for letter in self.value)

    @property
    def event_kinds(self) -> tuple[EventKind, ...]:
        kinds = []
        if self.has_exposed:
            kinds.append(EventKind.EXPOSURE)
        kinds.append(EventKind.INFECTION)
        if self.has_removed:
            kinds.append(EventKind.REMOVAL)
        return tuple(kinds)

    @property
    def acquisition_kind(self) -> EventKind:
        """离开 S 的事件类型。"""
        return EventKind.EXPOSURE if self.has_exposed else EventKind.INFECTION

    def next_state(self, state: DiseaseState) -> DiseaseState | None:
        chain = self.states
        index = chain.index(state) if state in chain else -1
        if index < 0 or index + 1 >= len(chain):
            return None
        return chain[index + 1]

    def kind_for(self, new_state: DiseaseState) -> EventKind:
        if new_state is DiseaseState.E:
            return EventKind.EXPOSURE
        if new_state is DiseaseState.I:
            return EventKind.INFECTION
        if new_state is DiseaseState.R:
            return EventKind.REMOVAL
        raise IllegalTransitionError(f"{self.value} has no transition into {new_state.value}")

    @classmethod
    def parse(cls, value: "str | ModelClass") -> "ModelClass":
        if isinstance(value, ModelClass):
            return value
        text = str(value).strip().upper()
        try:
            return cls(text)
        except ValueError as exc:
            raise ConfigError(
                f"unknown model class: {value!r} (expected SEIR, SEI, SIR or SI)"
            ) from exc


class Transition(NamedTuple):
    """引擎内部事件：individual 为从 0 开始的数组下标。"""

    individual: int
    new_state: DiseaseState


class Extent(NamedTuple):
    lo: float
    hi: float


class TnilmError(Exception):
    """引擎异常基类"""


class ConfigError(TnilmError):
    pass


class PopulationError(TnilmError):
    def __init__(self, message: str, *, path: str | None = None, row: int | None = None, column: str | None = None):
        self.path = path
        self.row = row
        self.column = column
        location = []
        if path:
            location.append(str(path))
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")


class RiskExpressionError(TnilmError):
    def __init__(self, message: str, *, offset: int | None = None, text: str | None = None):
        self.offset = offset
        self.text = text
        suffix = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{suffix}")


class RiskEvaluationError(TnilmError):
    pass


class ModelValidationError(TnilmError):
    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) or "model validation failed")


class IllegalTransitionError(TnilmError):
    pass


class IncompatibleNetworkError(TnilmError):
    pass


class InitializationError(TnilmError):
    pass


class ObservationError(TnilmError):
    pass


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_CONFIG_ERRORS = (ConfigError, PopulationError, RiskExpressionError, ModelValidationError)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, _CONFIG_ERRORS):
        return EXIT_CONFIG
    return EXIT_RUNTIME
