"""TN-ILM 引擎核心模块"""

from .logger import logger
from .types import (
    DiseaseState,
    EventKind,
    Extent,
    ModelClass,
    TnilmError,
    Transition,
    exit_code_for,
)

__all__ = [
    "logger",
    "DiseaseState",
    "EventKind",
    "Extent",
    "ModelClass",
    "TnilmError",
    "Transition",
    "exit_code_for",
]
