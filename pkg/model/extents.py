from __future__ import annotations

import math
from dataclasses import dataclass

from core.models import ExtentsSection
from core.types import ConfigError, EventKind, Extent, ModelClass


def as_extent(value: float | tuple[float, float] | list[float] | Extent | None, name: str) -> Extent | None:
    """标量简写 hi 展开为 (0, hi)。"""
    if value is None:
        return None
    if isinstance(value, (int, float)):
        lo, hi = 0.0, float(value)
    else:
        items = list(value)
        if len(items) != 2:
            raise ConfigError(f"{name} extent must be a number or a (lo, hi) pair")
        lo, hi = float(items[0]), float(items[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or not 0 <= lo < hi:
        raise ConfigError(f"{name} extent needs 0 <= lo < hi, got ({lo:g}, {hi:g})")
    return Extent(lo, hi)


@dataclass(frozen=True, slots=True)
class EventExtents:
    """观测延迟与潜伏期的均匀先验边界。exposure 为感染时刻减暴露时刻的范围。"""

    exposure: Extent | None = None
    infection: Extent | None = None
    removal: Extent | None = None

    @classmethod
    def build(
        cls,
        exposure: float | tuple[float, float] | None = None,
        infection: float | tuple[float, float] | None = None,
        removal: float | tuple[float, float] | None = None,
    ) -> "EventExtents":
        return cls(
            as_extent(exposure, "exposure"),
            as_extent(infection, "infection"),
            as_extent(removal, "removal"),
        )

    @classmethod
    def from_config(cls, section: ExtentsSection) -> "EventExtents":
        return cls.build(section.exposure, section.infection, section.removal)

    def for_kind(self, kind: EventKind) -> Extent | None:
        if kind is EventKind.EXPOSURE:
            return self.exposure
        if kind is EventKind.INFECTION:
            return self.infection
        return self.removal

    def problems(self, model_class: ModelClass) -> list[str]:
        problems = []
        if model_class.has_exposed and self.exposure is None:
            problems.append("missing extent: exposure")
        if not model_class.has_exposed and self.exposure is not None:
            problems.append("extra extent: exposure")
        if self.infection is None:
            problems.append("missing extent: infection")
        if model_class.has_removed and self.removal is None:
            problems.append("missing extent: removal")
        if not model_class.has_removed and self.removal is not None:
            problems.append("extra extent: removal")
        return problems
