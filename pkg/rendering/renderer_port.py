from __future__ import annotations

from typing import Protocol


class RendererPort(Protocol):
    def render(self, template_name: str, context: dict) -> str: ...
