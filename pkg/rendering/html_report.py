from __future__ import annotations

import math
from pathlib import Path

import jinja2
import pandas as pd

from core.logger import logger

from .renderer_port import RendererPort

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "resources" / "templates"
REPORT_TEMPLATE = "run_report.html.jinja"
REPORT_FILE = "report.html"


def _number(value, digits: int = 4) -> str:
    try:
        value = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(value):
        return "–"
    if value != 0 and (abs(value) < 1e-3 or abs(value) >= 1e5):
        return f"{value:.{digits}e}"
    return f"{value:.{digits}f}"


class HtmlReportRenderer(RendererPort):
    def __init__(self, template_path: Path = TEMPLATE_DIR):
        self.template_path = Path(template_path)
        self._env = jinja2.Environment(
            loader=jinja2.FileSystemLoader(str(self.template_path)),
            autoescape=jinja2.select_autoescape(["html", "xml", "jinja"]),
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self._env.filters["number"] = _number

    def render(self, template_name: str, context: dict) -> str:
        template = self._env.get_template(template_name)
        return template.render(**context)


def report_context(
    manifest: dict,
    summary: pd.DataFrame | None = None,
    out_degree: pd.DataFrame | None = None,
    *,
    top: int = 10,
) -> dict:
    context = {
        "command": manifest.get("command", ""),
        "model_class": manifest.get("model_class", ""),
        "seed": manifest.get("seed"),
        "iterations": manifest.get("iterations"),
        "chains": manifest.get("chains", []),
        "settings": manifest.get("settings", {}),
        "files": manifest.get("files", []),
        "burnin": manifest.get("burnin"),
        "thin": manifest.get("thin"),
        "summary": [] if summary is None else summary.to_dict(orient="records"),
        "out_degree": [] if out_degree is None else out_degree.head(top).to_dict(orient="records"),
    }
    return context


def render_run_report(
    directory: str | Path,
    manifest: dict,
    summary: pd.DataFrame | None = None,
    out_degree: pd.DataFrame | None = None,
    *,
    renderer: RendererPort | None = None,
) -> Path:
    renderer = renderer or HtmlReportRenderer()
    html = renderer.render(REPORT_TEMPLATE, report_context(manifest, summary, out_degree))
    target = Path(directory) / REPORT_FILE
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(html, encoding="utf-8")
    logger.info(f"运行报告已写出: {target}")
    return target
