from .html_report import HtmlReportRenderer, render_run_report, report_context
from .renderer_port import RendererPort

__all__ = ["HtmlReportRenderer", "RendererPort", "render_run_report", "report_context"]
