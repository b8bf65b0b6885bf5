from .context import ModelContext, load_model_context
from .exit_codes import guarded
from .fit_handler import build_run, cmd_fit
from .manifest import MANIFEST_FILE, RUN_INFO_FILE, new_manifest, read_manifest, write_manifest, write_run_info
from .simulate_handler import build_jobs, cmd_simulate
from .summary_handler import cmd_curves, cmd_summarize, load_fit
from .validate_handler import cmd_validate

__all__ = [
    "MANIFEST_FILE",
    "RUN_INFO_FILE",
    "ModelContext",
    "build_jobs",
    "build_run",
    "cmd_curves",
    "cmd_fit",
    "cmd_simulate",
    "cmd_summarize",
    "cmd_validate",
    "guarded",
    "load_fit",
    "load_model_context",
    "new_manifest",
    "read_manifest",
    "write_manifest",
    "write_run_info",
]
