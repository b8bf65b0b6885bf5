from __future__ import annotations

import ast
from pathlib import Path
import sys


ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

EXPECTED_COMMANDS = {"simulate", "fit", "summarize", "curves", "validate"}
PACKAGES = (
    "core",
    "population",
    "riskdsl",
    "model",
    "rates",
    "simulate",
    "likelihood",
    "mcmc",
    "database",
    "posterior",
    "handlers",
    "rendering",
    "resources",
)
BUNDLED_CONFIGS = ("sir_simulated.toml", "hagelloch_seir.toml")
SKIP_LINE_LIMIT_DIRS = {
    ".git",
    ".pytest_cache",
    ".venv",
    "__pycache__",
    "data",
    "output",
    "venv",
}


def main() -> None:
    commands = _registered_commands(ast.parse((ROOT / "main.py").read_text(encoding="utf-8")))
    missing_commands = EXPECTED_COMMANDS - commands
    if missing_commands:
        raise SystemExit(f"missing commands: {sorted(missing_commands)}")
    _check_module_documents()
    _check_report_template()
    validated = _check_bundled_configs()

    oversized = _oversized_text_files()
    if oversized:
        details = ", ".join(f"{path}:{count}" for path, count in oversized)
        raise SystemExit(f"files over 500 lines: {details}")

    print("engine_integration_check=ok")
    print("commands=" + ",".join(sorted(commands)))
    print("packages=" + ",".join(PACKAGES))
    print("configs=" + ",".join(validated))


def _registered_commands(tree: ast.AST) -> set[str]:
    commands = set()
    for node in ast.walk(tree):
        if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Attribute):
            continue
        if node.func.attr == "add_parser" and node.args and isinstance(node.args[0], ast.Constant):
            commands.add(str(node.args[0].value))
        if node.func.attr == "add_parser" and node.args and isinstance(node.args[0], ast.Name):
            commands.update(_loop_names(tree, node.args[0].id))
    return commands


def _loop_names(tree: ast.AST, target: str) -> set[str]:
    names = set()
    for node in ast.walk(tree):
        if not isinstance(node, ast.For) or not isinstance(node.iter, ast.Tuple):
            continue
        for item in node.iter.elts:
            if isinstance(item, ast.Tuple) and item.elts and isinstance(item.elts[0], ast.Constant):
                if isinstance(node.target, ast.Tuple) and any(
                    isinstance(name, ast.Name) and name.id == target for name in node.target.elts
                ):
                    names.add(str(item.elts[0].value))
    return names


def _check_module_documents() -> None:
    missing = [
        f"{package}/{package}.md"
        for package in PACKAGES
        if not (ROOT / package / f"{package}.md").exists()
    ]
    if missing:
        raise SystemExit(f"missing module documents: {missing}")
    for package in PACKAGES:
        if package == "resources":
            continue
        if not (ROOT / package / "__init__.py").exists():
            raise SystemExit(f"package without __init__.py: {package}")


def _check_report_template() -> None:
    template = ROOT / "resources" / "templates" / "run_report.html.jinja"
    if not template.exists():
        raise SystemExit("missing report template")
    renderer = (ROOT / "rendering" / "html_report.py").read_text(encoding="utf-8")
    if "run_report.html.jinja" not in renderer:
        raise SystemExit("report renderer does not point at the bundled template")


def _check_bundled_configs() -> list[str]:
    from core.config import load_run_config
    from handlers.context import load_model_context
    from model import validate_model

    validated = []
    for name in BUNDLED_CONFIGS:
        path = ROOT / "configs" / name
        if not path.exists():
            raise SystemExit(f"missing bundled config: {name}")
        config = load_run_config(path)
        if not Path(config.population.risks).exists():
            print(f"config_skipped={name} (data file not present)")
            continue
        context = load_model_context(config)
        report = validate_model(
            context.risk_functions.model_class,
            context.risk_functions,
            context.parameters,
            priors=context.priors,
            pop=context.population,
        )
        if context.extents is not None:
            report.problems.extend(context.extents.problems(context.risk_functions.model_class))
        if not report.passed:
            raise SystemExit(f"bundled config {name} does not validate:\n{report}")
        validated.append(name)
    return validated


def _oversized_text_files() -> list[tuple[str, int]]:
    oversized = []
    candidates = [ROOT / "main.py", *(ROOT / "scripts").glob("*.py"), *(ROOT / "tests").rglob("*.py")]
    for package in PACKAGES:
        candidates.extend((ROOT / package).rglob("*"))
    for path in candidates:
        if not path.is_file() or any(part in SKIP_LINE_LIMIT_DIRS for part in path.parts):
            continue
        try:
            count = sum(1 for _ in path.open("r", encoding="utf-8"))
        except UnicodeDecodeError:
            continue
        if count > 500:
            oversized.append((str(path.relative_to(ROOT)), count))
    return oversized


if __name__ == "__main__":
    main()
