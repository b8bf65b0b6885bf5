from __future__ import annotations

from core.logger import logger
from core.models import RunConfig
from core.types import EXIT_CONFIG, EXIT_OK
from model import validate_model

from .context import load_model_context
from .exit_codes import guarded


@guarded
def cmd_validate(config: RunConfig) -> int:
    """检查风险函数角色、参数 / 先验个数与观测范围，并对探针个体试算。"""
    context = load_model_context(config)
    model_class = context.risk_functions.model_class
    report = validate_model(
        model_class,
        context.risk_functions,
        context.parameters,
        priors=context.priors,
        pop=context.population,
    )
    if context.extents is not None:
        report.problems.extend(context.extents.problems(model_class))
    print(report)
    if not report.passed:
        logger.error(f"模型校验未通过: {len(report.problems)} 个问题")
        return EXIT_CONFIG
    logger.success(f"模型校验通过: {model_class.value}, n={context.population.n}")
    return EXIT_OK
