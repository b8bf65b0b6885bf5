from __future__ import annotations

from dataclasses import dataclass

from core.logger import logger
from core.models import RunConfig
from core.types import ConfigError
from model import EventExtents, RiskFunctions, RiskParameters, RiskPriors
from population import Population, distance_spec_from_config, load_population


@dataclass(slots=True)
class ModelContext:
    """由配置构造出的人群、风险函数、参数 / 先验与观测范围。"""

    config: RunConfig
    population: Population
    risk_functions: RiskFunctions
    parameters: RiskParameters | None
    priors: RiskPriors | None
    extents: EventExtents | None

    def require_parameters(self) -> RiskParameters:
        if self.parameters is None:
            raise ConfigError("config has no [model.parameters] section")
        return self.parameters

    def require_priors(self) -> RiskPriors:
        if self.priors is None:
            raise ConfigError("config has no [model.priors] section")
        return self.priors

    def require_extents(self) -> EventExtents:
        if self.extents is None:
            raise ConfigError("config has no [model.extents] section")
        return self.extents


def load_model_context(config: RunConfig) -> ModelContext:
    section = config.model
    risk_functions = RiskFunctions.from_texts(section.model_class, section.functions)
    model_class = risk_functions.model_class
    population = load_population(
        config.population.risks,
        distance_spec_from_config(config.population.distances),
        required_columns=risk_functions.columns(),
    )
    parameters = RiskParameters.from_config(model_class, section.parameters) if section.parameters else None
    priors = RiskPriors.from_config(model_class, section.priors) if section.priors else None
    extents = EventExtents.from_config(section.extents) if section.extents is not None else None
    logger.info(
        f"模型 {model_class.value}: n={population.n}, 角色={', '.join(risk_functions.roles)}, "
        f"距离分量={population.components}"
    )
    return ModelContext(config, population, risk_functions, parameters, priors, extents)
