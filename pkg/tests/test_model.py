from __future__ import annotations

import math

import numpy as np
import pytest

from core.models import DistributionSpec
from core.types import ConfigError, ModelClass, ModelValidationError
from model import (
    Distribution,
    EventExtents,
    RiskFunctions,
    RiskParameters,
    RiskPriors,
    canonical_role,
    log_prior,
    required_roles,
    sample_priors,
    validate_model,
)

SIR_TEXTS = {
    "sparks": "theta[1]",
    "susceptibility": "1",
    "infectivity": "dist(k, i, 1) ^ (-theta[1])",
    "transmissibility": "1",
    "removal": "theta[1]",
}


def test_required_roles_per_class():
    assert required_roles(ModelClass.SI) == ("sparks", "susceptibility", "infectivity", "transmissibility")
    assert required_roles(ModelClass.SEIR)[-2:] == ("latency", "removal")


def test_role_aliases():
    assert canonical_role("kernel") == "infectivity"
    assert canonical_role("Exogenous") == "sparks"
    with pytest.raises(ConfigError):
        canonical_role("recovery")


def test_valid_sir_model(make_population):
    pop = make_population({"x": [0.0, 1.0], "y": [0.0, 0.0]}, ("euclidean(x, y)",))
    rf = RiskFunctions.from_texts("sir", SIR_TEXTS)
    rp = RiskParameters.from_config("SIR", {"sparks": [0.01], "infectivity": [2.0], "removal": [0.2]})
    report = validate_model("SIR", rf, rp, pop=pop)
    assert report.passed
    assert str(report) == "SIR: ok"


def test_missing_and_extra_roles():
    texts = dict(SIR_TEXTS)
    del texts["removal"]
    texts["latency"] = "1"
    report = validate_model(ModelClass.SIR, RiskFunctions.from_texts(ModelClass.SIR, texts))
    assert "missing role: removal" in report.problems
    assert "extra role: latency" in report.problems
    with pytest.raises(ModelValidationError):
        report.raise_if_failed()


def test_parameter_arity_mismatch():
    rf = RiskFunctions.from_texts(ModelClass.SIR, SIR_TEXTS)
    rp = RiskParameters.from_config(ModelClass.SIR, {"sparks": [0.01, 0.02], "infectivity": [2.0], "removal": [0.2]})
    report = validate_model(ModelClass.SIR, rf, rp)
    assert any(problem.startswith("arity mismatch: sparks") for problem in report.problems)


def test_probe_catches_negative_values(make_population):
    pop = make_population({"x": [0.0, 1.0]}, ("euclidean(x)",))
    texts = dict(SIR_TEXTS, removal="theta[1] - 1")
    rf = RiskFunctions.from_texts(ModelClass.SIR, texts)
    rp = RiskParameters.from_config(ModelClass.SIR, {"sparks": [0.01], "infectivity": [2.0], "removal": [0.5]})
    report = validate_model(ModelClass.SIR, rf, rp, pop=pop)
    assert any("evaluation failed: removal" in problem for problem in report.problems)


def test_parameters_flatten_and_labels():
    rp = RiskParameters.from_config(ModelClass.SIR, {"removal": [0.2], "sparks": [0.01], "infectivity": [1.0, 2.0]})
    assert rp.roles == ("sparks", "infectivity", "removal")
    assert rp.labels() == ["sparks[1]", "infectivity[1]", "infectivity[2]", "removal[1]"]
    assert rp.flatten().tolist() == [0.01, 1.0, 2.0, 0.2]
    moved = rp.with_flat([0.5, 1.5, 2.5, 3.5])
    assert moved.get("infectivity").tolist() == [1.5, 2.5]
    assert rp.get("latency").size == 0
    with pytest.raises(ModelValidationError):
        rp.with_flat([1.0])


def test_distribution_densities():
    assert Distribution.uniform(0.0, 2.0).log_density(1.0) == pytest.approx(math.log(0.5))
    assert Distribution.uniform(0.0, 2.0).log_density(3.0) == -math.inf
    assert Distribution.exponential(2.0).log_density(1.0) == pytest.approx(math.log(0.5) - 0.5)
    assert Distribution.flat().log_density(123.0) == 0.0
    assert Distribution.constant(1.5).log_density(1.5) == 0.0
    assert Distribution.normal(0.0, 1.0, truncate=True).support() == (0.0, math.inf)


def test_distribution_from_spec():
    spec = DistributionSpec(family="gamma", shape=2.0, scale=3.0)
    gamma = Distribution.from_spec(spec)
    assert gamma.variance() == pytest.approx(18.0)
    draws = gamma.sample(np.random.default_rng(0), size=20000)
    assert draws.mean() == pytest.approx(6.0, rel=0.05)


def test_distribution_spec_requires_fields():
    with pytest.raises(ValueError):
        DistributionSpec(family="uniform", a=1.0)


def test_priors_sample_within_support_and_log_prior():
    priors = RiskPriors(
        ModelClass.SIR,
        {
            "sparks": (Distribution.uniform(0.0, 0.1),),
            "infectivity": (Distribution.uniform(1.0, 7.0),),
            "removal": (Distribution.uniform(0.0, 1.0),),
        },
    )
    rng = np.random.default_rng(1)
    for _ in range(50):
        rp = sample_priors(priors, rng)
        assert math.isfinite(log_prior(rp, priors))
    outside = RiskParameters.from_config(ModelClass.SIR, {"sparks": [0.5], "infectivity": [2.0], "removal": [0.5]})
    assert log_prior(outside, priors) == -math.inf
    assert priors.probe().flatten().tolist() == pytest.approx([0.05, 4.0, 0.5])


def test_extents_problems():
    assert EventExtents.build(infection=5.0, removal=5.0).problems(ModelClass.SIR) == []
    assert EventExtents.build(infection=5.0).problems(ModelClass.SEIR) == [
        "missing extent: exposure",
        "missing extent: removal",
    ]
    assert "extra extent: removal" in EventExtents.build(infection=1.0, removal=1.0).problems(ModelClass.SI)
    with pytest.raises(ConfigError):
        EventExtents.build(infection=(3.0, 1.0))
