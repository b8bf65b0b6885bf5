from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from scipy import stats

from core.models import DistributionSpec
from core.types import ConfigError

_FIELDS = {
    "uniform": ("a", "b"),
    "exponential": ("mean",),
    "gamma": ("shape", "scale"),
    "normal": ("mu", "sigma"),
    "beta": ("alpha", "beta"),
    "flat": (),
    "constant": ("value",),
}


@dataclass(frozen=True, slots=True)
class Distribution:
    """先验与观测延迟共用的一维分布。指数分布按均值参数化。"""

    family: str
    params: tuple[float, ...] = ()
    truncate: bool = False

    @classmethod
    def from_spec(cls, spec: DistributionSpec) -> "Distribution":
        values = tuple(float(getattr(spec, name)) for name in _FIELDS[spec.family])
        return cls(spec.family, values, bool(spec.truncate))

    @classmethod
    def uniform(cls, a: float, b: float) -> "Distribution":
        return cls("uniform", (float(a), float(b)))

    @classmethod
    def exponential(cls, mean: float) -> "Distribution":
        return cls("exponential", (float(mean),))

    @classmethod
    def gamma(cls, shape: float, scale: float) -> "Distribution":
        return cls("gamma", (float(shape), float(scale)))

    @classmethod
    def normal(cls, mu: float, sigma: float, *, truncate: bool = False) -> "Distribution":
        return cls("normal", (float(mu), float(sigma)), truncate)

    @classmethod
    def beta(cls, alpha: float, beta: float) -> "Distribution":
        return cls("beta", (float(alpha), float(beta)))

    @classmethod
    def constant(cls, value: float) -> "Distribution":
        return cls("constant", (float(value),))

    @classmethod
    def flat(cls) -> "Distribution":
        return cls("flat")

    @property
    def frozen(self) -> Any:
        return _frozen(self.family, self.params, self.truncate)

    def log_density(self, x: float) -> float:
        x = float(x)
        if not math.isfinite(x):
            return -math.inf
        if self.family == "flat":
            return 0.0
        if self.family == "constant":
            return 0.0 if x == self.params[0] else -math.inf
        return float(self.frozen.logpdf(x))

    def sample(self, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
        if self.family == "flat":
            raise ConfigError("a flat distribution cannot be sampled")
        if self.family == "constant":
            return self.params[0] if size is None else np.full(size, self.params[0])
        draws = self.frozen.rvs(size=size, random_state=rng)
        return float(draws) if size is None else np.asarray(draws, dtype=float)

    def support(self) -> tuple[float, float]:
        if self.family == "flat":
            return -math.inf, math.inf
        if self.family == "constant":
            return self.params[0], self.params[0]
        lo, hi = self.frozen.support()
        return float(lo), float(hi)

    def variance(self) -> float:
        if self.family == "flat":
            return math.inf
        if self.family == "constant":
            return 0.0
        return float(self.frozen.var())

    def median(self) -> float:
        if self.family == "flat":
            return 1.0
        if self.family == "constant":
            return self.params[0]
        return float(self.frozen.median())

    def __str__(self) -> str:
        args = ", ".join(f"{value:g}" for value in self.params)
        suffix = ", truncated" if self.truncate else ""
        return f"{self.family}({args}{suffix})"


@lru_cache(maxsize=256)
def _frozen(family: str, params: tuple[float, ...], truncate: bool) -> Any:
    if family == "uniform":
        a, b = params
        return stats.uniform(loc=a, scale=b - a)
    if family == "exponential":
        return stats.expon(scale=params[0])
    if family == "gamma":
        shape, scale = params
        return stats.gamma(a=shape, scale=scale)
    if family == "normal":
        mu, sigma = params
        if truncate:
            return stats.truncnorm(a=(0.0 - mu) / sigma, b=np.inf, loc=mu, scale=sigma)
        return stats.norm(loc=mu, scale=sigma)
    if family == "beta":
        alpha, beta = params
        return stats.beta(alpha, beta)
    raise ConfigError(f"distribution family {family!r} has no scipy form")
