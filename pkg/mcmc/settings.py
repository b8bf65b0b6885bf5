from __future__ import annotations

from dataclasses import asdict, dataclass

from core.models import FitSection
from core.types import ConfigError

# Roberts-Rosenthal 自适应核的常用取值
DEFAULT_SCALE_NUMERATOR = 2.38**2
DEFAULT_MIXING_WEIGHT = 0.05
DEFAULT_JITTER = 1e-10
FIXED_KERNEL_SD = 0.1


@dataclass(frozen=True, slots=True)
class McmcSettings:
    init_attempts: int = 1000
    iterations: int = 1000
    event_sigma: float = 1.0
    event_batches: int = 1
    condition_on_network: bool = True
    per_event_acceptance: bool = False
    adapt: bool = True
    adaptation_scale: float | None = None
    mixing_weight: float = DEFAULT_MIXING_WEIGHT
    jitter: float = DEFAULT_JITTER
    fixed_kernel: str = "identity"
    chains: int = 1
    seed: int = 0
    progress_interval: int = 1000
    audit_every: int = 0
    spill: bool = False

    def __post_init__(self) -> None:
        problems = []
        if self.init_attempts < 1:
            problems.append(f"init_attempts must be >= 1, got {self.init_attempts}")
        if self.iterations < 0:
            problems.append(f"iterations must be >= 0, got {self.iterations}")
        if not self.event_sigma > 0:
            problems.append(f"event_sigma must be positive, got {self.event_sigma}")
        if self.event_batches < 1:
            problems.append(f"event_batches must be >= 1, got {self.event_batches}")
        if self.adaptation_scale is not None and not self.adaptation_scale > 0:
            problems.append(f"adaptation_scale must be positive, got {self.adaptation_scale}")
        if not 0 < self.mixing_weight < 1:
            problems.append(f"mixing_weight must be in (0, 1), got {self.mixing_weight}")
        if not self.jitter > 0:
            problems.append(f"jitter must be positive, got {self.jitter}")
        if self.fixed_kernel not in ("identity", "prior"):
            problems.append(f"fixed_kernel must be identity or prior, got {self.fixed_kernel}")
        if self.chains < 1:
            problems.append(f"chains must be >= 1, got {self.chains}")
        if problems:
            raise ConfigError("; ".join(problems))

    @classmethod
    def from_config(cls, section: FitSection, seed: int = 0) -> "McmcSettings":
        return cls(
            init_attempts=section.init_attempts,
            iterations=section.iterations,
            event_sigma=section.event_sigma,
            event_batches=section.event_batches,
            condition_on_network=section.condition_on_network,
            per_event_acceptance=section.per_event_acceptance,
            adapt=section.adapt,
            adaptation_scale=section.adaptation_scale,
            mixing_weight=section.mixing_weight,
            jitter=section.jitter,
            fixed_kernel=section.fixed_kernel,
            chains=section.chains,
            seed=seed,
            progress_interval=max(1, section.progress_interval),
            audit_every=max(0, section.audit_every),
            spill=section.spill,
        )

    def scale(self, dimension: int) -> float:
        if self.adaptation_scale is not None:
            return self.adaptation_scale
        return DEFAULT_SCALE_NUMERATOR / max(1, dimension)

    def batches_for(self, targets: int) -> int:
        if targets == 0:
            return 0
        if self.per_event_acceptance:
            return targets
        return min(self.event_batches, targets)

    def as_dict(self) -> dict:
        return asdict(self)
