"""Back-of-envelope numbers for the time of a population MRCA.

Applies the large-x limit to a discrete population of ``Y`` individuals
growing by a factor ``lambda`` per generation with offspring variance
``sigma2``.  Time is measured in generations, population in individuals.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from ..errors import DomainError

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class MteSummary:
    alpha_x: float
    mean_generations: float
    var_generations: float
    mean_population: float
    var_population: float

    @property
    def sd_generations(self) -> float:
        return math.sqrt(self.var_generations)

    @property
    def sd_population(self) -> float:
        return math.sqrt(self.var_population)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["sd_generations"] = self.sd_generations
        d["sd_population"] = self.sd_population
        return d


def mte_summary(y: float, log_lambda: float, sigma2: float) -> MteSummary:
    """Moments of the generations back to the MRCA and of its population size.

    The scaled population is ``alpha x = Y log(lambda) / sigma2``; the MRCA
    time in generations has mean ``(gamma + log 2 alpha x) / log(lambda)`` and
    variance ``pi^2 / (6 log(lambda)^2)``, and the MRCA population is
    Gamma(2) with mean ``sigma2 / log(lambda)``.
    """
    for name, v in (("Y", y), ("log_lambda", log_lambda), ("sigma2", sigma2)):
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")
    alpha_x = y * log_lambda / sigma2
    scale = sigma2 / log_lambda
    return MteSummary(
        alpha_x=alpha_x,
        mean_generations=(EULER_GAMMA + math.log(2.0 * alpha_x)) / log_lambda,
        var_generations=math.pi ** 2 / (6.0 * log_lambda ** 2),
        mean_population=scale,
        var_population=0.5 * scale * scale,
    )
