"""Conditioning regimes and the population state they condition on."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import DomainError


@dataclass(frozen=True)
class FixedT1:
    """Single founder at a fixed time ``t`` before the present."""

    t: float
    tag = "fixed-t1"

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"FixedT1 needs a finite t > 0, got {self.t!r}")


@dataclass(frozen=True)
class InfT1:
    """Single founder infinitely far in the past."""

    tag = "inf-t1"


@dataclass(frozen=True)
class UnifT1:
    """Improper uniform prior on the founder time."""

    tag = "unif-t1"


@dataclass(frozen=True)
class UnifX0:
    """Improper uniform prior on the initial population, observed after ``t``."""

    t: float
    tag = "unif-x0"

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"UnifX0 needs a finite t > 0, got {self.t!r}")


ConditioningRegime = Union[FixedT1, InfT1, UnifT1, UnifX0]

REGIME_TAGS = ("fixed-t1", "inf-t1", "unif-t1", "unif-x0")


def make_regime(tag: str, t: Optional[float] = None) -> ConditioningRegime:
    """Build a regime from its command-line tag."""
    tag = tag.lower().replace("_", "-")
    if tag == "fixed-t1":
        if t is None:
            raise DomainError("fixed-t1 needs a horizon t")
        return FixedT1(float(t))
    if tag == "unif-x0":
        if t is None:
            raise DomainError("unif-x0 needs a horizon t")
        return UnifX0(float(t))
    if tag == "inf-t1":
        return InfT1()
    if tag == "unif-t1":
        return UnifT1()
    raise DomainError(f"unknown regime {tag!r}; expected one of {REGIME_TAGS}")


@dataclass(frozen=True)
class PopulationState:
    """Observed current population ``x`` with optional ``x0`` and ``z``."""

    x: float
    x0: Optional[float] = None
    z: Optional[float] = None

    def __post_init__(self):
        if not self.x >= 0:
            raise DomainError(f"x must be nonnegative, got {self.x!r}")
        if self.x0 is not None and not self.x0 >= 0:
            raise DomainError(f"x0 must be nonnegative, got {self.x0!r}")
        if self.z is not None and not self.z > 0:
            raise DomainError(f"z must be positive, got {self.z!r}")
