"""Parameter bundle, result type and validation shared by all evaluators.

Units are arbitrary but consistent: rates and omega in 1/time, tau in time.
Total sensing time is always ``rounds * tau``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field, replace
from enum import Enum


class ParameterError(ValueError):
    """Raised when a parameter bundle violates one of its invariants."""


class Scenario(str, Enum):
    NO_EC = "no-ec"
    PARITY_IDEAL = "parity-ideal"
    PARITY_NOISY_ANCILLA = "parity-noisy-ancilla"
    PARITY_IMPERFECT = "parity-imperfect"
    PARITY_GENERAL = "parity-general"
    BITFLIP = "bitflip"

    @property
    def is_parity(self) -> bool:
        return self.value.startswith("parity")


class Method(str, Enum):
    EXACT = "exact"
    SERIES = "series"
    ORACLE = "oracle"


@dataclass(frozen=True)
class SystemParams:
    n: int
    omega: float
    gamma: float
    xi: float = 0.0
    p: float = 0.0
    tau: float = 1.0
    rounds: int = 1

    @property
    def total_time(self) -> float:
        return self.rounds * self.tau

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class QfiResult:
    qfi: float
    normalized: float
    scenario: Scenario
    method: Method
    flags: tuple[str, ...] = field(default=())

    @classmethod
    def build(cls, qfi: float, n: int, t: float, scenario, method, flags=()) -> "QfiResult":
        return cls(qfi, qfi / (n * t) ** 2, Scenario(scenario), Method(method), tuple(flags))


def _is_count(x, minimum: int) -> bool:
    return isinstance(x, numbers.Integral) and not isinstance(x, bool) and x >= minimum


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged, or raise ``ParameterError`` naming the field."""
    if not _is_count(params.n, 1):
        raise ParameterError("n must be ≥ 1")
    for name in ("omega", "gamma", "xi", "p", "tau"):
        if not math.isfinite(getattr(params, name)):
            raise ParameterError(f"{name} must be finite")
    if params.gamma < 0:
        raise ParameterError("gamma must be ≥ 0")
    if params.xi < 0:
        raise ParameterError("xi must be ≥ 0")
    if not 0 <= params.p < 1:
        raise ParameterError("p must lie in [0, 1)")
    if params.tau <= 0:
        raise ParameterError("tau must be > 0")
    if not _is_count(params.rounds, 1):
        raise ParameterError("rounds must be an integer ≥ 1")
    return params
