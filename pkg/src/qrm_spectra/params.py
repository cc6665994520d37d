"""Model parameters and small input-validation helpers shared by all modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum


class Method(str, Enum):
    """Tag identifying which solver produced a spectrum."""

    AA = "AA"
    GAA_K = "GAA_K"
    GAA_L = "GAA_L"
    GRWA = "GRWA"
    GRWA_GAA = "GRWA_GAA"
    EXACT = "EXACT"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, value: "str | Method") -> "Method":
        if isinstance(value, Method):
            return value
        key = value.strip().upper().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown method {value!r}; expected one of {valid}") from None


def check_index(name: str, value: int) -> int:
    """Return ``value`` as an int, rejecting negatives and non-integers."""
    if isinstance(value, bool) or int(value) != value:
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value


def check_finite(name: str, value: float, *, positive: bool = False) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if positive and value <= 0.0:
        raise ValueError(f"{name} must be strictly positive, got {value}")
    if not positive and value < 0.0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Rabi-model parameters in units with hbar = 1.

    Attributes
    ----------
    delta : float
        Qubit splitting, ``delta >= 0``.
    omega : float
        Oscillator frequency, ``omega > 0``.
    g : float
        Qubit-oscillator coupling, ``g >= 0``.
    """

    delta: float = 0.0
    omega: float = 1.0
    g: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "delta", check_finite("delta", self.delta))
        object.__setattr__(self, "omega", check_finite("omega", self.omega, positive=True))
        object.__setattr__(self, "g", check_finite("g", self.g))

    @property
    def g_ratio(self) -> float:
        """Dimensionless coupling g/omega."""
        return self.g / self.omega

    @property
    def delta_ratio(self) -> float:
        """Dimensionless splitting delta/omega."""
        return self.delta / self.omega

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)
