"""Displaced-oscillator energies and generalized coherent-state overlaps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ModelParams, check_index
from .polynomials import laguerre


class Branch(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class DisplacedLevel:
    """Eigenstate |n_±, ±x> of the delta = 0 model and its energy."""

    n: int
    branch: Branch
    energy: float

    @classmethod
    def of(cls, n: int, branch: Branch, params: ModelParams) -> "DisplacedLevel":
        return cls(n, Branch(branch), displaced_energy(n, params))


def displaced_energy(n: int, params: ModelParams) -> float:
    """n*omega - g^2/omega, shared by both spin branches."""
    n = check_index("n", n)
    return n * params.omega - params.g**2 / params.omega


def _overlap_ordered(m: int, n: int, alpha: float) -> float:
    # m <= n
    if alpha == 0.0:
        return 1.0 if m == n else 0.0
    x = 4.0 * alpha * alpha
    log_pref = -2.0 * alpha * alpha + 0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1))
    if n > m:
        log_pref += (n - m) * math.log(2.0 * abs(alpha))
    sign = -1.0 if (alpha < 0 and (n - m) % 2) else 1.0
    return sign * math.exp(log_pref) * laguerre(m, n - m, x)


def coherent_overlap(m: int, n: int, alpha: float) -> float:
    """Overlap <m_-|n_+> of Fock states displaced by -alpha and +alpha.

    For ``m <= n`` this is
    ``exp(-2 alpha^2) (2 alpha)^(n-m) sqrt(m!/n!) L_m^(n-m)(4 alpha^2)``;
    the ``m > n`` case follows from
    ``<m_-|n_+> = (-1)^(m-n) <n_-|m_+>``.

    Parameters
    ----------
    m, n : int
        Fock indices, non-negative.
    alpha : float
        Real displacement amplitude (g/omega for the plain picture, or a
        corrected amplitude).
    """
    m = check_index("m", m)
    n = check_index("n", n)
    alpha = float(alpha)
    if m <= n:
        return _overlap_ordered(m, n, alpha)
    sign = -1.0 if (m - n) % 2 else 1.0
    return sign * _overlap_ordered(n, m, alpha)
