"""Laguerre and constraint polynomials of the quantum Rabi model.

All model-dependent functions work with the dimensionless ratios g/omega and
delta/omega. The ``*_values`` variants take those ratios directly and
broadcast over numpy arrays; the ``ModelParams`` variants are thin scalar
wrappers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .params import ModelParams, check_index


class ScalingMode(str, Enum):
    SCALED = "per-step-scaled"
    RATIONAL = "rational-oracle"


@dataclass(frozen=True)
class PolyEvalSettings:
    """Controls constraint-polynomial evaluation.

    ``max_order`` caps the pair index accepted; ``scaling_mode`` picks the
    fast scaled float recurrence or exact rational arithmetic.
    """

    max_order: int = 20
    scaling_mode: ScalingMode = ScalingMode.SCALED

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        object.__setattr__(self, "scaling_mode", ScalingMode(self.scaling_mode))


DEFAULT_SETTINGS = PolyEvalSettings()


def _as_output(value, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(value)
    return value


def laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x).

    Uses the upward recurrence
    ``(j+1) L_{j+1} = (2j+k+1-x) L_j - (j+k) L_{j-1}``.
    ``x`` may be a scalar or an array.
    """
    n = check_index("n", n)
    k = check_index("k", k)
    xa = np.asarray(x, dtype=float)
    prev = np.ones_like(xa)
    if n == 0:
        return _as_output(prev, x)
    cur = 1.0 + k - xa
    for j in range(1, n):
        prev, cur = cur, ((2 * j + k + 1 - xa) * cur - (j + k) * prev) / (j + 1)
    return _as_output(cur, x)


def _check_order(n: int, k: int, settings: PolyEvalSettings) -> tuple[int, int]:
    n = check_index("n", n)
    if isinstance(k, bool) or int(k) != k:
        raise TypeError(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < 0 or k > n:
        raise ValueError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    if n > settings.max_order:
        raise ValueError(f"n={n} exceeds max_order={settings.max_order}")
    return n, k


def scaled_constraint_values(n: int, k: int, g, delta):
    """Return P_k^n(g, delta) / (k!)^2 with g, delta in units of omega.

    Dividing by (k!)^2 at every step keeps the iterates of order one, so the
    raw factorial growth of the recurrence never reaches floating point.
    """
    g2 = np.square(np.asarray(g, dtype=float))
    d2q = np.square(np.asarray(delta, dtype=float)) / 4.0
    prev = np.ones(np.broadcast(g2, d2q).shape)
    if k == 0:
        return prev
    cur = 4.0 * g2 + d2q - 1.0 + 0.0 * prev
    for j in range(2, k + 1):
        a = (4.0 * j * g2 + d2q - j * j) / (j * j)
        b = 4.0 * (n - j + 1) * g2 / (j * (j - 1))
        prev, cur = cur, a * cur - b * prev
    return cur


def _rational_constraint(n: int, k: int, g, delta) -> Fraction:
    g2 = Fraction(g) ** 2
    d2q = Fraction(delta) ** 2 / 4
    prev, cur = Fraction(1), 4 * g2 + d2q - 1
    if k == 0:
        return prev
    for j in range(2, k + 1):
        prev, cur = cur, (4 * j * g2 + d2q - j * j) * cur - 4 * j * (j - 1) * (n - j + 1) * g2 * prev
    return cur


def rational_constraint(n: int, k: int, g, delta) -> Fraction:
    """Exact P_k^n for rational (or exactly representable float) inputs.

    Plain unscaled recurrence in ``fractions.Fraction``; used as the reference
    the scaled float path is validated against.
    """
    return _rational_constraint(n, k, g, delta)


def constraint_poly(n: int, k: int, params: ModelParams, settings: PolyEvalSettings = DEFAULT_SETTINGS) -> float:
    """Constraint polynomial P_k^n evaluated at (g/omega, delta/omega)."""
    n, k = _check_order(n, k, settings)
    g, d = params.g_ratio, params.delta_ratio
    if settings.scaling_mode is ScalingMode.RATIONAL:
        return float(_rational_constraint(n, k, g, d))
    return float(scaled_constraint_values(n, k, g, d)) * math.factorial(k) ** 2


def normalized_constraint_values(n: int, g, delta, settings: PolyEvalSettings = DEFAULT_SETTINGS):
    """K_n = P_n^n / P_n^n(0, 0) for dimensionless g and delta (broadcasts)."""
    n, _ = _check_order(n, n, settings)
    if settings.scaling_mode is ScalingMode.RATIONAL:
        norm = (-1) ** n * math.factorial(n) ** 2
        vec = np.vectorize(lambda gg, dd: float(_rational_constraint(n, n, gg, dd) / norm), otypes=[float])
        return _as_output(vec(g, delta), g, delta)
    sign = -1.0 if n % 2 else 1.0
    return _as_output(sign * scaled_constraint_values(n, n, g, delta), g, delta)


def normalized_constraint(n: int, params: ModelParams, settings: PolyEvalSettings = DEFAULT_SETTINGS) -> float:
    """Normalized constraint polynomial K_n(g, delta); K_n(g, 0) = L_n(4 g^2)."""
    return normalized_constraint_values(n, params.g_ratio, params.delta_ratio, settings)


def constraint_at_zero_coupling(n: int, delta: float) -> float:
    """Closed form of P_n^n at g = 0: prod_{k=1..n} (delta^2/4 - k^2).

    ``delta`` is in units of omega.
    """
    n = check_index("n", n)
    d2q = float(delta) ** 2 / 4.0
    out = 1.0
    for k in range(1, n + 1):
        out *= d2q - k * k
    return out


def nth_root_factorial(n: int) -> float:
    """(n!)^(1/n) via log-gamma, finite for any n >= 1."""
    return math.exp(math.lgamma(n + 1) / n)


def corrected_displacement_sq_values(n: int, g, delta):
    """4 alpha_n^2 for dimensionless g and delta (broadcasts)."""
    n = check_index("n", n)
    out = 4.0 * np.square(np.asarray(g, dtype=float))
    if n > 0:
        out = out + np.square(np.asarray(delta, dtype=float)) / (4.0 * nth_root_factorial(n))
    else:
        out = out + 0.0 * np.asarray(delta, dtype=float)
    return _as_output(out, g, delta)


def corrected_displacement_sq(n: int, params: ModelParams) -> float:
    """Return 4 alpha_n^2, the Laguerre argument with the delta correction.

    ``4 g^2 + delta^2 / (4 (n!)^(1/n))`` for ``n >= 1`` and ``4 g^2`` for
    ``n = 0``, all in units of omega. The delta term makes ``L_n(4 alpha_n^2)``
    share the leading delta^(2n) coefficient of ``K_n``.
    """
    return corrected_displacement_sq_values(n, params.g_ratio, params.delta_ratio)


def mixed_close(a, b, tol: float = 1e-9) -> bool:
    """|a - b| <= tol * max(1, |a|, |b|), elementwise-all."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return bool(np.all(np.abs(a - b) <= tol * scale))
