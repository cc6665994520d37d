"""Two-level-per-block approximations: AA, GAA (K and L variants) and GRWA.

Every approximation here splits the Hilbert space into small blocks built
from displaced-oscillator states. Pair ``n`` carries energies
``n*omega - g^2/omega ± Omega_n`` where ``Omega_n`` is a tunneling strength.
The signed ``Omega_n`` belongs to the symmetric state Psi_{n,+}, whose parity
is (-1)^n; Psi_{n,-} has the opposite parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .oscillator import coherent_overlap, displaced_energy
from .params import Method, ModelParams, check_index
from .polynomials import (
    PolyEvalSettings,
    corrected_displacement_sq_values,
    laguerre,
    normalized_constraint_values,
)

# the scaled recurrence stays well conditioned far beyond the default cap of 20
APPROX_POLY_SETTINGS = PolyEvalSettings(max_order=96)

PAIR_METHODS = (Method.AA, Method.GAA_K, Method.GAA_L)
GRWA_METHODS = (Method.GRWA, Method.GRWA_GAA)


@dataclass(frozen=True)
class PairSpectrum:
    """The two energies of level pair ``n`` under ``method``, ordered."""

    method: Method
    n: int
    e_minus: float
    e_plus: float

    @property
    def gap(self) -> float:
        return self.e_plus - self.e_minus

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.e_plus + self.e_minus)


def aa_tunneling(n: int, params: ModelParams) -> float:
    """Omega_n^AA = (delta/2) exp(-2 g^2/omega^2) L_n(4 g^2/omega^2)."""
    n = check_index("n", n)
    x = 4.0 * params.g_ratio**2
    return 0.5 * params.delta * math.exp(-0.5 * x) * laguerre(n, 0, x)


def gaa_tunneling(n: int, params: ModelParams, variant: Literal["K", "L"] = "K") -> float:
    """Corrected tunneling strength of pair ``n``.

    Variant ``"K"`` multiplies ``(delta/2) exp(-2 alpha_n^2)`` by the
    normalized constraint polynomial K_n(g, delta); variant ``"L"`` uses
    L_n(4 alpha_n^2) instead.
    """
    n = check_index("n", n)
    g, d = params.g_ratio, params.delta_ratio
    x = corrected_displacement_sq_values(n, g, d)
    if variant == "K":
        poly = normalized_constraint_values(n, g, d, APPROX_POLY_SETTINGS)
    elif variant == "L":
        poly = laguerre(n, 0, x)
    else:
        raise ValueError(f"variant must be 'K' or 'L', got {variant!r}")
    return 0.5 * params.delta * math.exp(-0.5 * x) * poly


def tunneling(method: Method, n: int, params: ModelParams) -> float:
    """Signed tunneling strength for one of the pair methods."""
    method = Method.parse(method)
    if method is Method.AA:
        return aa_tunneling(n, params)
    if method is Method.GAA_K:
        return gaa_tunneling(n, params, "K")
    if method is Method.GAA_L:
        return gaa_tunneling(n, params, "L")
    raise ValueError(f"{method} is not a pair method")


def _pair(method: Method, n: int, params: ModelParams, omega_n: float) -> PairSpectrum:
    base = displaced_energy(n, params)
    w = abs(omega_n)
    return PairSpectrum(method, n, base - w, base + w)


def aa_pair(n: int, params: ModelParams) -> PairSpectrum:
    return _pair(Method.AA, n, params, aa_tunneling(n, params))


def gaa_pair(n: int, params: ModelParams, variant: Literal["K", "L"] = "K") -> PairSpectrum:
    method = Method.GAA_K if variant == "K" else Method.GAA_L
    return _pair(method, n, params, gaa_tunneling(n, params, variant))


def pair_spectrum(method: Method, n: int, params: ModelParams) -> PairSpectrum:
    method = Method.parse(method)
    return _pair(method, n, params, tunneling(method, n, params))


@dataclass(frozen=True)
class ApproxLevel:
    """One approximate eigenvalue with its parity (+1/-1) and block label."""

    energy: float
    parity: int
    label: str


def pair_levels(method: Method, n: int, params: ModelParams) -> tuple[ApproxLevel, ApproxLevel]:
    """Levels of Psi_{n,+} and Psi_{n,-} with signed tunneling and parities."""
    w = tunneling(method, n, params)
    base = displaced_energy(n, params)
    p = 1 if n % 2 == 0 else -1
    return (
        ApproxLevel(base + w, p, f"{n}+"),
        ApproxLevel(base - w, -p, f"{n}-"),
    )


def _grwa_blocks(params: ModelParams, n_max: int, basis: str) -> list[ApproxLevel]:
    pair_method = Method.AA if basis == "AA" else Method.GAA_K
    g, d = params.g_ratio, params.delta_ratio
    omegas = [tunneling(pair_method, n, params) for n in range(n_max + 1)]
    base = [displaced_energy(n, params) for n in range(n_max + 1)]
    if basis == "AA":
        alphas = [g] * (n_max + 1)
    else:
        alphas = [math.sqrt(corrected_displacement_sq_values(n, g, d) / 4.0) for n in range(n_max + 1)]

    levels = [ApproxLevel(base[0] - omegas[0], -1, "0-")]
    for n in range(n_max):
        a = base[n] + omegas[n]
        b = base[n + 1] - omegas[n + 1]
        if basis == "AA":
            alpha = alphas[n]
        else:
            alpha = math.sqrt(0.5 * (alphas[n] ** 2 + alphas[n + 1] ** 2))
        c = 0.5 * params.delta * coherent_overlap(n, n + 1, alpha)
        mid, half = 0.5 * (a + b), 0.5 * (a - b)
        r = math.hypot(half, c)
        p = 1 if n % 2 == 0 else -1
        levels.append(ApproxLevel(mid - r, p, f"{n}+/{n + 1}-:lo"))
        levels.append(ApproxLevel(mid + r, p, f"{n}+/{n + 1}-:hi"))
    return levels


def grwa_levels(params: ModelParams, n_max: int, basis: Literal["AA", "GAA"] = "AA") -> list[ApproxLevel]:
    """GRWA levels with parity labels, sorted by energy."""
    n_max = check_index("n_max", n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if basis not in ("AA", "GAA"):
        raise ValueError(f"basis must be 'AA' or 'GAA', got {basis!r}")
    return sorted(_grwa_blocks(params, n_max, basis), key=lambda lv: lv.energy)


def grwa_spectrum(params: ModelParams, n_max: int, basis: Literal["AA", "GAA"] = "AA") -> np.ndarray:
    """Generalized rotating-wave spectrum, sorted ascending.

    In the basis of AA eigenstates only the excitation-conserving couplings
    Psi_{n,+} <-> Psi_{n+1,-} are kept. That leaves the isolated state
    Psi_{0,-} plus one 2x2 block per ``n = 0 .. n_max-1`` with diagonal
    ``E_{n,+}``, ``E_{n+1,-}`` and off-diagonal
    ``(delta/2) <n_-|(n+1)_+>``, giving ``2*n_max + 1`` energies.

    ``basis="GAA"`` swaps in GAA-K diagonal energies and corrected
    displacements in the overlaps. That variant is experimental.
    """
    return np.array([lv.energy for lv in grwa_levels(params, n_max, basis)])


def pairs_needed(levels: int, params: ModelParams) -> int:
    """Number of pairs that safely covers the lowest ``levels`` energies."""
    return levels // 2 + int(math.ceil(params.delta_ratio)) + 4


def approx_levels(method: Method, params: ModelParams, levels: int) -> list[ApproxLevel]:
    """Lowest ``levels`` approximate levels under ``method``, ascending."""
    method = Method.parse(method)
    n_pairs = pairs_needed(levels, params)
    if method in PAIR_METHODS:
        out = [lv for n in range(n_pairs) for lv in pair_levels(method, n, params)]
        out.sort(key=lambda lv: lv.energy)
    elif method in GRWA_METHODS:
        out = grwa_levels(params, n_pairs, "AA" if method is Method.GRWA else "GAA")
    else:
        raise ValueError(f"{method} is not an approximation")
    return out[:levels]


def same_parity_crossings(method: Method, fixed: ModelParams, g_grid, n_pairs: int) -> list[tuple[str, str, float]]:
    """Crossings between same-parity levels of pairs ``0..n_pairs-1`` along ``g_grid``.

    Exact levels of equal parity never cross, so every hit is an artefact of
    the block decomposition. Returns ``(label_a, label_b, g)`` with ``g`` the
    left end of the grid interval holding the crossing.
    """
    g_grid = np.asarray(g_grid, dtype=float)
    rows = []
    for g in g_grid:
        p = fixed.with_(g=float(g))
        rows.append([lv for n in range(n_pairs) for lv in pair_levels(method, n, p)])
    energies = np.array([[lv.energy for lv in r] for r in rows])
    parities = [lv.parity for lv in rows[0]]
    labels = [lv.label for lv in rows[0]]
    hits = []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            if parities[i] != parities[j]:
                continue
            diff = energies[:, i] - energies[:, j]
            flips = np.nonzero(np.signbit(diff[1:]) != np.signbit(diff[:-1]))[0]
            hits.extend((labels[i], labels[j], float(g_grid[k])) for k in flips)
    return sorted(hits, key=lambda h: h[2])
