"""Numerically exact spectrum by parity-resolved truncated diagonalization.

In the Fock basis |m> with the spin fixed by parity, each parity sector of
the Rabi Hamiltonian is a symmetric tridiagonal matrix with

    diag[m]    = m*omega + s*(-1)^m * delta/2     (s = +1 even, -1 odd)
    offdiag[m] = g*sqrt(m+1)

Truncating at N Fock states gives a leading principal submatrix, so each
eigenvalue can only decrease as N grows (Cauchy interlacing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .params import ModelParams

MAX_TRUNCATION = 16384
# two levels closer than this (in units of omega) count as crossing
DEGENERACY_TOL = 1e-6


class ConvergenceError(RuntimeError):
    """Adaptive truncation did not converge."""


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1

    @classmethod
    def from_sign(cls, sign: int) -> "Parity":
        return cls.EVEN if sign > 0 else cls.ODD


@dataclass(frozen=True)
class TridiagonalBlock:
    parity: Parity
    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def size(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class ExactSpectrum:
    """Merged spectrum of both parity sectors.

    ``energies`` is ascending; ``parities`` holds +1 (even) or -1 (odd) for
    each entry.
    """

    params: ModelParams
    truncation: int
    energies: np.ndarray
    parities: np.ndarray
    converged_count: int

    @property
    def levels(self) -> list[tuple[float, Parity]]:
        return [(float(e), Parity.from_sign(p)) for e, p in zip(self.energies, self.parities)]


def build_parity_block(params: ModelParams, parity: Parity | str, N: int) -> TridiagonalBlock:
    """Truncated tridiagonal block of one parity sector with N Fock states."""
    parity = Parity(parity)
    if N < 2:
        raise ValueError(f"block size must be >= 2, got {N}")
    m = np.arange(N, dtype=float)
    alt = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    diag = m * params.omega + parity.sign * alt * params.delta / 2.0
    offdiag = params.g * np.sqrt(m[1:])
    return TridiagonalBlock(parity, diag, offdiag)


def sturm_count(diag: np.ndarray, offdiag: np.ndarray, x) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``x``.

    Counts negative pivots of the LDL^T factorization of T - x I, vectorized
    over the shifts.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e2 = np.square(offdiag)
    tiny = np.finfo(float).tiny
    q = diag[0] - x
    count = (q < 0).astype(int)
    with np.errstate(over="ignore", divide="ignore"):
        for i in range(1, len(diag)):
            q = np.where(q == 0.0, tiny, q)
            q = diag[i] - x - e2[i - 1] / q
            count += q < 0
    return count


def bisect_lowest(diag: np.ndarray, offdiag: np.ndarray, k: int, tol: float = 0.0) -> np.ndarray:
    """Lowest ``k`` eigenvalues of a symmetric tridiagonal matrix by Sturm bisection."""
    n = len(diag)
    k = min(k, n)
    radius = np.zeros(n)
    radius[:-1] += np.abs(offdiag)
    radius[1:] += np.abs(offdiag)
    lo_bound = float(np.min(diag - radius))
    hi_bound = float(np.max(diag + radius))
    span = max(hi_bound - lo_bound, 1.0)
    lo = np.full(k, lo_bound - 1e-12 * span)
    hi = np.full(k, hi_bound + 1e-12 * span)
    idx = np.arange(k)
    eps = np.finfo(float).eps
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = sturm_count(diag, offdiag, mid)
        # eigenvalue idx lies below mid when more than idx eigenvalues do
        go_left = below > idx
        hi = np.where(go_left, mid, hi)
        lo = np.where(go_left, lo, mid)
        width = hi - lo
        if np.all(width <= np.maximum(tol, 4 * eps * np.maximum(np.abs(lo), np.abs(hi)))):
            break
    return 0.5 * (lo + hi)


def block_eigenvalues(block: TridiagonalBlock, k: int, driver: str = "lapack") -> np.ndarray:
    """Lowest ``k`` eigenvalues of ``block``.

    ``driver="lapack"`` uses LAPACK's bisection (``stebz``) through scipy;
    ``driver="sturm"`` uses the pure numpy bisection in this module.
    """
    k = min(k, block.size)
    if driver == "lapack":
        return eigvalsh_tridiagonal(
            block.diag, block.offdiag, select="i", select_range=(0, k - 1), lapack_driver="stebz"
        )
    if driver == "sturm":
        return bisect_lowest(block.diag, block.offdiag, k)
    raise ValueError(f"unknown driver {driver!r}")


def initial_truncation(params: ModelParams, n_levels: int) -> int:
    return max(64, 8 * n_levels + int(math.ceil(16.0 * params.g_ratio**2)))


def _merged(params: ModelParams, N: int, n_levels: int, driver: str):
    parts = []
    for parity in (Parity.EVEN, Parity.ODD):
        ev = block_eigenvalues(build_parity_block(params, parity, N), n_levels, driver)
        parts.append((ev, np.full(len(ev), parity.sign)))
    energies = np.concatenate([p[0] for p in parts])
    parities = np.concatenate([p[1] for p in parts])
    order = np.lexsort((-parities, energies))
    return energies[order][:n_levels], parities[order][:n_levels]


def exact_spectrum(params: ModelParams, n_levels: int, tol: float = 1e-10, driver: str = "lapack") -> ExactSpectrum:
    """Lowest ``n_levels`` exact energies with parity labels.

    The truncation starts at ``max(64, 8*n_levels + ceil(16 (g/omega)^2))``
    Fock states per sector and doubles until the lowest ``n_levels`` merged
    energies move by less than ``tol``.

    Raises
    ------
    ConvergenceError
        If the truncation would exceed 16384 without converging.
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1, got {n_levels}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    N = initial_truncation(params, n_levels)
    energies, parities = _merged(params, N, n_levels, driver)
    while True:
        N2 = 2 * N
        if N2 > MAX_TRUNCATION:
            raise ConvergenceError(
                f"exact spectrum not converged to tol={tol} by truncation {MAX_TRUNCATION} "
                f"(delta={params.delta}, omega={params.omega}, g={params.g})"
            )
        e2, p2 = _merged(params, N2, n_levels, driver)
        moved = float(np.max(np.abs(e2 - energies)))
        energies, parities, N = e2, p2, N2
        if moved < tol:
            break
    return ExactSpectrum(params, N, energies, parities, len(energies))


def opposite_parity_gap(spectrum: ExactSpectrum, energy: float) -> tuple[float, float]:
    """Gap between the even and odd levels closest to ``energy``.

    Returns ``(gap, distance)`` where ``distance`` is how far the midpoint
    of that pair sits from ``energy``.
    """
    e, p = spectrum.energies, spectrum.parities
    even = e[p > 0]
    odd = e[p < 0]
    ie = even[np.argmin(np.abs(even - energy))]
    io = odd[np.argmin(np.abs(odd - energy))]
    return float(abs(ie - io)), float(abs(0.5 * (ie + io) - energy))
