"""Juddian points: exact level crossings from the constraint polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import roots_laguerre

from .params import check_finite, check_index
from .polynomials import PolyEvalSettings, normalized_constraint_values

GRID_POINTS = 2048
BRACKET_WIDTH = 1e-13
TANGENT_SCAN_TOL = 1e-10
TANGENT_ROOT_TOL = 1e-12

_SETTINGS = PolyEvalSettings(max_order=96)


class TheoremBoundaryError(ValueError):
    """delta/omega is an even integer, where the crossing count changes."""


@dataclass(frozen=True)
class JuddianPoint:
    n: int
    g_star: float
    delta: float
    omega: float
    energy: float
    residual: float


def _k_of_x(n: int, x, delta_ratio: float):
    return normalized_constraint_values(n, np.sqrt(x), delta_ratio, _SETTINGS)


def scan_upper_bound(n: int, delta_ratio: float) -> float:
    """Right end of the scan in x = (g/omega)^2.

    Largest zero of L_n(4x) padded by delta^2/8 + 1.
    """
    largest = float(np.max(roots_laguerre(n)[0])) / 4.0
    return largest + delta_ratio**2 / 8.0 + 1.0


def _bisect(f, a: float, b: float, fa: float) -> float:
    while b - a > BRACKET_WIDTH:
        c = 0.5 * (a + b)
        if c <= a or c >= b:
            break
        fc = f(c)
        if fc == 0.0:
            return c
        if (fc < 0) == (fa < 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def find_crossings(n: int, delta: float, omega: float = 1.0) -> list[JuddianPoint]:
    """All positive coupling roots of K_n at fixed delta, ascending in g.

    K_n is a polynomial in x = (g/omega)^2. The routine brackets sign changes
    on a uniform x grid, bisects each bracket to width 1e-13 and checks
    near-zero intervals without a sign change for tangential roots.
    """
    n = check_index("n", n)
    delta = check_finite("delta", delta)
    omega = check_finite("omega", omega, positive=True)
    if n == 0:
        return []
    d = delta / omega
    x_max = scan_upper_bound(n, d)
    xs = np.linspace(0.0, x_max, GRID_POINTS + 1)
    vals = _k_of_x(n, xs, d)
    f = lambda x: float(_k_of_x(n, x, d))
    flips = np.signbit(vals[1:]) != np.signbit(vals[:-1])

    roots: list[float] = []
    tangents: list[tuple[float, float]] = []
    for i in range(GRID_POINTS):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fb == 0.0:
            if b > 0.0:
                roots.append(b)
            continue
        if fa == 0.0:
            continue
        if flips[i]:
            roots.append(_bisect(f, a, b, fa))
            continue
        # a tangential root shows up as a tiny |K| away from any sign change
        near_flip = (i > 0 and flips[i - 1]) or (i + 1 < GRID_POINTS and flips[i + 1])
        if near_flip or min(abs(fa), abs(fb)) >= TANGENT_SCAN_TOL:
            continue
        res = minimize_scalar(lambda x: abs(f(x)), bounds=(a, b), method="bounded", options={"xatol": BRACKET_WIDTH})
        if res.fun < TANGENT_ROOT_TOL and res.x > 0.0:
            tangents.append((float(res.x), float(res.fun)))

    # neighbouring intervals can report the same tangency; keep the best of each cluster
    h = xs[1] - xs[0]
    clusters: list[tuple[float, float]] = []
    for x, val in sorted(tangents):
        if clusters and x - clusters[-1][0] < 2 * h:
            if val < clusters[-1][1]:
                clusters[-1] = (x, val)
            continue
        clusters.append((x, val))
    roots.extend(x for x, _ in clusters)

    out = []
    for x in sorted(set(roots)):
        g_ratio = math.sqrt(x)
        if g_ratio <= 0.0:
            continue
        g_star = g_ratio * omega
        out.append(JuddianPoint(
            n=n,
            g_star=g_star,
            delta=delta,
            omega=omega,
            energy=n * omega - g_star**2 / omega,
            residual=abs(f(x)),
        ))
    return out


def expected_crossing_count(n: int, delta: float, omega: float = 1.0) -> int:
    """n - k crossings for 2k < delta/omega < 2(k+1), clamped at zero."""
    n = check_index("n", n)
    d = check_finite("delta", delta) / check_finite("omega", omega, positive=True)
    half = d / 2.0
    if half == math.floor(half) and d > 0:
        raise TheoremBoundaryError(f"delta/omega = {d:g} is an even integer; the crossing count is not defined there")
    return max(0, n - int(math.floor(half)))


def crossing_count_certificate(n: int, delta: float, omega: float = 1.0) -> tuple[int, int]:
    """Return ``(expected, found)``; the certificate passes when they agree."""
    expected = expected_crossing_count(n, delta, omega)
    return expected, len(find_crossings(n, delta, omega))


def zero_coupling_degeneracies(n: int) -> list[float]:
    """Values of delta/omega where pair ``n`` is degenerate at g = 0."""
    n = check_index("n", n)
    return [2.0 * k for k in range(1, n + 1)]
