"""Brute-force references for the closed-form solver.

Nothing here calls the closed forms in :mod:`swipt_twr.solver`.  The grid
search evaluates the rate-region objective on a lattice; the 1-D references
work on curves rebuilt from the rate definitions and evaluated in extended
precision, so comparisons near a flat maximum are not lost to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from .model import ChannelState, PolicyPoint, SystemConfig, fair_sum_rate_array
from .solver import OptimizationResult

__all__ = [
    "GridSpec",
    "grid_search",
    "column_grid_max",
    "bottleneck_grid_max",
    "bisect_intersection",
    "golden_section_max",
    "mac_curve",
    "relay_curve",
]

_DPS = 40
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    n_theta: int = 2001
    n_omega: int = 2001
    margin: float = 1e-6

    def __post_init__(self):
        if self.n_theta < 3 or self.n_omega < 3:
            raise ValueError("grid needs at least 3 points per axis")
        if not (0.0 < self.margin < 0.5):
            raise ValueError(f"margin must lie in (0, 0.5), got {self.margin}")

    def thetas(self) -> np.ndarray:
        return np.linspace(self.margin, 1.0 - self.margin, self.n_theta)

    def omegas(self) -> np.ndarray:
        return np.linspace(self.margin, 1.0 - self.margin, self.n_omega)


def grid_search(cfg: SystemConfig, ch: ChannelState, grid: GridSpec = GridSpec(), *, chunk: int = 128) -> OptimizationResult:
    """Exhaustive maximization of the fair sum rate over the (theta, omega) lattice.

    Ties resolve to the smallest theta, then the smallest omega.  Rows are
    processed in fixed order, so chunking does not change the result.
    """
    thetas = grid.thetas()
    omegas = grid.omegas()
    best = -math.inf
    bi = bj = 0
    for start in range(0, thetas.size, chunk):
        block = fair_sum_rate_array(thetas[start:start + chunk, None], omegas[None, :], cfg, ch)
        flat = int(np.argmax(block))
        val = float(block.flat[flat])
        if val > best:
            best = val
            bi, bj = divmod(flat, omegas.size)
            bi += start

    # local Lipschitz estimate from the patch around the argmax
    lo_i, hi_i = max(bi - 2, 0), min(bi + 3, thetas.size)
    lo_j, hi_j = max(bj - 2, 0), min(bj + 3, omegas.size)
    patch = fair_sum_rate_array(thetas[lo_i:hi_i, None], omegas[None, lo_j:hi_j], cfg, ch)
    d_theta = np.abs(np.diff(patch, axis=0)).max() if patch.shape[0] > 1 else 0.0
    d_omega = np.abs(np.diff(patch, axis=1)).max() if patch.shape[1] > 1 else 0.0

    return OptimizationResult(
        policy=PolicyPoint(float(thetas[bi]), float(omegas[bj])),
        r_sum=best,
        iterations=1,
        converged=True,
        method="grid",
        discretization_bound=float(d_theta + d_omega),
    )


def column_grid_max(omega: float, cfg: SystemConfig, ch: ChannelState, n: int = 200001, margin: float = 1e-9):
    """Brute-force ``max_theta`` of the fair sum rate at fixed ``omega``. Returns ``(theta, value)``."""
    thetas = np.linspace(margin, 1.0 - margin, n)
    vals = fair_sum_rate_array(thetas, omega, cfg, ch)
    k = int(np.argmax(vals))
    return float(thetas[k]), float(vals[k])


def bottleneck_grid_max(theta: float, cfg: SystemConfig, ch: ChannelState, n: int = 100001):
    """Brute-force maximum over ``omega`` of the per-user SNR bottleneck at fixed ``theta``.

    The bottleneck is rebuilt from the rate region: the two MAC single-user
    SNRs and the weaker BC link fed by the harvested relay power.
    Returns ``(omega, value)``.
    """
    omegas = np.linspace(0.0, 1.0, n)
    p1 = cfg.p_tot * omegas
    p2 = cfg.p_tot - p1
    pr = cfg.eta * (p1 * ch.h1_cnr + p2 * ch.h2_cnr) * 2.0 * theta / (1.0 - theta)
    vals = np.minimum.reduce([ch.h1_cnr * p1, ch.h2_cnr * p2, ch.h2_cnr * pr, ch.h1_cnr * pr])
    k = int(np.argmax(vals))
    return float(omegas[k]), float(vals[k])


def mac_curve(q_cap: float, block_time: float = 1.0, log_base: float = 2.0) -> Callable[[float], mpmath.mpf]:
    """Per-user rate when the MAC single-user link binds: linear and decreasing in theta."""
    def f(theta):
        with mpmath.workdps(_DPS):
            t = mpmath.mpf(theta)
            return (1 - t) * block_time / 2 * mpmath.log(1 + mpmath.mpf(q_cap)) / mpmath.log(log_base)
    return f


def relay_curve(g_gain: float, block_time: float = 1.0, log_base: float = 2.0) -> Callable[[float], mpmath.mpf]:
    """Per-user rate when the relay broadcast binds: zero at 0 and 1, single peak between."""
    def f(theta):
        with mpmath.workdps(_DPS):
            t = mpmath.mpf(theta)
            if t >= 1:
                return mpmath.mpf(0)
            snr = 2 * mpmath.mpf(g_gain) * t / (1 - t)
            return (1 - t) * block_time / 2 * mpmath.log(1 + snr) / mpmath.log(log_base)
    return f


def bisect_intersection(
    f: Callable[[float], float],
    g: Callable[[float], float],
    lo: float = 0.0,
    hi: float = 1.0 - 1e-9,
) -> Optional[float]:
    """Locate the crossing of a decreasing ``f`` and a unimodal ``g`` by bisection.

    ``f - g`` must be positive at ``lo``.  Returns ``None`` when ``f - g``
    is still positive at ``hi``, meaning the curves do not cross in
    ``[lo, hi]``.
    """
    def d(t):
        return f(t) - g(t)

    d_lo = d(lo)
    if not d_lo > 0:
        raise ValueError("f - g must be positive at lo")
    d_hi = d(hi)
    if d_hi > 0:
        return None
    if d_hi == 0:
        return hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        d_mid = d(mid)
        if d_mid == 0:
            return mid
        if d_mid > 0:
            lo, d_lo = mid, d_mid
        else:
            hi, d_hi = mid, d_mid
    return lo if abs(d_lo) <= abs(d_hi) else hi


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12):
    """Golden-section search for the maximum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x_star, f_star)``.  The attainable accuracy in ``x`` is about
    the square root of the relative precision of ``f``; pass an
    extended-precision ``f`` when ``tol`` is below 1e-8.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
