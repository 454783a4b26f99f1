"""Closed-form optimization of the fair-rate sum throughput.

The problem is split along its two decision variables:

* for a fixed switching factor ``theta`` the per-user bottleneck is the
  minimum of three linear functions of ``omega`` and its maximizer has a
  three-branch closed form (:func:`optimal_omega_given_theta`);
* for a fixed power split ``omega`` the rate is ``max_theta min(F1, F2)``,
  with ``F1`` linear and decreasing and ``F2`` unimodal, so the optimum is
  either their crossing ``theta1`` or the peak ``theta2`` of ``F2``
  (:func:`sum_rate_given_omega`).

:func:`alternating_optimize` iterates the two steps.  Because neither step
looks at the MAC sum-rate cap and the objective is a pointwise minimum, the
alternation can stop at a kink below the joint optimum.
:func:`profile_optimize` instead maximizes the exact column maximum
:func:`sum_rate_given_omega_exact` over ``omega`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ChannelState, PolicyPoint, SystemConfig, fair_sum_rate, source_powers
from .special import lambert_w0

__all__ = [
    "BottleneckInputs",
    "OptimizationResult",
    "bottleneck_inputs",
    "omega_bottleneck",
    "optimal_omega_given_theta",
    "theta_intersection",
    "theta_peak",
    "sum_rate_given_omega",
    "sum_rate_given_omega_exact",
    "alternating_optimize",
    "profile_optimize",
]

_OMEGA_FLOOR = 1e-15
_PEAK_SINGULAR = 1e-9
_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class BottleneckInputs:
    """Per-``omega`` constants of the rate-vs-``theta`` problem.

    ``q_cap`` is ``min(H1 P1, H2 P2)``, ``g_gain`` is
    ``min(H1, H2) * eta * (H1 P1 + H2 P2)`` and ``s_sum`` is
    ``H1 P1 + H2 P2``, the SNR argument of the MAC sum cap.
    """

    q_cap: float
    g_gain: float
    s_sum: float

    def __post_init__(self):
        if self.q_cap < 0 or self.g_gain < 0:
            raise ValueError("q_cap and g_gain must be nonnegative")
        if self.s_sum < self.q_cap:
            raise ValueError("s_sum must be at least q_cap")


@dataclass(frozen=True)
class OptimizationResult:
    policy: PolicyPoint
    r_sum: float
    iterations: int
    converged: bool
    method: str
    history: tuple[float, ...] = field(default=(), repr=False)
    # grid only: estimated gap between the lattice maximum and the true maximum
    discretization_bound: float | None = None


def bottleneck_inputs(omega: float, cfg: SystemConfig, ch: ChannelState) -> BottleneckInputs:
    p1, p2 = source_powers(omega, cfg)
    a1 = ch.h1_cnr * p1
    a2 = ch.h2_cnr * p2
    s = a1 + a2
    return BottleneckInputs(q_cap=min(a1, a2), g_gain=ch.h_min * cfg.eta * s, s_sum=s)


def omega_bottleneck(omega: float, theta: float, cfg: SystemConfig, ch: ChannelState) -> float:
    """Per-user SNR bottleneck ``min(f1, f2, f_r)`` at ``(theta, omega)``, sum cap excluded."""
    h1, h2, p = ch.h1_cnr, ch.h2_cnr, cfg.p_tot
    big_omega = ch.h_min * 2.0 * cfg.eta * theta / (1.0 - theta)
    f1 = h1 * p * omega
    f2 = h2 * p * (1.0 - omega)
    fr = big_omega * p * (h2 + omega * (h1 - h2))
    return min(f1, f2, fr)


def optimal_omega_given_theta(theta: float, cfg: SystemConfig, ch: ChannelState) -> float:
    """Power split maximizing the per-user bottleneck at a fixed ``theta``.

    Above the threshold ``1 / (4 min(H1,H2) eta + 1)`` the relay link is never
    the bottleneck and the split equalizes ``H1 P1 = H2 P2``.  Below it the
    relay link crosses the weaker source link first.
    """
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    h1, h2, eta = ch.h1_cnr, ch.h2_cnr, cfg.eta
    hm = ch.h_min
    c = 2.0 * hm * eta * theta
    if theta < 1.0 / (4.0 * hm * eta + 1.0):
        if h2 > h1:
            omega = 2.0 * h2 * hm * eta * theta / (h1 * (1.0 - theta) + c * (h2 - h1))
        else:
            omega = h2 * (1.0 - theta - c) / (h2 * (1.0 - theta) + c * (h1 - h2))
    else:
        omega = h2 / (h1 + h2)
    return min(max(omega, _OMEGA_FLOOR), 1.0 - _OMEGA_FLOOR)


def theta_intersection(inputs: BottleneckInputs) -> float:
    """Crossing of the MAC-limited line ``F1`` and the relay-limited curve ``F2``.

    Solves ``Q = 2 G theta / (1 - theta)``, i.e. ``theta1 = Q / (Q + 2G)``.
    """
    q, g = inputs.q_cap, inputs.g_gain
    if q == 0.0:
        return 0.0
    if g <= 0.0:
        raise ValueError(f"g_gain must be positive, got {g}")
    return q / (q + 2.0 * g)


def theta_peak(g_gain: float) -> float:
    """Maximizer of ``F2(theta) = (1 - theta) log(1 + 2 G theta / (1 - theta))``.

    Setting the derivative to zero and substituting ``m = 1 + (2G - 1) theta``
    gives ``m = 2G / (W0((2G - 1)/e) + 1)``.  At ``2G = 1`` the expression is
    0/0 and the limit ``1 - 1/e`` is returned.
    """
    g = float(g_gain)
    if not g > 0.0:
        raise ValueError(f"g_gain must be positive, got {g}")
    d = 2.0 * g - 1.0
    if abs(d) <= _PEAK_SINGULAR:
        return 1.0 - _INV_E
    w = lambert_w0(d * _INV_E)
    m = 2.0 * g / (w + 1.0)
    return (m - 1.0) / d


def _theta_star(q: float, g: float) -> float:
    if q == 0.0:
        return 0.0
    t1 = q / (q + 2.0 * g)
    t2 = theta_peak(g)
    return t1 if t1 <= t2 else t2


def sum_rate_given_omega(omega: float, cfg: SystemConfig, ch: ChannelState) -> tuple[float, float]:
    """Switching factor for a fixed power split and the resulting sum rate.

    ``theta*`` maximizes ``min(F1, F2)``; the MAC sum cap is applied to the
    rate afterwards but does not influence the choice of ``theta*``.

    Returns
    -------
    (theta_star, r_sum)
    """
    if not (0.0 < omega < 1.0):
        raise ValueError(f"omega must lie in (0, 1), got {omega}")
    b = bottleneck_inputs(omega, cfg, ch)
    q, g, s = b.q_cap, b.g_gain, b.s_sum
    scale = cfg.block_time / cfg.ln_base
    if q == 0.0:
        return 0.0, 0.0
    t1 = theta_intersection(b)
    t2 = theta_peak(g)
    if t1 <= t2:
        theta = t1
        link = (1.0 - t1) * math.log1p(q)
    else:
        theta = t2
        link = (1.0 - t2) * math.log1p(2.0 * g * t2 / (1.0 - t2))
    mac = 0.5 * (1.0 - theta) * math.log1p(s)
    return theta, scale * min(link, mac)


def sum_rate_given_omega_exact(omega: float, cfg: SystemConfig, ch: ChannelState) -> tuple[float, float]:
    """Exact column maximum of the fair sum rate over ``theta`` at fixed ``omega``.

    The sum cap ``(1-theta)/2 log(1+S)`` equals ``(1-theta) log(1 + sqrt(1+S) - 1)``,
    so it folds into the crossing line by replacing ``Q`` with
    ``min(Q, sqrt(1+S) - 1)``.
    """
    if not (0.0 < omega < 1.0):
        raise ValueError(f"omega must lie in (0, 1), got {omega}")
    b = bottleneck_inputs(omega, cfg, ch)
    q_eff = min(b.q_cap, b.s_sum / (math.sqrt(1.0 + b.s_sum) + 1.0))
    if q_eff == 0.0:
        return 0.0, 0.0
    g = b.g_gain
    theta = _theta_star(q_eff, g)
    snr = min(q_eff, 2.0 * g * theta / (1.0 - theta))
    return theta, cfg.block_time * (1.0 - theta) * math.log1p(snr) / cfg.ln_base


def alternating_optimize(
    cfg: SystemConfig,
    ch: ChannelState,
    *,
    exact_theta: bool = False,
    max_iter: int = 1000,
) -> OptimizationResult:
    """Alternate the closed-form ``omega`` and ``theta`` updates from ``theta = 1/2``.

    Stops when two successive sum rates differ by at most ``cfg.epsilon``.
    The reported rate is re-evaluated at the final policy, so it is always
    achievable.  Hitting ``max_iter`` returns ``converged=False``.
    """
    theta_step = sum_rate_given_omega_exact if exact_theta else sum_rate_given_omega
    theta = 0.5
    omega = 0.5
    r_pre = 0.0
    history: list[float] = []
    converged = False
    for _ in range(max_iter):
        omega = optimal_omega_given_theta(theta, cfg, ch)
        theta, r_cur = theta_step(omega, cfg, ch)
        history.append(r_cur)
        if abs(r_cur - r_pre) <= cfg.epsilon:
            converged = True
            break
        r_pre = r_cur
    policy = PolicyPoint(theta, omega)
    return OptimizationResult(
        policy=policy,
        r_sum=fair_sum_rate(policy, cfg, ch),
        iterations=len(history),
        converged=converged,
        method="alternating",
        history=tuple(history),
    )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def profile_optimize(
    cfg: SystemConfig,
    ch: ChannelState,
    *,
    n_scan: int = 2001,
    xtol: float = 1e-13,
) -> OptimizationResult:
    """Maximize the exact column maximum over ``omega``.

    A uniform scan brackets the best split, then golden-section refinement
    polishes it inside the neighbouring scan cells.
    """
    def profile(w: float) -> float:
        return sum_rate_given_omega_exact(w, cfg, ch)[1]

    margin = 1e-9
    ws = np.linspace(margin, 1.0 - margin, n_scan)
    vals = [profile(w) for w in ws]
    i = int(np.argmax(vals))
    a = ws[max(i - 1, 0)]
    b = ws[min(i + 1, n_scan - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = profile(c), profile(d)
    evals = n_scan + 2
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = profile(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = profile(d)
        evals += 1
    candidates = [(vals[i], ws[i]), (fc, c), (fd, d)]
    _, omega = max(candidates)
    theta, _ = sum_rate_given_omega_exact(omega, cfg, ch)
    policy = PolicyPoint(theta, omega)
    return OptimizationResult(
        policy=policy,
        r_sum=fair_sum_rate(policy, cfg, ch),
        iterations=evals,
        converged=True,
        method="exact-theta",
    )
