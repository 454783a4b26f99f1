"""System model of time-switching two-way relaying.

Two sources S1, S2 exchange messages through a decode-and-forward relay that
has no battery: for a fraction ``theta`` of each block it harvests RF energy
from both sources, and spends the remainder split evenly between the
multi-access (MAC) phase and the broadcast (BC) phase.  A fraction ``omega``
of the total source power goes to S1.

All functions are pure; the ``*_array`` variants broadcast over numpy arrays
and are what the grid oracle evaluates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelState",
    "SystemConfig",
    "PolicyPoint",
    "RateRegionBounds",
    "RatePair",
    "half_capacity",
    "harvested_energy",
    "relay_power",
    "source_powers",
    "rate_region_bounds",
    "fair_sum_rate",
    "fair_sum_rate_array",
    "fair_rate_pair",
    "db_to_linear",
]


def db_to_linear(db):
    """Convert decibels (dB or dBW) to a linear ratio (or watts)."""
    if np.ndim(db):
        return 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return 10.0 ** (float(db) / 10.0)


@dataclass(frozen=True)
class ChannelState:
    """Channel-to-noise ratios ``H_i = |h_i|^2`` of the two source-relay links."""

    h1_cnr: float
    h2_cnr: float

    def __post_init__(self):
        for name in ("h1_cnr", "h2_cnr"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def beta(self) -> float:
        """Channel gain ratio H2 / H1."""
        return self.h2_cnr / self.h1_cnr

    @property
    def h_min(self) -> float:
        return min(self.h1_cnr, self.h2_cnr)


@dataclass(frozen=True)
class SystemConfig:
    """Power budget and solver settings.

    ``p_tot`` is in watts, ``eta`` is the energy conversion efficiency and
    ``block_time`` the block length T.  ``epsilon`` is the stopping tolerance
    of the alternating optimizer.
    """

    p_tot: float
    eta: float = 1.0
    block_time: float = 1.0
    log_base: float = 2.0
    epsilon: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.p_tot) and self.p_tot > 0):
            raise ValueError(f"p_tot must be positive, got {self.p_tot}")
        if not (0 < self.eta <= 1):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if not (math.isfinite(self.block_time) and self.block_time > 0):
            raise ValueError(f"block_time must be positive, got {self.block_time}")
        if not (self.log_base > 0 and self.log_base != 1):
            raise ValueError(f"log_base must be positive and != 1, got {self.log_base}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def ln_base(self) -> float:
        return math.log(self.log_base)


@dataclass(frozen=True)
class PolicyPoint:
    """A (theta, omega) decision.

    Solvers only produce interior points.  The closed endpoints are accepted
    so that callers can probe the boundary; rates there take their one-sided
    limits: at theta = 0 the relay has no power, at theta = 1 every cap is zero.
    """

    theta: float
    omega: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if not (0.0 <= self.omega <= 1.0):
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")

    def powers(self, cfg: SystemConfig) -> tuple[float, float]:
        return source_powers(self.omega, cfg)


@dataclass(frozen=True)
class RateRegionBounds:
    r1_cap: float
    r2_cap: float
    sum_cap: float


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    @property
    def total(self) -> float:
        return self.r1 + self.r2


def source_powers(omega: float, cfg: SystemConfig) -> tuple[float, float]:
    """Split ``p_tot`` into ``(P1, P2)``; the two always sum to ``p_tot`` exactly."""
    p1 = cfg.p_tot * omega
    return p1, cfg.p_tot - p1


def half_capacity(x: float, log_base: float = 2.0) -> float:
    """``C(x) = log(1 + x) / 2`` in the given base."""
    if x < 0:
        raise ValueError(f"SNR must be nonnegative, got {x}")
    return 0.5 * math.log1p(x) / math.log(log_base)


def harvested_energy(theta, p1, p2, ch: ChannelState, cfg: SystemConfig) -> float:
    """Energy collected by the relay during the harvesting slot ``theta*T``."""
    if not (0.0 <= theta < 1.0):
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    return (p1 * ch.h1_cnr * cfg.eta + p2 * ch.h2_cnr * cfg.eta) * theta * cfg.block_time


def relay_power(theta, p1, p2, ch: ChannelState, cfg: SystemConfig) -> float:
    """Average relay transmit power when all harvested energy is spent in the BC slot."""
    if not (0.0 <= theta < 1.0):
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    return cfg.eta * (p1 * ch.h1_cnr + p2 * ch.h2_cnr) * 2.0 * theta / (1.0 - theta)


def _region_arrays(theta, omega, cfg: SystemConfig, ch: ChannelState):
    theta = np.asarray(theta, dtype=float)
    omega = np.asarray(omega, dtype=float)
    h1, h2 = ch.h1_cnr, ch.h2_cnr
    p1 = cfg.p_tot * omega
    p2 = cfg.p_tot - p1
    s = h1 * p1 + h2 * p2
    # theta = 1 leaves no time for information transfer: every cap is zero
    open_end = theta < 1.0
    th = np.where(open_end, theta, 0.0)
    pr = 2.0 * cfg.eta * th * s / (1.0 - th)
    k = np.where(open_end, (1.0 - th) * cfg.block_time / 2.0, 0.0) / math.log(cfg.log_base)
    r1 = k * np.minimum(np.log1p(h1 * p1), np.log1p(h2 * pr))
    r2 = k * np.minimum(np.log1p(h2 * p2), np.log1p(h1 * pr))
    rs = k * np.log1p(s)
    return r1, r2, rs


def rate_region_bounds(policy: PolicyPoint, cfg: SystemConfig, ch: ChannelState) -> RateRegionBounds:
    """The three rate caps that delimit the achievable region at ``policy``."""
    r1, r2, rs = _region_arrays(policy.theta, policy.omega, cfg, ch)
    return RateRegionBounds(float(r1), float(r2), float(rs))


def fair_sum_rate_array(theta, omega, cfg: SystemConfig, ch: ChannelState) -> np.ndarray:
    """Vectorised :func:`fair_sum_rate` over broadcastable ``theta``/``omega`` arrays."""
    r1, r2, rs = _region_arrays(theta, omega, cfg, ch)
    return 2.0 * np.minimum(np.minimum(r1, r2), 0.5 * rs)


def fair_sum_rate(policy: PolicyPoint, cfg: SystemConfig, ch: ChannelState) -> float:
    """Largest ``R1 + R2`` inside the rate region subject to ``R1 == R2``."""
    return float(fair_sum_rate_array(policy.theta, policy.omega, cfg, ch))


def fair_rate_pair(policy: PolicyPoint, cfg: SystemConfig, ch: ChannelState) -> RatePair:
    r = 0.5 * fair_sum_rate(policy, cfg, ch)
    return RatePair(r, r)
