"""Conventional (non energy harvesting) two-way relay benchmark."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ChannelState, SystemConfig

__all__ = ["GainReport", "non_eh_msr", "relative_gain", "gain_report"]


@dataclass(frozen=True)
class GainReport:
    r_a: float
    r_b: float
    gain: float


def non_eh_msr(cfg: SystemConfig, ch: ChannelState) -> float:
    """Maximum fair sum rate when the relay is powered from the shared budget.

    With ``p_tot`` optimally split over both sources and the relay, the rate is
    ``log(1 + 2 p_tot / V)`` with ``V = 1/H1 + 1/H2 + max(1/H1, 1/H2)``.
    """
    inv1 = 1.0 / ch.h1_cnr
    inv2 = 1.0 / ch.h2_cnr
    v = inv1 + inv2 + max(inv1, inv2)
    return cfg.block_time * math.log1p(2.0 * cfg.p_tot / v) / cfg.ln_base


def relative_gain(r_a: float, r_b: float) -> float:
    """Normalized gain of scheme A over scheme B; positive when A is better."""
    if r_b == 0:
        raise ValueError("relative gain is undefined for r_b = 0")
    return (r_a - r_b) / r_b


def gain_report(r_a: float, r_b: float) -> GainReport:
    return GainReport(r_a, r_b, relative_gain(r_a, r_b))
