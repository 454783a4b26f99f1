"""Solver-versus-oracle comparisons shared by the ``verify`` command and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ChannelState, PolicyPoint, SystemConfig, rate_region_bounds
from .oracle import (
    GridSpec,
    bisect_intersection,
    bottleneck_grid_max,
    golden_section_max,
    grid_search,
    mac_curve,
    relay_curve,
)
from .solver import (
    BottleneckInputs,
    alternating_optimize,
    bottleneck_inputs,
    omega_bottleneck,
    optimal_omega_given_theta,
    profile_optimize,
    theta_intersection,
    theta_peak,
)

__all__ = [
    "Instance",
    "ClaimResult",
    "random_instances",
    "check_closed_forms",
    "check_omega_argmax",
    "check_joint_optimum",
    "intersection_formula_check",
]

THETA1_TOL = 1e-9
THETA2_TOL = 1e-8
OMEGA_TOL = 1e-6
OPTIMALITY_TOL = 1e-3
# sum cap counts as binding at a grid point when it is within this many bits
# of the per-user bottleneck (one grid step moves rates by about this much)
BINDING_TOL = 1e-3


@dataclass(frozen=True)
class Instance:
    cfg: SystemConfig
    ch: ChannelState


@dataclass
class ClaimResult:
    name: str
    passed: bool
    max_gap: float
    detail: str = ""
    samples: list = field(default_factory=list, repr=False)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"[{status}] {self.name}: max_gap={self.max_gap:.3e}{extra}"


def random_instances(n: int, seed: int) -> list[Instance]:
    """Draw H1, H2 and P_tot from U[0.1, 10] and eta from U[0.3, 1]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        h1, h2, p = rng.uniform(0.1, 10.0, size=3)
        eta = rng.uniform(0.3, 1.0)
        out.append(Instance(SystemConfig(p_tot=float(p), eta=float(eta)), ChannelState(float(h1), float(h2))))
    return out


def check_closed_forms(instances, seed: int = 0) -> tuple[ClaimResult, ClaimResult]:
    """Compare the crossing and peak closed forms with bisection and golden-section search.

    Each instance contributes one random power split.
    """
    rng = np.random.default_rng(seed)
    gaps1, gaps2 = [], []
    for inst in instances:
        omega = float(rng.uniform(0.05, 0.95))
        b = bottleneck_inputs(omega, inst.cfg, inst.ch)
        f1 = mac_curve(b.q_cap)
        f2 = relay_curve(b.g_gain)
        ref1 = bisect_intersection(f1, f2)
        gaps1.append(abs(theta_intersection(b) - ref1))
        ref2, _ = golden_section_max(f2, 0.0, 1.0, tol=1e-12)
        gaps2.append(abs(theta_peak(b.g_gain) - ref2))
    m1, m2 = max(gaps1), max(gaps2)
    return (
        ClaimResult("theta_intersection vs bisection", m1 <= THETA1_TOL, m1, f"tol={THETA1_TOL:g}", gaps1),
        ClaimResult("theta_peak vs golden-section", m2 <= THETA2_TOL, m2, f"tol={THETA2_TOL:g}", gaps2),
    )


def check_omega_argmax(instances, seed: int = 0, n_grid: int = 100_000) -> ClaimResult:
    """Closed-form power split against a dense omega grid of the per-user bottleneck."""
    rng = np.random.default_rng(seed + 1)
    gaps = []
    for inst in instances:
        theta = float(rng.uniform(0.01, 0.99))
        omega = optimal_omega_given_theta(theta, inst.cfg, inst.ch)
        _, best = bottleneck_grid_max(theta, inst.cfg, inst.ch, n=n_grid)
        gaps.append(best - omega_bottleneck(omega, theta, inst.cfg, inst.ch))
    m = max(gaps)
    return ClaimResult("optimal_omega_given_theta vs omega grid", m <= OMEGA_TOL, m, f"tol={OMEGA_TOL:g}", gaps)


def _sum_cap_binding(policy: PolicyPoint, inst: Instance) -> bool:
    b = rate_region_bounds(policy, inst.cfg, inst.ch)
    return 0.5 * b.sum_cap - min(b.r1_cap, b.r2_cap) <= BINDING_TOL


@dataclass
class JointReport:
    claims: list
    alt_gaps_slack: list
    alt_gaps_binding: list
    exact_gaps_slack: list
    exact_gaps_binding: list
    n_slack: int
    n_binding: int


def check_joint_optimum(instances, grid: GridSpec = GridSpec()) -> JointReport:
    """Alternating and profile optimizers against the 2-D grid oracle.

    Gaps are ``grid maximum - solver rate``: positive when the solver falls
    short of the lattice.
    """
    alt_slack, alt_bind, ex_slack, ex_bind = [], [], [], []
    violations_alt = violations_ex = 0
    worst_excess = -math.inf
    for inst in instances:
        ref = grid_search(inst.cfg, inst.ch, grid)
        alt = alternating_optimize(inst.cfg, inst.ch)
        ex = profile_optimize(inst.cfg, inst.ch)
        ceiling = ref.r_sum + ref.discretization_bound
        violations_alt += alt.r_sum > ceiling
        violations_ex += ex.r_sum > ceiling
        worst_excess = max(worst_excess, alt.r_sum - ceiling, ex.r_sum - ceiling)
        if _sum_cap_binding(ref.policy, inst):
            alt_bind.append(ref.r_sum - alt.r_sum)
            ex_bind.append(ref.r_sum - ex.r_sum)
        else:
            alt_slack.append(ref.r_sum - alt.r_sum)
            ex_slack.append(ref.r_sum - ex.r_sum)

    def worst(xs):
        return max(xs) if xs else 0.0

    def worst_abs(xs):
        return max((abs(x) for x in xs), default=0.0)

    claims = [
        ClaimResult(
            "soundness: solver rate <= grid max + discretization bound",
            violations_alt == 0 and violations_ex == 0,
            max(worst_excess, 0.0),
            f"violations alt={violations_alt} exact={violations_ex}",
        ),
        ClaimResult(
            "alternating within 1e-3 of grid where sum cap is slack",
            worst_abs(alt_slack) <= OPTIMALITY_TOL,
            worst_abs(alt_slack),
            f"n={len(alt_slack)}",
            alt_slack,
        ),
        ClaimResult(
            "exact profile within 1e-3 of grid where sum cap binds",
            worst(ex_bind) <= OPTIMALITY_TOL,
            worst(ex_bind),
            f"n={len(ex_bind)}",
            ex_bind,
        ),
        ClaimResult(
            "exact profile within 1e-3 of grid on all instances",
            worst(ex_bind + ex_slack) <= OPTIMALITY_TOL,
            worst(ex_bind + ex_slack),
            f"n={len(instances)}",
        ),
    ]
    return JointReport(claims, alt_slack, alt_bind, ex_slack, ex_bind, len(alt_slack), len(alt_bind))


def intersection_formula_check(q_cap: float = 2.0, g_gain: float = 1.0):
    """Residual ``|F1 - F2|`` at the implemented crossing and at the variant ``Q/(1+2G)``.

    Returns ``(theta_consistent, residual_consistent, theta_variant, residual_variant)``.
    """
    f1 = mac_curve(q_cap)
    f2 = relay_curve(g_gain)
    t_ok = theta_intersection(BottleneckInputs(q_cap, g_gain, q_cap))
    t_alt = q_cap / (1.0 + 2.0 * g_gain)
    return t_ok, float(abs(f1(t_ok) - f2(t_ok))), t_alt, float(abs(f1(t_alt) - f2(t_alt)))
