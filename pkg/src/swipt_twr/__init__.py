"""Throughput optimization for time-switching SWIPT two-way relaying.

The relay harvests energy from both sources for a fraction ``theta`` of each
block and forwards with it; the sources split a total power budget with
fraction ``omega`` to S1.  The package maximizes the fair (equal-rate) sum
throughput over ``(theta, omega)`` and checks every closed form against
brute-force references.
"""

from .baseline import GainReport, gain_report, non_eh_msr, relative_gain
from .experiments import SweepRow, SweepSpec, cnr_from_beta, emit_csv, read_csv, render_svg, run_sweep
from .model import (
    ChannelState,
    PolicyPoint,
    RatePair,
    RateRegionBounds,
    SystemConfig,
    db_to_linear,
    fair_rate_pair,
    fair_sum_rate,
    fair_sum_rate_array,
    half_capacity,
    harvested_energy,
    rate_region_bounds,
    relay_power,
    source_powers,
)
from .oracle import GridSpec, bisect_intersection, golden_section_max, grid_search
from .solver import (
    BottleneckInputs,
    OptimizationResult,
    alternating_optimize,
    bottleneck_inputs,
    optimal_omega_given_theta,
    profile_optimize,
    sum_rate_given_omega,
    sum_rate_given_omega_exact,
    theta_intersection,
    theta_peak,
)
from .special import WEvaluation, evaluate_w0, lambert_w0

__version__ = "0.1.0"
