import math

import numpy as np
import pytest

from swipt_twr.model import ChannelState, PolicyPoint, SystemConfig, fair_sum_rate
from swipt_twr.oracle import (
    GridSpec,
    bisect_intersection,
    column_grid_max,
    golden_section_max,
    grid_search,
    mac_curve,
    relay_curve,
)

ASYM = (SystemConfig(p_tot=1.0, eta=1.0), ChannelState(1.0, 10.0))


@pytest.mark.parametrize("q, g, expected", [(2.0, 1.0, 0.5), (1.0, 1.0, 1 / 3)])
def test_bisect_curve_crossings(q, g, expected):
    assert bisect_intersection(mac_curve(q), relay_curve(g)) == pytest.approx(expected, abs=1e-12)


def test_bisect_synthetic_lines():
    assert bisect_intersection(lambda t: 1 - t, lambda t: 3 * t) == pytest.approx(0.25, abs=1e-15)


def test_bisect_reports_no_crossing():
    assert bisect_intersection(lambda t: 3.0 - t, lambda t: 0.5 * t) is None


def test_bisect_requires_positive_start():
    with pytest.raises(ValueError):
        bisect_intersection(lambda t: t, lambda t: 1.0)


def test_golden_quadratic():
    x, fx = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("g, expected", [(1.0, 0.56437658856039980), (0.5, 1 - math.exp(-1))])
def test_golden_relay_peak(g, expected):
    x, _ = golden_section_max(relay_curve(g), 0.0, 1.0, tol=1e-12)
    assert x == pytest.approx(expected, abs=1e-9)


def test_golden_rejects_empty_interval():
    with pytest.raises(ValueError):
        golden_section_max(lambda x: x, 1.0, 1.0)


def test_curves_carry_units():
    f1 = mac_curve(3.0, block_time=2.0, log_base=math.e)
    assert float(f1(0.5)) == pytest.approx(0.5 * math.log(4.0), rel=1e-15)
    assert float(relay_curve(1.0)(1.0)) == 0.0


def test_grid_tiny_power():
    res = grid_search(SystemConfig(p_tot=1e-12), ChannelState(1.0, 1.0), GridSpec(51, 51))
    assert res.r_sum < 1e-11


def test_grid_symmetric_instance():
    cfg = SystemConfig(p_tot=2.0, eta=1.0)
    ch = ChannelState(1.0, 1.0)
    grid = GridSpec(401, 401)
    res = grid_search(cfg, ch, grid)
    mirrored = fair_sum_rate(PolicyPoint(res.policy.theta, 1 - res.policy.omega), cfg, ch)
    # the sum cap binds here, leaving a plateau of optimal splits symmetric about 1/2
    assert mirrored == pytest.approx(res.r_sum, abs=1e-12)
    at_half = fair_sum_rate(PolicyPoint(res.policy.theta, 0.5), cfg, ch)
    assert at_half == pytest.approx(res.r_sum, abs=1e-12)
    assert res.method == "grid"
    assert res.discretization_bound > 0


def test_grid_golden_fixture():
    res = grid_search(*ASYM)
    assert res.policy.theta == pytest.approx(0.149000702, abs=1e-9)
    assert res.policy.omega == pytest.approx(0.843499313, abs=1e-9)
    assert res.r_sum == pytest.approx(0.7508997710032361, abs=1e-13)
    assert res.discretization_bound == pytest.approx(0.00283, abs=1e-4)


def test_grid_refinement_converges():
    values = [grid_search(*ASYM, GridSpec(n, n)).r_sum for n in (101, 401, 1601)]
    exact = 0.7510387994
    gaps = [exact - v for v in values]
    assert all(g >= -1e-9 for g in gaps)
    assert gaps[2] < gaps[0]
    assert gaps[2] < 1e-3


def test_grid_chunking_is_deterministic():
    grid = GridSpec(257, 131)
    results = [grid_search(*ASYM, grid, chunk=c) for c in (1, 7, 128, 1000)]
    assert len({(r.policy, r.r_sum) for r in results}) == 1


def test_grid_bound_covers_true_optimum():
    exact = 0.7510387994
    for n in (51, 201):
        res = grid_search(*ASYM, GridSpec(n, n))
        assert exact <= res.r_sum + res.discretization_bound


def test_column_grid_max_symmetric():
    theta, value = column_grid_max(0.5, SystemConfig(p_tot=2.0), ChannelState(1.0, 1.0), n=10001)
    vals = [fair_sum_rate(PolicyPoint(t, 0.5), SystemConfig(p_tot=2.0), ChannelState(1.0, 1.0))
            for t in np.linspace(0.01, 0.99, 99)]
    assert value >= max(vals)


@pytest.mark.parametrize("kwargs", [dict(n_theta=2), dict(n_omega=1), dict(margin=0.0), dict(margin=0.5)])
def test_grid_spec_validation(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)
