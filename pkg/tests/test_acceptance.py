"""Acceptance criteria, one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v`` to see the lines inline, or
``python3 tests/test_acceptance.py`` for the bare report.
"""

import math
import time

import numpy as np
import pytest

from swipt_twr.cli import cli_main
from swipt_twr.experiments import SweepSpec, run_sweep
from swipt_twr.model import ChannelState, SystemConfig
from swipt_twr.oracle import GridSpec
from swipt_twr.solver import alternating_optimize
from swipt_twr.special import BRANCH_POINT, lambert_w0
from swipt_twr.verification import (
    check_closed_forms,
    check_joint_optimum,
    check_omega_argmax,
    intersection_formula_check,
    random_instances,
)

SEED = 42
N_INSTANCES = 100
THETA1_TOL = 1e-9
THETA2_TOL = 1e-8
CLOSED_FORM_SECONDS = 10.0
JOINT_GRID = 2001
JOINT_TOL = 1e-3
JOINT_SECONDS = 300.0
OMEGA_TOL = 1e-6
OMEGA_GRID = 100_000
CROSSING_RESIDUAL = 1e-10
PRINTED_RESIDUAL = 0.05
W_SAMPLES = 10_000
W_TOL = 1e-12
SWEEP_SECONDS = 30.0
MONOTONE_TOL = -1e-9
CONVERGENCE_INSTANCES = 1000
MAX_ITERATIONS = 100
HISTORY_TOL = 1e-12


_terminal = None


def report(label, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} {label}: {detail}"
    if _terminal is not None:
        _terminal.ensure_newline()
        _terminal.write_line(line)
    else:
        print(line)
    return line


@pytest.fixture(autouse=True)
def _terminal_writer(request):
    # pytest captures stdout; write the report lines straight to its terminal
    global _terminal
    _terminal = request.config.pluginmanager.get_plugin("terminalreporter")
    yield
    _terminal = None


@pytest.fixture(scope="module")
def instances():
    return random_instances(N_INSTANCES, SEED)


@pytest.fixture(scope="module")
def joint(instances):
    start = time.perf_counter()
    rep = check_joint_optimum(instances, GridSpec(JOINT_GRID, JOINT_GRID))
    return rep, time.perf_counter() - start


@pytest.fixture(scope="module")
def default_sweep():
    start = time.perf_counter()
    rows = run_sweep(SweepSpec(eta=1.0))
    return rows, time.perf_counter() - start


def test_c1_closed_forms_match_oracles(instances):
    start = time.perf_counter()
    c1, c2 = check_closed_forms(instances, seed=SEED)
    elapsed = time.perf_counter() - start
    ok = c1.max_gap <= THETA1_TOL and c2.max_gap <= THETA2_TOL and elapsed < CLOSED_FORM_SECONDS
    report("1 closed forms vs oracles", ok,
           f"theta1 gap={c1.max_gap:.2e} (<= {THETA1_TOL:g}), theta2 gap={c2.max_gap:.2e} "
           f"(<= {THETA2_TOL:g}), {elapsed:.1f}s")
    assert ok


def test_c2a_joint_soundness(joint):
    rep, elapsed = joint
    c = rep.claims[0]
    ok = c.passed and elapsed < JOINT_SECONDS
    report("2a no solver beats grid max + discretization bound", ok, f"{c.detail}, {elapsed:.1f}s")
    assert ok


def test_c2b_alternating_matches_grid_where_sum_cap_slack(joint):
    rep, _ = joint
    gaps = [abs(g) for g in rep.alt_gaps_slack]
    worst = max(gaps, default=0.0)
    ok = worst <= JOINT_TOL
    report("2b alternating within 1e-3 of grid, sum cap slack", ok,
           f"n={rep.n_slack} max|gap|={worst:.3e}, {sum(g > JOINT_TOL for g in gaps)} over tolerance")
    assert ok


def test_c2c_exact_closes_binding_gap(joint):
    rep, _ = joint
    alt = rep.alt_gaps_binding
    q = np.quantile(alt, [0.5, 0.9, 1.0]) if alt else [0.0] * 3
    worst = max(rep.exact_gaps_binding, default=0.0)
    ok = worst <= JOINT_TOL
    report("2c exact column max within 1e-3 of grid, sum cap binding", ok,
           f"n={rep.n_binding} exact max gap={worst:.3e}; alternating gap median={q[0]:.3e} "
           f"p90={q[1]:.3e} max={q[2]:.3e}")
    assert ok


def test_c3_omega_argmax(instances):
    c = check_omega_argmax(instances, seed=SEED, n_grid=OMEGA_GRID)
    failures = sum(g > OMEGA_TOL for g in c.samples)
    ok = failures == 0
    report("3 closed-form omega vs 1e5-point grid", ok, f"max shortfall={c.max_gap:.2e}, failures={failures}")
    assert ok


def test_c4_crossing_formula_documented(capsys):
    t1, r1, t_alt, r_alt = intersection_formula_check(2.0, 1.0)
    code = cli_main(["verify", "--instances", "2", "--seed", "1", "--grid", "51"])
    printed = "Q/(1+2G)" in capsys.readouterr().out
    ok = t1 == 0.5 and r1 <= CROSSING_RESIDUAL and abs(t_alt - 2 / 3) < 1e-15 and r_alt > PRINTED_RESIDUAL and printed
    report("4 crossing Q/(Q+2G) vs Q/(1+2G)", ok,
           f"theta1={t1:g} residual={r1:.1e}; variant={t_alt:.4f} residual={r_alt:.3f}; "
           f"verify prints check={printed} (exit {code})")
    assert ok


def test_c5_lambert_w():
    rng = np.random.default_rng(SEED)
    xs = np.concatenate([
        rng.uniform(BRANCH_POINT, 0.0, W_SAMPLES // 4),
        rng.uniform(0.0, 10.0, W_SAMPLES // 4),
        np.exp(rng.uniform(math.log(10.0), math.log(1e6), W_SAMPLES // 4)),
        rng.uniform(BRANCH_POINT, 1e6, W_SAMPLES - 3 * (W_SAMPLES // 4)),
    ])
    worst = 0.0
    for x in xs:
        w = lambert_w0(float(x))
        worst = max(worst, abs(w * math.exp(w) - x) / max(1.0, abs(x)))
    specials = [(0.0, 0.0), (math.e, 1.0), (BRANCH_POINT, -1.0)]
    worst_special = max(abs(lambert_w0(x) - w) for x, w in specials)
    ok = worst <= W_TOL and worst_special <= W_TOL
    report("5 Lambert W residual", ok, f"{len(xs)} samples max scaled residual={worst:.2e}, special cases={worst_special:.1e}")
    assert ok


def test_c6_baseline_dominates(default_sweep):
    rows, elapsed = default_sweep
    bad = sum(r.r_sum_non_eh < r.r_sum_ts for r in rows)
    ok = len(rows) == 441 and bad == 0 and elapsed < SWEEP_SECONDS
    report("6 non-EH >= TS on default sweep", ok, f"{len(rows)} cells, {bad} violations, {elapsed:.1f}s")
    assert ok


def test_c7_monotone_in_beta_and_power(default_sweep):
    rows, _ = default_sweep
    spec = SweepSpec()
    z = np.array([r.r_sum_ts for r in rows]).reshape(spec.beta_db_steps, spec.ptot_dbw_steps)
    d_beta = np.diff(z, axis=0).min()
    d_ptot = np.diff(z, axis=1).min()
    ok = d_beta >= MONOTONE_TOL and d_ptot >= MONOTONE_TOL
    report("7 r_sum_ts nondecreasing", ok, f"min step along beta={d_beta:.3e}, along P_tot={d_ptot:.3e}")
    assert ok


def test_c8_alternating_converges():
    rng = np.random.default_rng(SEED)
    worst_iters, worst_drop, unconverged = 0, 0.0, 0
    for _ in range(CONVERGENCE_INSTANCES):
        h1, h2, p = rng.uniform(0.1, 10.0, 3)
        cfg = SystemConfig(p_tot=float(p), eta=float(rng.uniform(0.3, 1.0)), epsilon=1e-9)
        res = alternating_optimize(cfg, ChannelState(float(h1), float(h2)))
        unconverged += not res.converged
        worst_iters = max(worst_iters, res.iterations)
        drops = [a - b for a, b in zip(res.history, res.history[1:])]
        worst_drop = max([worst_drop, *drops])
    ok = unconverged == 0 and worst_iters <= MAX_ITERATIONS and worst_drop <= HISTORY_TOL
    report("8 alternating convergence", ok,
           f"{CONVERGENCE_INSTANCES} instances, unconverged={unconverged}, max iterations={worst_iters}, "
           f"max decrease={worst_drop:.1e}")
    assert ok


def test_c9_sweep_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = (cli_main(["sweep", "--out", str(a)]), cli_main(["sweep", "--out", str(b), "--workers", "4"]))
    same = a.read_bytes() == b.read_bytes()
    ok = codes == (0, 0) and same
    report("9 repeated sweep byte-identical", ok, f"exit codes={codes}, identical={same}, {a.stat().st_size} bytes")
    assert ok


def test_full_verify_command(capsys):
    start = time.perf_counter()
    code = cli_main(["verify", "--instances", str(N_INSTANCES), "--seed", str(SEED), "--grid", str(JOINT_GRID)])
    out = capsys.readouterr().out
    gap = next(line for line in out.splitlines() if line.startswith("max_gap="))
    ok = code == 0
    report("verify --instances 100 --seed 42 --grid 2001", ok,
           f"exit {code}, {gap}, {time.perf_counter() - start:.1f}s")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
