"""
Rate region of a single time-switching relay instance
=====================================================

Evaluate the three rate caps of one channel realization as the switching
factor sweeps from 0 to 1 and see which one limits the fair sum rate.
"""

import numpy as np

from swipt_twr import ChannelState, PolicyPoint, SystemConfig, rate_region_bounds, fair_sum_rate

# one watt shared by the sources, S2 link ten times stronger than S1
cfg = SystemConfig(p_tot=1.0, eta=1.0)
ch = ChannelState(h1_cnr=1.0, h2_cnr=10.0)
omega = 0.85

print(f"{'theta':>6} {'r1_cap':>8} {'r2_cap':>8} {'sum/2':>8} {'fair':>8}  binding")
for theta in np.linspace(0.05, 0.65, 13):
    b = rate_region_bounds(PolicyPoint(theta, omega), cfg, ch)
    caps = {"r1": b.r1_cap, "r2": b.r2_cap, "sum": b.sum_cap / 2}
    r = fair_sum_rate(PolicyPoint(theta, omega), cfg, ch)
    print(f"{theta:6.2f} {b.r1_cap:8.4f} {b.r2_cap:8.4f} {b.sum_cap / 2:8.4f} {r:8.4f}  {min(caps, key=caps.get)}")

# Small theta starves the relay, so a broadcast link binds.  Large theta
# wastes transmission time, and every cap shrinks with the (1 - theta)
# prefactor.  The best switching factor sits where the two regimes meet.
thetas = np.linspace(1e-4, 1 - 1e-4, 20001)
rates = [fair_sum_rate(PolicyPoint(t, omega), cfg, ch) for t in thetas]
k = int(np.argmax(rates))
print(f"\nbest theta on a fine grid: {thetas[k]:.4f} -> {rates[k]:.6f} bits per block")
