"""
Random Boolean networks near criticality
========================================

Random Boolean networks with k inputs per node and output bias p are
ordered when 2kp(1-p) < 1 and chaotic above it. The set measure of a short
trajectory is largest near the boundary. The small sweep below is noisy
and its peak sits a little on the chaotic side; larger networks tighten it.
"""

# %%
import numpy as np

from setcx.rbn import SweepConfig, critical_bias, generate_network, lyapunov, sweep, trajectory

p_lo, p_hi = critical_bias(3)
print("critical p for k=3:", round(p_lo, 4), "and", round(p_hi, 4))

# %%
net = generate_network(20, 3, 0.3, rng=0)
t = trajectory(net, rng=1, burn_in=10, length=8)
for row in t.states:
    print("".join(".#"[b] for b in row))

# %%
cfg = SweepConfig(n=200, k=3, p_min=0.05, p_max=0.5, p_step=0.05, networks_per_p=4, seed=0)
rows = sweep(cfg)
for r in rows:
    print(f"p={r.p:.2f} lambda={r.lam:+.2f} psi={r.mean_psi:7.1f} +/- {r.std_psi:6.1f}")
best = max(rows, key=lambda r: r.mean_psi)
print("peak at p =", round(best.p, 2), "lambda =", round(lyapunov(3, best.p), 3))
