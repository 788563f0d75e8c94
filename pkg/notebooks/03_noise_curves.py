"""
Sets under increasing noise
===========================

Start from N copies of one random string and perturb each copy further at
every step. The set measure rises from zero, peaks when the copies are
partly related, and falls back as they become unrelated. The grid is kept
coarse here so the script finishes in well under a minute.
"""

# %%
import numpy as np

from setcx.experiments import (
    ExperimentConfig,
    adjusted_experiment,
    noise_experiment,
    substitution_experiment,
)

# %%
cfg = ExperimentConfig("fig3", N=10, L=500, replicates=3, step_every=50, seed=0)
curve = adjusted_experiment(cfg)
for x, m, s in zip(curve.x, curve.mean, curve.stderr):
    print(f"{int(x):5d} {m:8.1f} +/- {s:5.1f} " + "#" * int(40 * m / curve.mean.max()))

# %%
# Self-calibrating at every step gives a similar shape with a heavier tail.
curve1 = noise_experiment(ExperimentConfig("fig1", N=10, L=500, replicates=3,
                                           step_every=50, seed=0))
print(np.round(curve1.mean, 1))

# %%
# Replacing identical members by random strings one at a time.
sub = substitution_experiment(ExperimentConfig("fig2", N=10, L=500, replicates=3, seed=0))
print(np.round(sub.mean, 1))
print("all random / all identical:", round(sub.extra["endpoint_ratio"], 2))
