"""
Pairwise set measures
=====================

Given a set of strings and their pairwise distances, the set measure
weights each pair's d(1-d) by the larger of the two complexities. Sets of
identical strings and sets of unrelated strings both score near zero. Sets
at intermediate distance score highest.
"""

# %%
import numpy as np

from setcx.bitstrings import flip_bits, make_rng, random_bitstring
from setcx.infodist import DistanceMatrix
from setcx.setmeasures import Kernel, calibrated_psi, decomposition, psi

rng = make_rng(1)

# %%
# Uniform distances: psi is d(1-d) times the pairwise complexity total,
# peaking at d = 1/2.
C = rng.uniform(100, 200, 10)
for d in (0.0, 0.25, 0.5, 0.75, 1.0):
    rep = psi(C, DistanceMatrix.uniform(10, d))
    print(f"d={d:.2f}  psi={rep.psi:8.2f}  theta_pair={rep.theta_pair:.1f}")

# %%
# The same number splits into a mean-distance part and a spread part.
D = np.tril(rng.uniform(0, 1, (10, 10)), -1)
D = D + D.T
lam, dsq, p = decomposition(C, D, "xi")
print(f"lambda={lam:.3f}  delta^2={dsq:.3f}  psi={p:.3f}  check={lam * (1 - lam) - dsq:.3f}")

# %%
# Other kernels: plain distance, its complement, and entropy-like variants.
for name in ("d1d", "d", "1d", "dlnd", "1dln1d"):
    print(f"{name:7s} {psi(C, D, kernel=Kernel(name)).psi:8.2f}")

# %%
# End to end on real strings: a calibrated psi for a set of noisy copies.
base = random_bitstring(1000, rng)
noisy = [flip_bits(base, rng.choice(1000, 100, replace=False)) for _ in range(10)]
print("identical", calibrated_psi([base] * 10, rng=2).psi)
print("noisy    ", round(calibrated_psi(noisy, rng=2).psi, 2))
print("random   ", round(calibrated_psi([random_bitstring(1000, rng) for _ in range(10)], rng=2).psi, 2))
