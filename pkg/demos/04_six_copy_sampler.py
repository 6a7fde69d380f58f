"""
Simulating the six-copy protocol
================================

``measurement`` mode samples every Bell measurement outcome; ``exact`` mode
draws the difference x from q and the SWAP-test sign directly.
"""

import numpy as np

from stabtest.quantum import bias_report, ginibre_state, q_table
from stabtest.sampling import SamplerConfig, bell_difference_sample, estimate_eta

rng = np.random.default_rng(3)
rho = ginibre_state(2, 2, rng)
print("exact eta:", bias_report(rho).eta)

for mode in ("measurement", "exact"):
    est = estimate_eta(rho, SamplerConfig(mode=mode, seed=1, shards=4), 200_000)
    print(f"{mode:>11}: mean {est.mean:.4f} +- {est.std_error:.4f}  (+1: {est.plus}, -1: {est.minus})")

# the XOR of two Bell outcomes follows q
shots = 100_000
words = bell_difference_sample(rho, SamplerConfig(mode="measurement", seed=2), shots)
emp = np.bincount(words, minlength=16) / shots
print("TV(empirical, q) =", 0.5 * np.abs(emp - q_table(rho).values).sum())
