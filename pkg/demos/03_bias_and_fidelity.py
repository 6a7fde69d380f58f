"""
Test bias versus stabilizer fidelity
====================================

The six-copy test accepts with probability (1 + eta)/2.  Its bias sits
between F^6 and (3F + 1)/4 in the regime eta > 1/4.
"""

import numpy as np

from stabtest.quantum import DensityMatrix, bias_report, depolarize
from stabtest.stabilizer import describe, projector, stabilizer_fidelity, stabilizer_state_at

# the single-qubit T state
t = DensityMatrix.from_vector(np.array([1, np.exp(1j * np.pi / 4)]) / np.sqrt(2))
F, best = stabilizer_fidelity(t)
print(f"T state: F = {F:.6f} (cos^2(pi/8) = {np.cos(np.pi / 8) ** 2:.6f}), closest: {describe(best)}")
b = bias_report(t)
print(f"         eta = {b.eta:.6f}, eta_gnw = {b.eta_gnw:.6f}, eta' = {b.eta_prime:.6f}")

# the Bell state stabilized by +XX and +ZZ, depolarized: eta tracks F between the two bounds
phi = projector(stabilizer_state_at(2, 32))
print("\n   p      F       F^6     eta    (3F+1)/4")
for p in np.linspace(0, 0.4, 9):
    rho = depolarize(phi, p)
    F, _ = stabilizer_fidelity(rho)
    eta = bias_report(rho).eta
    print(f"{p:5.2f}  {F:.4f}  {F**6:.4f}  {eta:.4f}  {(3 * F + 1) / 4:.4f}")

# on mixed states the two test variants differ
mixed = DensityMatrix.maximally_mixed(1)
print("\nI/2: eta =", bias_report(mixed).eta, "eta_gnw =", bias_report(mixed).eta_gnw)
