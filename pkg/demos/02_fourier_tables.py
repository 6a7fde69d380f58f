"""
The symplectic Fourier transform
================================

Tables are dense arrays of length 4^n indexed by Pauli words.
"""

import numpy as np

from stabtest.fourier import FourierTable, convolve, subspace_sum, symplectic_transform
from stabtest.gf2 import enumerate_subspaces, symplectic_complement

rng = np.random.default_rng(0)
n = 2
f = FourierTable(n, rng.normal(size=4**n))
g = FourierTable(n, rng.normal(size=4**n))

fh = symplectic_transform(f)
# transforming twice returns f / 4^n
print("double transform error:", np.abs(symplectic_transform(fh).values - f.values / 16).max())

# convolution becomes a pointwise product
lhs = symplectic_transform(convolve(f, g)).values
rhs = fh.values * symplectic_transform(g).values
print("convolution error:", np.abs(lhs - rhs).max())

# summing f over T equals |T| times the sum of fhat over the complement of T
worst = max(
    abs(subspace_sum(f, T) - T.size * subspace_sum(fh, symplectic_complement(T)))
    for T in enumerate_subspaces(n)
)
print("duality, worst error over all 67 subspaces:", worst)
