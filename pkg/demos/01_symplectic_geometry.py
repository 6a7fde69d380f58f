"""
Pauli vectors, Lagrangians and isotropic covers
===============================================

Two-qubit Pauli operators are labelled by 4-bit words (x-part, z-part).
"""

from stabtest.gf2 import (
    PauliVector,
    classify,
    enumerate_lagrangians,
    full_space,
    isotropic_cover,
    span,
    symplectic_complement,
    symplectic_product,
    symplectic_gram_schmidt,
    word_to_text,
)

# X on qubit 1 anticommutes with Z on qubit 1, so their product is 1
x1 = PauliVector.from_text("x:10,z:00")
z1 = PauliVector.from_text("x:00,z:10")
print("[X1, Z1] =", symplectic_product(x1, z1))

# a Lagrangian is its own complement: here the stabilizer group of |00>
L = span([PauliVector.from_text("x:00,z:10"), PauliVector.from_text("x:00,z:01")])
print("class:", classify(L), "| complement equals L:", symplectic_complement(L) == L)

# counts: 3, 15, 135 Lagrangians for 1, 2, 3 qubits
for n in (1, 2, 3):
    print(f"n={n}: {len(enumerate_lagrangians(n))} Lagrangians")

# Gram-Schmidt splits a subspace into hyperbolic pairs plus a central part
V = span([x1, z1, PauliVector.from_text("x:01,z:00")])
gs = symplectic_gram_schmidt(V)
print("pairs:", [(word_to_text(2, a), word_to_text(2, b)) for a, b in gs.hyperbolic_pairs])
print("central:", [word_to_text(2, c) for c in gs.central])

# the full two-qubit space is covered by 5 isotropic planes meeting only in 0
for T in isotropic_cover(full_space(2)):
    print("  plane:", T.to_json())
