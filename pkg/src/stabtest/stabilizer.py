"""Stabilizer states, brute-force stabilizer fidelity and Weyl sets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fourier import subspace_sum
from .gf2 import (
    PauliVector,
    Subspace,
    enumerate_lagrangians,
    is_lagrangian,
    lagrangian_count,
    random_lagrangian,
    span,
    word_to_text,
)
from .quantum import DensityMatrix, p_table, weyl_coefficients, weyl_matrix

MAX_ENUM_QUBITS = 3
TIE_TOL = 1e-12


@dataclass(frozen=True)
class StabilizerState:
    """A stabilizer pure state: a Lagrangian L plus one sign per basis row of L.

    The state is the common +sign eigenvector of the Weyl operators of the
    canonical generators of L.
    """

    lagrangian: Subspace
    signs: tuple[int, ...]

    def __post_init__(self):
        if not is_lagrangian(self.lagrangian):
            raise ValueError("stabilizer group must be a Lagrangian subspace")
        if len(self.signs) != self.lagrangian.dim or any(s not in (1, -1) for s in self.signs):
            raise ValueError("need one +1/-1 sign per generator")

    @property
    def n(self) -> int:
        return self.lagrangian.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": self.lagrangian.to_json(),
            "signs": list(self.signs),
        }

    @classmethod
    def from_json(cls, data: dict) -> "StabilizerState":
        """Accept any independent commuting generator set, not only the canonical one."""
        n = int(data["n"])
        gens = [PauliVector.from_text(t) for t in data["generators"]]
        signs = [int(s) for s in data["signs"]]
        if any(g.n != n for g in gens) or len(gens) != len(signs):
            raise ValueError("generator list does not match n or signs")
        L = span(gens, n=n)
        if L.dim != len(gens) or not is_lagrangian(L):
            raise ValueError("generators do not form a Lagrangian basis")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        rho = _projector_matrix(n, [g.word for g in gens], signs)
        coeffs = weyl_coefficients(DensityMatrix(n, rho))
        return cls(L, tuple(int(round(coeffs[g])) for g in L.basis))


def _projector_matrix(n: int, gens, signs) -> np.ndarray:
    d = 1 << n
    P = np.eye(d, dtype=complex)
    for g, s in zip(gens, signs):
        P = P @ (np.eye(d) + s * weyl_matrix(PauliVector(n, g))) / 2
    return P


def projector(s: StabilizerState) -> DensityMatrix:
    """|phi><phi| = prod_i (I + s_i W_{g_i}) / 2 over the canonical generators."""
    return DensityMatrix(s.n, _projector_matrix(s.n, s.lagrangian.basis, s.signs))


def _signs_from_index(n: int, k: int) -> tuple[int, ...]:
    # bit i of k (most significant first) set -> generator i has sign -1
    return tuple(-1 if (k >> (n - 1 - i)) & 1 else 1 for i in range(n))


@lru_cache(maxsize=None)
def enumerate_stabilizer_states(n: int) -> tuple[StabilizerState, ...]:
    """Every n-qubit stabilizer state: 6, 60, 1080 for n = 1, 2, 3.

    Ordered by Lagrangian (canonical order) then sign pattern; this order is
    the ``index`` used elsewhere and decides fidelity ties.
    """
    if not 1 <= n <= MAX_ENUM_QUBITS:
        raise ValueError(f"stabilizer enumeration is limited to n <= {MAX_ENUM_QUBITS}")
    return tuple(
        StabilizerState(L, _signs_from_index(n, k))
        for L in enumerate_lagrangians(n)
        for k in range(1 << n)
    )


def stabilizer_state_count(n: int) -> int:
    return (1 << n) * lagrangian_count(n)


def stabilizer_state_at(n: int, index: int) -> StabilizerState:
    states = enumerate_stabilizer_states(n)
    if not 0 <= index < len(states):
        raise ValueError(f"stabilizer index {index} out of range for n={n}")
    return states[index]


def random_stabilizer_state(n: int, rng: np.random.Generator) -> StabilizerState:
    L = random_lagrangian(n, rng)
    return StabilizerState(L, tuple(int(s) for s in rng.choice([1, -1], size=n)))


def _state_vector(P: np.ndarray) -> np.ndarray:
    col = int(np.argmax(np.linalg.norm(P, axis=0)))
    v = P[:, col]
    return v / np.linalg.norm(v)


@lru_cache(maxsize=None)
def _stabilizer_vectors(n: int) -> np.ndarray:
    vecs = np.array([_state_vector(projector(s).matrix) for s in enumerate_stabilizer_states(n)])
    vecs.flags.writeable = False
    return vecs


def overlaps(rho: DensityMatrix) -> np.ndarray:
    """<phi|rho|phi> for every enumerated stabilizer state, in enumeration order."""
    V = _stabilizer_vectors(rho.n)
    return np.einsum("id,de,ie->i", V.conj(), rho.matrix, V).real


def stabilizer_fidelity(rho: DensityMatrix) -> tuple[float, StabilizerState]:
    """Brute-force max_phi <phi|rho|phi> with its argmax (lowest index on ties)."""
    if rho.n > MAX_ENUM_QUBITS:
        raise ValueError(f"brute-force stabilizer fidelity is limited to n <= {MAX_ENUM_QUBITS}")
    ov = overlaps(rho)
    # overlaps equal in exact arithmetic differ by roundoff; treat them as ties
    i = int(np.argmax(ov >= ov.max() - TIE_TOL))
    return float(ov[i]), enumerate_stabilizer_states(rho.n)[i]


def best_on_lagrangian(rho: DensityMatrix, L: Subspace) -> tuple[float, StabilizerState]:
    """Best stabilizer state with stabilizer group L, over all 2^n sign choices.

    The value is at least the p-mass of rho on L.
    """
    if L.n != rho.n or not is_lagrangian(L):
        raise ValueError("best_on_lagrangian needs a Lagrangian subspace of the state's space")
    best = None
    for k in range(1 << L.n):
        s = StabilizerState(L, _signs_from_index(L.n, k))
        val = rho.expectation(_state_vector(projector(s).matrix))
        if best is None or val > best[0] + TIE_TOL:
            best = (val, s)
    return best


def weyl_set(rho: DensityMatrix, tol: float = 1e-6) -> list[PauliVector]:
    """{x : |tr(W_x rho)| >= 1 - tol}; these words always span an isotropic subspace."""
    c = weyl_coefficients(rho)
    return [PauliVector(rho.n, int(w)) for w in np.flatnonzero(np.abs(c) >= 1 - tol)]


def lagrangian_p_mass(rho: DensityMatrix, L: Subspace) -> float:
    return subspace_sum(p_table(rho), L)


def describe(s: StabilizerState) -> str:
    terms = [("+" if sign > 0 else "-") + word_to_text(s.n, g) for g, sign in zip(s.lagrangian.basis, s.signs)]
    return " ".join(terms)

