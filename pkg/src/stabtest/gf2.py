"""Linear algebra over the symplectic space F_2^{2n}.

Vectors are packed into a single integer word of 2n bits: the X-part ``a``
occupies the high n bits and the Z-part ``b`` the low n bits, with qubit 1
as the most significant bit of each half.  The same word is the index used
by every dense table in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# element enumeration materialises 2^dim words
MAX_ENUM_DIM = 26


class DimensionError(ValueError):
    """Raised when vectors or subspaces of different qubit counts are mixed."""


@dataclass(frozen=True, order=True)
class PauliVector:
    """An element x = (a, b) of F_2^{2n}, indexing the Weyl operator W_x."""

    n: int
    word: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        if not 0 <= self.word < (1 << (2 * self.n)):
            raise ValueError(f"word {self.word} has bits beyond position {2 * self.n}")

    @classmethod
    def from_parts(cls, n: int, a: int, b: int) -> "PauliVector":
        mask = (1 << n) - 1
        if a & ~mask or b & ~mask:
            raise ValueError("X/Z parts do not fit in n bits")
        return cls(n, (a << n) | b)

    @classmethod
    def from_text(cls, text: str) -> "PauliVector":
        """Parse the ``"x:<a-bits>,z:<b-bits>"`` form, e.g. ``"x:10,z:01"``."""
        try:
            xs, zs = (part.strip() for part in text.split(","))
            if not (xs.startswith("x:") and zs.startswith("z:")):
                raise ValueError
            abits, bbits = xs[2:], zs[2:]
            if len(abits) != len(bbits) or not abits or set(abits + bbits) - {"0", "1"}:
                raise ValueError
        except ValueError:
            raise ValueError(f"malformed Pauli vector text {text!r}") from None
        return cls.from_parts(len(abits), int(abits, 2), int(bbits, 2))

    @property
    def a(self) -> int:
        return self.word >> self.n

    @property
    def b(self) -> int:
        return self.word & ((1 << self.n) - 1)

    def __add__(self, other: "PauliVector") -> "PauliVector":
        _check_n(self.n, other.n)
        return PauliVector(self.n, self.word ^ other.word)

    def __int__(self) -> int:
        return self.word

    def __index__(self) -> int:
        return self.word

    def to_text(self) -> str:
        return f"x:{self.a:0{self.n}b},z:{self.b:0{self.n}b}"

    def __str__(self) -> str:
        return self.to_text()


def _check_n(n1: int, n2: int):
    if n1 != n2:
        raise DimensionError(f"qubit counts differ: {n1} != {n2}")


def word_to_text(n: int, word: int) -> str:
    return PauliVector(n, word).to_text()


def swap_halves(n: int, word):
    """Exchange the X and Z halves; works on ints and integer arrays alike."""
    mask = (1 << n) - 1
    return ((word & mask) << n) | (word >> n)


def sp_word(n: int, u: int, v: int) -> int:
    """Symplectic product of two packed words."""
    return (swap_halves(n, u) & v).bit_count() & 1


def symplectic_product(x: PauliVector, y: PauliVector) -> int:
    """Return [x, y] = a.d + b.c (mod 2) for x = (a, b), y = (c, d)."""
    _check_n(x.n, y.n)
    return sp_word(x.n, x.word, y.word)


_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def popcount(arr) -> np.ndarray:
    """Bit count of a non-negative integer array (words up to 32 bits)."""
    arr = np.asarray(arr, dtype=np.int64)
    total = np.zeros(arr.shape, dtype=np.uint8)
    for shift in range(0, 32, 8):
        total += _POPCOUNT8[(arr >> shift) & 0xFF]
    return total


def parity(arr) -> np.ndarray:
    return popcount(arr) & 1


def sp_matrix(n: int, us, vs) -> np.ndarray:
    """Outer table of symplectic products between two word arrays."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    return parity(swap_halves(n, us)[:, None] & vs[None, :])


# ---------- row reduction over GF(2)

def _rref(rows: Iterable[int]) -> tuple[int, ...]:
    pivots: dict[int, int] = {}
    for v in rows:
        for hb, r in pivots.items():
            if (v >> hb) & 1:
                v ^= r
        if not v:
            continue
        hb = v.bit_length() - 1
        for k in pivots:
            if (pivots[k] >> hb) & 1:
                pivots[k] ^= v
        pivots[hb] = v
    # leading bit descending == pivot column ascending (column 0 is the top bit)
    return tuple(pivots[k] for k in sorted(pivots, reverse=True))


def _reduce(basis: Sequence[int], v: int) -> int:
    for r in basis:
        if (v >> (r.bit_length() - 1)) & 1:
            v ^= r
    return v


def _nullspace(rows: Sequence[int], nbits: int) -> list[int]:
    """Basis of {x : parity(r & x) = 0 for all rows r}."""
    basis = _rref(rows)
    pivot_bits = [r.bit_length() - 1 for r in basis]
    free = [k for k in range(nbits) if k not in pivot_bits]
    out = []
    for f in free:
        x = 1 << f
        for r, p in zip(basis, pivot_bits):
            if (r >> f) & 1:
                x |= 1 << p
        out.append(x)
    return out


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F_2^{2n} held as a canonical RREF basis.

    Two equal subspaces always have identical ``basis`` tuples, so the
    dataclass equality and hash are subspace equality.
    """

    n: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.dim

    def vectors(self) -> list[PauliVector]:
        return [PauliVector(self.n, w) for w in self.basis]

    def elements(self) -> np.ndarray:
        """All 2^dim member words, ascending."""
        if self.dim > MAX_ENUM_DIM:
            raise ValueError(f"refusing to enumerate a subspace of dimension {self.dim}")
        return _elements(self.basis)

    def __contains__(self, x) -> bool:
        return _reduce(self.basis, int(x)) == 0

    def __le__(self, other: "Subspace") -> bool:
        return all(v in other for v in self.basis)

    def to_json(self) -> list[str]:
        return [word_to_text(self.n, w) for w in self.basis]


@lru_cache(maxsize=4096)
def _elements(basis: tuple[int, ...]) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for v in basis:
        out = np.concatenate([out, out ^ v])
    out.sort()
    out.flags.writeable = False
    return out


def span(generators: Iterable, n: int | None = None) -> Subspace:
    """GF(2) span of PauliVectors (or raw words when ``n`` is given)."""
    words = []
    for g in generators:
        if isinstance(g, PauliVector):
            if n is None:
                n = g.n
            _check_n(n, g.n)
        words.append(int(g))
    if n is None:
        raise ValueError("qubit count unknown: pass n for an empty or raw-word generator list")
    limit = 1 << (2 * n)
    if any(not 0 <= w < limit for w in words):
        raise ValueError(f"generator outside F_2^{2 * n}")
    return Subspace(n, _rref(words))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, ())


def full_space(n: int) -> Subspace:
    return Subspace(n, tuple(1 << k for k in reversed(range(2 * n))))


def symplectic_complement(A: Subspace) -> Subspace:
    """A^perp = {x : [x, a] = 0 for every a in A}."""
    n = A.n
    return Subspace(n, _rref(_nullspace([swap_halves(n, v) for v in A.basis], 2 * n)))


def intersection(A: Subspace, B: Subspace) -> Subspace:
    _check_n(A.n, B.n)
    # A cap B = (A^o + B^o)^o with the ordinary dot-product annihilator
    nbits = 2 * A.n
    ann = _nullspace(A.basis, nbits) + _nullspace(B.basis, nbits)
    return Subspace(A.n, _rref(_nullspace(ann, nbits)))


def is_isotropic(A: Subspace) -> bool:
    n = A.n
    return all(sp_word(n, u, v) == 0 for u, v in itertools.combinations(A.basis, 2))


def is_lagrangian(A: Subspace) -> bool:
    return A.dim == A.n and is_isotropic(A)


def is_symplectic(A: Subspace) -> bool:
    # the Gram matrix of the form on A is non-singular
    return intersection(A, symplectic_complement(A)).dim == 0


def classify(A: Subspace) -> str:
    """Return the most specific of "lagrangian", "isotropic", "symplectic", "generic".

    The zero subspace is reported as "isotropic" (it is also trivially
    symplectic); the full space is "symplectic".
    """
    if is_isotropic(A):
        return "lagrangian" if A.dim == A.n else "isotropic"
    if is_symplectic(A):
        return "symplectic"
    return "generic"


@dataclass(frozen=True)
class GramSchmidtDecomposition:
    n: int
    hyperbolic_pairs: tuple[tuple[int, int], ...]
    central: tuple[int, ...]
    source_dim: int

    @property
    def k(self) -> int:
        return len(self.hyperbolic_pairs)

    def generators(self) -> list[int]:
        out = [w for pair in self.hyperbolic_pairs for w in pair]
        return out + list(self.central)


def symplectic_gram_schmidt(V: Subspace) -> GramSchmidtDecomposition:
    """Split V into hyperbolic pairs (x_i, z_i) and a central isotropic part.

    The pairs satisfy [x_i, z_j] = delta_ij with all other products zero, and
    the central vectors span V cap V^perp.
    """
    n = V.n
    rest = list(V.basis)
    pairs = []
    central = []
    while rest:
        v = rest.pop(0)
        j = next((i for i, w in enumerate(rest) if sp_word(n, v, w)), None)
        if j is None:
            central.append(v)
            continue
        w = rest.pop(j)
        rest = [u ^ (v if sp_word(n, u, w) else 0) ^ (w if sp_word(n, u, v) else 0) for u in rest]
        pairs.append((v, w))
    return GramSchmidtDecomposition(n, tuple(pairs), tuple(central), V.dim)


def extend_to_lagrangian(T: Subspace) -> Subspace:
    """Greedily adjoin vectors of T^perp outside T until T is Lagrangian."""
    if not is_isotropic(T):
        raise ValueError("extend_to_lagrangian needs an isotropic subspace")
    n = T.n
    while T.dim < n:
        perp = symplectic_complement(T)
        extra = next(v for v in reversed(perp.basis) if v not in T)
        T = Subspace(n, _rref(T.basis + (extra,)))
    return T


def random_lagrangian(n: int, rng: np.random.Generator) -> Subspace:
    T = zero_subspace(n)
    while T.dim < n:
        perp = symplectic_complement(T)
        coeffs = rng.integers(0, 2, size=perp.dim)
        v = 0
        for c, w in zip(coeffs, perp.basis):
            if c:
                v ^= w
        if v not in T:
            T = Subspace(n, _rref(T.basis + (v,)))
    return T


def random_subspace(n: int, dim: int, rng: np.random.Generator) -> Subspace:
    if not 0 <= dim <= 2 * n:
        raise ValueError(f"dimension {dim} out of range for n={n}")
    basis: tuple[int, ...] = ()
    while len(basis) < dim:
        v = int(rng.integers(1, 1 << (2 * n)))
        if _reduce(basis, v):
            basis = _rref(basis + (v,))
    return Subspace(n, basis)


# ---------- exhaustive enumeration (oracle tier)

def enumerate_subspaces(n: int, dim: int | None = None) -> list[Subspace]:
    """Every subspace of F_2^{2n} (of one dimension, if given), in RREF order.

    Enumerates pivot-column sets and free entries, so keep n <= 3.
    """
    if n > 3:
        raise ValueError("exhaustive subspace enumeration is limited to n <= 3")
    m = 2 * n
    dims = range(m + 1) if dim is None else [dim]
    out = []
    for d in dims:
        for piv in itertools.combinations(range(m), d):
            # free cells: columns right of the row's pivot that are not pivots
            cells = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, m) if c not in piv]
            for bits in itertools.product((0, 1), repeat=len(cells)):
                rows = [1 << (m - 1 - p) for p in piv]
                for (r, c), bit in zip(cells, bits):
                    if bit:
                        rows[r] |= 1 << (m - 1 - c)
                out.append(Subspace(n, tuple(rows)))
    return out


@lru_cache(maxsize=None)
def enumerate_lagrangians(n: int) -> tuple[Subspace, ...]:
    """All Lagrangian subspaces; there are prod_{k<=n} (2^k + 1) of them."""
    return tuple(L for L in enumerate_subspaces(n, n) if is_isotropic(L))


def lagrangian_count(n: int) -> int:
    out = 1
    for k in range(1, n + 1):
        out *= (1 << k) + 1
    return out


def isotropic_cover(S: Subspace) -> list[Subspace]:
    """Cover a symplectic subspace of dimension 2k by 2^k + 1 isotropic k-planes.

    The planes pairwise meet only in 0 and their union is S.  Found by an
    exact-cover search over the Lagrangians of S, so k is limited to 3.
    """
    if S.dim == 0 or not is_symplectic(S):
        raise ValueError("isotropic_cover needs a non-zero symplectic subspace")
    gs = symplectic_gram_schmidt(S)
    k = gs.k
    if k > 3:
        raise ValueError(f"isotropic_cover search is limited to k <= 3, got k={k}")

    def embed(word: int) -> int:
        # standard coordinates (X bits high, Z bits low) -> hyperbolic basis of S
        out = 0
        for i, (x, z) in enumerate(gs.hyperbolic_pairs):
            if (word >> (2 * k - 1 - i)) & 1:
                out ^= x
            if (word >> (k - 1 - i)) & 1:
                out ^= z
        return out

    candidates = []
    for L in enumerate_lagrangians(k):
        elems = frozenset(int(e) for e in L.elements() if e)
        candidates.append((L, elems))
    target = frozenset(range(1, 1 << (2 * k)))

    def search(covered, chosen):
        if covered == target:
            return chosen
        first = min(target - covered)
        for L, elems in candidates:
            if first in elems and not (elems & covered):
                found = search(covered | elems, chosen + [L])
                if found is not None:
                    return found
        return None

    cover = search(frozenset(), [])
    if cover is None:  # pragma: no cover - a spread always exists
        raise RuntimeError("no isotropic cover found")
    return [span([embed(w) for w in L.basis], n=S.n) for L in cover]
