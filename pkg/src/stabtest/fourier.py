"""Dense functions on F_2^{2n} and the symplectic Fourier transform.

The transform is

    fhat(a) = 4^-n * sum_x (-1)^[a, x] f(x).

Since [a, x] is the ordinary dot product of x with ``a`` after swapping its
X and Z halves, fhat is a Walsh-Hadamard transform followed by a half-swap
permutation of the output index.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .gf2 import DimensionError, Subspace, swap_halves


@dataclass(frozen=True)
class FourierTable:
    """A real function on F_2^{2n}, stored as 4^n values in word order.

    ``domain`` is bookkeeping only: "primal" for functions like p or q and
    "hat" for transformed tables.
    """

    n: int
    values: np.ndarray = field(repr=False)
    domain: str = "primal"

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (4**self.n,):
            raise ValueError(f"table for n={self.n} needs {4**self.n} entries, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("table entries must be finite")
        if self.domain not in ("primal", "hat"):
            raise ValueError(f"unknown domain tag {self.domain!r}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    def total(self) -> float:
        return float(self.values.sum())

    def to_json(self) -> list[float]:
        return [float(v) for v in self.values]

    @classmethod
    def from_json(cls, data, domain: str = "primal") -> "FourierTable":
        vals = np.asarray(data, dtype=float)
        n = int(round(np.log(len(vals)) / np.log(4))) if len(vals) else -1
        if n < 1 or 4**n != len(vals):
            raise ValueError(f"table length {len(vals)} is not a power of 4")
        return cls(n, vals, domain)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "a_bits", "b_bits", "value"])
        mask = (1 << self.n) - 1
        for i, v in enumerate(self.values):
            w.writerow([i, f"{i >> self.n:0{self.n}b}", f"{i & mask:0{self.n}b}", repr(float(v))])
        return buf.getvalue()


def _check_same(f: FourierTable, g: FourierTable):
    if f.n != g.n:
        raise DimensionError(f"tables over different spaces: n={f.n} and n={g.n}")


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis.

    out[..., k] = sum_x (-1)^popcount(k & x) v[..., x], by radix-2 butterflies
    on a reshaped view; O(N log N) per row.  Complex input stays complex.
    """
    out = np.array(values, dtype=np.result_type(values, float))
    N = out.shape[-1]
    if N & (N - 1):
        raise ValueError("length must be a power of two")
    lead = out.shape[:-1]
    h = 1
    while h < N:
        view = out.reshape(*lead, -1, 2, h)
        lo = view[..., 0, :].copy()
        view[..., 0, :] += view[..., 1, :]
        view[..., 1, :] = lo - view[..., 1, :]
        h *= 2
    return out


def half_swap_permutation(n: int) -> np.ndarray:
    return swap_halves(n, np.arange(4**n, dtype=np.int64))


def _transform_values(n: int, values: np.ndarray) -> np.ndarray:
    return walsh_hadamard(values)[half_swap_permutation(n)] / 4**n


def symplectic_transform(f: FourierTable) -> FourierTable:
    """Symplectic Fourier transform; applying it twice gives f / 4^n."""
    domain = "hat" if f.domain == "primal" else "primal"
    return FourierTable(f.n, _transform_values(f.n, f.values), domain)


def convolve(f: FourierTable, g: FourierTable) -> FourierTable:
    """(f * g)(x) = 4^-n sum_t f(t) g(t + x), via the Walsh-Hadamard transform."""
    _check_same(f, g)
    N = 4**f.n
    out = walsh_hadamard(walsh_hadamard(f.values) * walsh_hadamard(g.values)) / (N * N)
    return FourierTable(f.n, out, f.domain)


def plancherel_inner(f: FourierTable, g: FourierTable) -> float:
    """4^-n sum_x f(x) g(x), which equals sum_a fhat(a) ghat(a)."""
    _check_same(f, g)
    return float(np.dot(f.values, g.values)) / 4**f.n


def subspace_sum(f: FourierTable, T: Subspace) -> float:
    """Sum of f over the elements of T.

    Duality: this equals |T| times the sum of fhat over T^perp.
    """
    if f.n != T.n:
        raise DimensionError(f"table n={f.n} vs subspace n={T.n}")
    return float(f.values[T.elements()].sum())


def indicator(n: int, word: int = 0) -> FourierTable:
    vals = np.zeros(4**n)
    vals[word] = 1.0
    return FourierTable(n, vals)


def constant(n: int, value: float = 1.0) -> FourierTable:
    return FourierTable(n, np.full(4**n, float(value)))
