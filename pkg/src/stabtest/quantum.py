"""Density matrices, Weyl operators and the characteristic tables of a state.

For a state rho on n qubits (d = 2^n) the tables, all indexed by the packed
word x = (a, b), are

    p(x)    = tr(W_x rho)^2 / d
    phat(x) = tr(W_x rho W_x rho) / 4^n       (the symplectic transform of p)
    q(x)    = sum_a (-1)^[a, x] p(a)^2        (law of Bell difference sampling)

Every Weyl operator is a phase times a signed permutation,

    (X^a Z^b)[j ^ a, j] = (-1)^popcount(b & j),

so all three tables are computed without forming the 4^n dense operators:
for each X-part ``a`` the sum over j is a Walsh-Hadamard transform in the
Z-part ``b``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fourier import FourierTable, symplectic_transform, walsh_hadamard
from .gf2 import PauliVector, popcount

MAX_QUBITS = 6
STATE_FORMAT = "stabtest-state-v1"

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-9
PSD_TOL = 1e-9


class StateError(ValueError):
    """A matrix or file does not describe a valid density matrix."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated n-qubit density matrix (qubit 1 most significant).

    Construction checks Hermiticity, unit trace and positivity; the stored
    matrix is the exact Hermitian part of the input.
    """

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise StateError(f"n must be in 1..{MAX_QUBITS}, got {self.n}")
        m = np.array(self.matrix, dtype=complex)
        d = 1 << self.n
        if m.shape != (d, d):
            raise StateError(f"expected a {d}x{d} matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StateError("matrix has non-finite entries")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise StateError(f"matrix is not Hermitian (max deviation {herm_err:.3g})")
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr - 1) > TRACE_TOL:
            raise StateError(f"trace is {tr!r}, expected 1")
        lam = np.linalg.eigvalsh(m)[0]
        if lam < -PSD_TOL:
            raise StateError(f"matrix is not positive semidefinite (min eigenvalue {lam:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vector(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        n = len(psi).bit_length() - 1
        return cls(n, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(n, np.eye(1 << n) / (1 << n))

    @property
    def dim(self) -> int:
        return 1 << self.n

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def expectation(self, psi) -> float:
        psi = np.asarray(psi, dtype=complex)
        return float(np.vdot(psi, self.matrix @ psi).real)

    def to_json(self) -> dict:
        return {
            "format": STATE_FORMAT,
            "n": self.n,
            "matrix_re": self.matrix.real.tolist(),
            "matrix_im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DensityMatrix":
        if not isinstance(data, dict) or data.get("format") != STATE_FORMAT:
            raise StateError(f"not a {STATE_FORMAT} document")
        try:
            n = int(data["n"])
            re = np.asarray(data["matrix_re"], dtype=float)
            im = np.asarray(data["matrix_im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise StateError(f"malformed state document: {exc}") from None
        if re.shape != im.shape:
            raise StateError("matrix_re and matrix_im shapes differ")
        return cls(n, re + 1j * im)


def load_state(path) -> DensityMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateError(f"{path}: invalid JSON ({exc})") from None
    return DensityMatrix.from_json(data)


def save_state(rho: DensityMatrix, path):
    Path(path).write_text(json.dumps(rho.to_json()) + "\n")


# ---------- Weyl operators

def _phase_exponents(n: int) -> np.ndarray:
    # exponent of i in W_x, indexed by the packed word
    words = np.arange(4**n, dtype=np.int64)
    return popcount((words >> n) & words) % 4


def weyl_matrix(x: PauliVector) -> np.ndarray:
    """Dense W_x = i^(a.b) prod_j X^{a_j} Z^{b_j}; Hermitian, unitary, squares to I."""
    if x.n > MAX_QUBITS:
        raise ValueError(f"dense Weyl operators are limited to n <= {MAX_QUBITS}")
    d = 1 << x.n
    a, b = x.a, x.b
    j = np.arange(d)
    w = np.zeros((d, d), dtype=complex)
    w[j ^ a, j] = (1j) ** (a & b).bit_count() * (-1.0) ** popcount(b & j)
    return w


def _unpack(op) -> tuple[int, np.ndarray]:
    if isinstance(op, DensityMatrix):
        return op.n, op.matrix
    m = np.asarray(op, dtype=complex)
    d = m.shape[0]
    if m.shape != (d, d) or d < 2 or d & (d - 1):
        raise ValueError(f"expected a 2^n x 2^n matrix, got shape {m.shape}")
    return d.bit_length() - 1, m


def weyl_coefficients(op) -> np.ndarray:
    """tr(W_x H) for every word x, for a state or any Hermitian matrix H."""
    n, m = _unpack(op)
    j = np.arange(1 << n)
    # V[a, j] = H[j, j ^ a]; tr(X^a Z^b H) = sum_j (-1)^(b.j) V[a, j]
    V = m[j[None, :], j[None, :] ^ j[:, None]]
    T = walsh_hadamard(V).reshape(-1)
    return ((1j) ** _phase_exponents(n) * T).real


def p_table(rho: DensityMatrix) -> FourierTable:
    """p(x) = tr(W_x rho)^2 / 2^n; sums to the purity, p(0) = 2^-n."""
    c = weyl_coefficients(rho)
    return FourierTable(rho.n, c * c / rho.dim)


def conjugation_traces(op) -> np.ndarray:
    """tr(W_x H W_x H) for every word x, for a state or any Hermitian matrix H."""
    n, m = _unpack(op)
    d = 1 << n
    k = np.arange(d)
    R1 = m[k[:, None], k[:, None] ^ k[None, :]]  # R1[k, s] = H[k, k^s]
    Hs = np.empty((d, d), dtype=complex)
    for a in range(d):
        # Hs[a, s] = sum_k H[k, k^s] H[k^s^a, k^a]
        R2 = m[k[:, None] ^ k[None, :] ^ a, (k ^ a)[:, None]]
        Hs[a] = (R1 * R2).sum(axis=0)
    return walsh_hadamard(Hs).reshape(-1).real


def p_hat_table(rho: DensityMatrix) -> FourierTable:
    """phat(x) = tr(W_x rho W_x rho) / 4^n, by the conjugation-trace formula.

    Agrees with ``symplectic_transform(p_table(rho))``; entries lie in
    [0, 4^-n] and 2^n * sum(phat) = 1.
    """
    return FourierTable(rho.n, conjugation_traces(rho) / 4**rho.n, "hat")


def hermitian_p_table(H) -> np.ndarray:
    """tr(W_x H)^2 / 2^n for an arbitrary Hermitian matrix."""
    n, _ = _unpack(H)
    c = weyl_coefficients(H)
    return c * c / (1 << n)


def hermitian_p_hat(H) -> np.ndarray:
    """tr(W_x H W_x H) / 4^n for an arbitrary Hermitian matrix."""
    n, _ = _unpack(H)
    return conjugation_traces(H) / 4**n


def _clamp_distribution(q: np.ndarray, what: str) -> np.ndarray:
    if q.min() < -1e-12:
        raise RuntimeError(f"{what} has a negative entry {q.min():.3g} beyond roundoff")
    q = np.where(q < 0, 0.0, q)
    s = q.sum()
    if abs(s - 1) > 1e-12:
        q = q / s
    return q


def q_table(rho: DensityMatrix) -> FourierTable:
    """Bell difference sampling law q, the inverse transform of p^2.

    Tiny negative roundoff is clamped to zero; the result is renormalised
    only when its sum is off by more than 1e-12.
    """
    p = p_table(rho)
    q = 4**rho.n * symplectic_transform(FourierTable(rho.n, p.values**2, "hat")).values
    return FourierTable(rho.n, _clamp_distribution(q, "q table"))


@dataclass(frozen=True)
class BiasReport:
    eta: float
    eta_gnw: float
    eta_prime: float
    purity: float
    eta_from_q: float

    def to_json(self) -> dict:
        return {
            "eta": self.eta,
            "eta_from_q": self.eta_from_q,
            "eta_gnw": self.eta_gnw,
            "eta_prime": self.eta_prime,
            "purity": self.purity,
        }


def bias_report(rho: DensityMatrix) -> BiasReport:
    """The three bias functionals of a state.

    eta = 4^n sum p^3 (also evaluated as 4^n sum q phat), the mean of the
    six-copy test; eta_gnw = 2^n sum q p, the older test's bias, which only
    coincides with eta on pure states; eta_prime = 32^n sum phat^3.
    """
    n = rho.n
    p = p_table(rho).values
    ph = p_hat_table(rho).values
    q = q_table(rho).values
    eta = 4**n * float(np.sum(p**3))
    eta_q = 4**n * float(np.dot(q, ph))
    if abs(eta - eta_q) > 1e-10:
        raise RuntimeError(f"bias evaluations disagree: {eta!r} vs {eta_q!r}")
    return BiasReport(
        eta=eta,
        eta_gnw=2**n * float(np.dot(q, p)),
        eta_prime=32**n * float(np.sum(ph**3)),
        purity=float(p.sum()),
        eta_from_q=eta_q,
    )


# ---------- state generation

STATE_KINDS = ("pure_haar", "mixed_ginibre", "stabilizer", "depolarized_stabilizer", "from_file")


def haar_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    d = 1 << n
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def ginibre_state(n: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    d = 1 << n
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = G @ G.conj().T
    return DensityMatrix(n, m / np.trace(m).real)


def depolarize(rho: DensityMatrix, p: float) -> DensityMatrix:
    if not 0 <= p <= 1:
        raise ValueError(f"depolarizing weight must be in [0, 1], got {p}")
    return DensityMatrix(rho.n, (1 - p) * rho.matrix + p * np.eye(rho.dim) / rho.dim)


def gen_state(kind: str, n: int | None = None, seed: int = 0, *, rank: int | None = None,
              index: int | None = None, p: float | None = None, path=None) -> DensityMatrix:
    """Build a test state, deterministically in (kind, n, seed, parameters).

    kinds
        ``pure_haar``              Haar-random pure state.
        ``mixed_ginibre``          G G^dag / tr, G a 2^n x rank complex Gaussian (rank defaults to 2^n).
        ``stabilizer``             enumerated stabilizer state ``index`` (n <= 3), or a
                                   seeded random one when ``index`` is None.
        ``depolarized_stabilizer`` (1 - p) |phi><phi| + p I / 2^n for the stabilizer above.
        ``from_file``              read and validate a state file at ``path``.
    """
    kind = kind.replace("-", "_")
    if kind == "from_file":
        if path is None:
            raise ValueError("from_file needs a path")
        rho = load_state(path)
        if n is not None and rho.n != n:
            raise StateError(f"file holds an n={rho.n} state, expected n={n}")
        return rho
    if kind not in STATE_KINDS:
        raise ValueError(f"unknown state kind {kind!r}; choose from {', '.join(STATE_KINDS)}")
    if n is None or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in 1..{MAX_QUBITS}, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "pure_haar":
        return DensityMatrix.from_vector(haar_vector(n, rng))
    if kind == "mixed_ginibre":
        rank = (1 << n) if rank is None else rank
        if not 1 <= rank <= 1 << n:
            raise ValueError(f"rank must be in 1..{1 << n}, got {rank}")
        return ginibre_state(n, rank, rng)

    from .stabilizer import projector, random_stabilizer_state, stabilizer_state_at

    s = random_stabilizer_state(n, rng) if index is None else stabilizer_state_at(n, index)
    rho = projector(s)
    if kind == "stabilizer":
        return rho
    if p is None:
        raise ValueError("depolarized_stabilizer needs p")
    return depolarize(rho, p)
