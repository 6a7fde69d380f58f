"""Named numerical checks of the identities and inequalities behind the test.

Each check evaluates a list of *slacks* over enumerated structures and seeded
random instances.  An inequality lhs >= rhs contributes ``lhs - rhs``; an
identity contributes ``-|lhs - rhs|``; a combinatorial property contributes
0 (holds) or -1 (violated).  An instance fails when its slack is below
``-tolerance``.

Lemmas stated for an arbitrary function f (under hypotheses such as
0 <= f <= 2^-n and sum f <= 1, or fhat >= 0) are run both on tables derived
from states and on synthetic random tables meeting exactly those hypotheses.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .fourier import FourierTable, convolve, plancherel_inner, symplectic_transform
from .gf2 import (
    enumerate_lagrangians,
    enumerate_subspaces,
    intersection,
    is_isotropic,
    is_symplectic,
    random_subspace,
    sp_matrix,
    sp_word,
    span,
    symplectic_complement,
    symplectic_gram_schmidt,
    isotropic_cover,
)
from .quantum import (
    DensityMatrix,
    bias_report,
    depolarize,
    ginibre_state,
    haar_vector,
    hermitian_p_hat,
    hermitian_p_table,
    p_hat_table,
    p_table,
    q_table,
)
from .sampling import SamplerConfig, estimate_eta
from .stabilizer import best_on_lagrangian, overlaps, projector, random_stabilizer_state

FLOAT_TOL = 1e-10
EXACT_TOL = 0.0
DEFAULT_TRIALS = 50
SAMPLER_SHOTS = 20_000


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    n: int
    instances: int
    failures: int
    worst_slack: float
    tolerance: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "check_name": self.check_name,
            "n": self.n,
            "instances": self.instances,
            "failures": self.failures,
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[int, int, np.random.Generator], Iterator[float]]
    max_n: int
    tolerance: float
    summary: str


REGISTRY: dict[str, Check] = {}


def _register(name: str, max_n: int, summary: str, tolerance: float = FLOAT_TOL):
    def deco(fn):
        REGISTRY[name] = Check(name, fn, max_n, tolerance, summary)
        return fn
    return deco


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


# ---------- instance generators

STATE_KINDS = ("pure", "rank2", "full_rank", "depolarized_stabilizer")


def random_states(n: int, trials: int, rng: np.random.Generator) -> Iterator[DensityMatrix]:
    """Cycle through pure, rank-2, full-rank and depolarized stabilizer states."""
    for t in range(trials):
        kind = STATE_KINDS[t % len(STATE_KINDS)]
        if kind == "pure":
            yield DensityMatrix.from_vector(haar_vector(n, rng))
        elif kind == "rank2":
            yield ginibre_state(n, min(2, 1 << n), rng)
        elif kind == "full_rank":
            yield ginibre_state(n, 1 << n, rng)
        else:
            yield depolarize(projector(random_stabilizer_state(n, rng)), float(rng.random()))


def near_stabilizer_states(n: int, trials: int, rng: np.random.Generator) -> Iterator[DensityMatrix]:
    """States close to a stabilizer state, where the close-regime sets are non-trivial."""
    for t in range(trials):
        phi = projector(random_stabilizer_state(n, rng))
        if t % 2:
            sigma = ginibre_state(n, int(rng.integers(1, (1 << n) + 1)), rng)
        else:
            sigma = DensityMatrix.from_vector(haar_vector(n, rng))
        w = 0.5 * float(rng.random()) ** 2
        yield DensityMatrix(n, (1 - w) * phi.matrix + w * sigma.matrix)


def pure_states(n: int, trials: int, rng: np.random.Generator) -> Iterator[DensityMatrix]:
    for t in range(trials):
        if t % 2:
            yield projector(random_stabilizer_state(n, rng))
        else:
            yield DensityMatrix.from_vector(haar_vector(n, rng))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    d = 1 << n
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (A + A.conj().T) / 2


def bounded_functions(n: int, trials: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Random f with 0 <= f <= 2^-n and sum f <= 1, from spread out to concentrated."""
    N, cap = 4**n, 2.0**-n
    for t in range(trials):
        style = t % 3
        if style == 0:
            f = rng.random(N) * cap
        elif style == 1:
            # near-indicator of a random subset of size about 2^n
            f = np.zeros(N)
            idx = rng.choice(N, size=1 << n, replace=False)
            f[idx] = cap * (1 - 0.3 * rng.random(1 << n))
        else:
            # near-indicator of a random Lagrangian (a maximal-gamma instance)
            L = enumerate_lagrangians(n)[int(rng.integers(len(enumerate_lagrangians(n))))] \
                if n <= 3 else None
            f = rng.random(N) * cap * 0.2
            if L is not None:
                f[L.elements()] = cap * (1 - 0.05 * rng.random(L.size))
        if f.sum() > 1:
            f /= f.sum()
        yield f


def positive_spectrum_functions(n: int, trials: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Random f whose symplectic transform is entrywise non-negative."""
    N = 4**n
    for _ in range(trials):
        g = rng.random(N) * (rng.random(N) < 0.5)
        # transform(transform(g)) = g / 4^n >= 0
        yield 4**n * symplectic_transform(FourierTable(n, g)).values


# ---------- shared helpers

def direct_transform(f: np.ndarray, n: int) -> np.ndarray:
    words = np.arange(4**n)
    signs = 1 - 2 * sp_matrix(n, words, words).astype(float)
    return signs @ f / 4**n


def direct_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    N = len(f)
    t = np.arange(N)
    return np.array([np.dot(f, g[t ^ x]) for x in range(N)]) / N


def triple_correlation(f: np.ndarray) -> float:
    """sum_{x,y} f(x) f(y) f(x+y), as an explicit double sum."""
    N = len(f)
    t = np.arange(N)
    return float(sum(f[x] * np.dot(f, f[t ^ x]) for x in range(N)))


@lru_cache(maxsize=None)
def _subspace_blocks(n: int, only_symplectic: bool = False):
    """Subspaces grouped by dimension as stacked element matrices (with complements)."""
    blocks = []
    subs = enumerate_subspaces(n)
    for d in range(2 * n + 1):
        group = [S for S in subs if S.dim == d and (not only_symplectic or is_symplectic(S))]
        if not group:
            continue
        E = np.array([S.elements() for S in group])
        Ep = np.array([symplectic_complement(S).elements() for S in group])
        blocks.append((d, E, Ep))
    return blocks


def _slack_identity(lhs, rhs) -> Iterator[float]:
    diff = np.abs(np.asarray(lhs, dtype=float) - np.asarray(rhs, dtype=float))
    yield -float(np.max(diff))


def _state_fidelity(rho: DensityMatrix) -> float:
    return float(np.max(overlaps(rho)))


# ---------- Fourier-level checks

@_register("plancherel", 6, "4^-n sum f g equals sum fhat ghat")
def _plancherel(n, trials, rng):
    for rho in random_states(n, trials, rng):
        f = p_table(rho)
        g = FourierTable(n, rng.normal(size=4**n))
        rhs = float(np.dot(symplectic_transform(f).values, symplectic_transform(g).values))
        yield from _slack_identity(plancherel_inner(f, g), rhs)
        yield from _slack_identity(plancherel_inner(f, f), np.sum(p_hat_table(rho).values ** 2))


@_register("convolution_thm", 4, "transform of f*g is the product of transforms")
def _convolution(n, trials, rng):
    for rho in random_states(n, trials, rng):
        f = p_table(rho)
        g = FourierTable(n, rng.normal(size=4**n))
        direct = direct_convolve(f.values, g.values)
        yield from _slack_identity(convolve(f, g).values, direct)
        lhs = direct_transform(direct, n)
        yield from _slack_identity(lhs, direct_transform(f.values, n) * direct_transform(g.values, n))


@_register("duality", 3, "sum over T of f equals |T| times sum over T^perp of fhat, all T")
def _duality(n, trials, rng):
    blocks = _subspace_blocks(n)
    for rho in random_states(n, trials, rng):
        for f in (p_table(rho).values, rng.normal(size=4**n)):
            fh = symplectic_transform(FourierTable(n, f)).values
            for d, E, Ep in blocks:
                lhs = f[E].sum(axis=1)
                rhs = (1 << d) * fh[Ep].sum(axis=1)
                yield from -np.abs(lhs - rhs)


@_register("double_hat", 6, "transforming twice returns f / 4^n", tolerance=1e-12)
def _double_hat(n, trials, rng):
    for rho in random_states(n, trials, rng):
        for f in (p_table(rho), FourierTable(n, rng.normal(size=4**n))):
            twice = symplectic_transform(symplectic_transform(f)).values
            yield from _slack_identity(twice, f.values / 4**n)


# ---------- state-table checks

@_register("p_hat_formula", 5, "tr(W_a H W_a H)/4^n equals the transform of p_H")
def _p_hat_formula(n, trials, rng):
    for rho in random_states(n, trials, rng):
        via_transform = symplectic_transform(p_table(rho)).values
        yield from _slack_identity(p_hat_table(rho).values, via_transform)
        H = random_hermitian(n, rng)
        ref = symplectic_transform(FourierTable(n, hermitian_p_table(H))).values
        scale = max(1.0, float(np.max(np.abs(ref))))
        yield from _slack_identity(hermitian_p_hat(H) / scale, ref / scale)


@_register("p_hat_range_sum", 6, "0 <= phat <= 4^-n and 2^n sum phat = 1")
def _p_hat_range(n, trials, rng):
    for rho in random_states(n, trials, rng):
        ph = p_hat_table(rho).values
        yield float(ph.min())
        yield 4.0**-n - float(ph.max())
        yield from _slack_identity(2**n * ph.sum(), 1.0)


@_register("q_hat", 6, "qhat = p^2 and q = 16^n (phat * phat)")
def _q_hat(n, trials, rng):
    for rho in random_states(n, trials, rng):
        p = p_table(rho).values
        q = q_table(rho)
        yield from _slack_identity(symplectic_transform(q).values, p**2)
        ph = p_hat_table(rho)
        yield from _slack_identity(q.values, 16**n * convolve(ph, ph).values)
        yield float(q.values.min())
        yield from _slack_identity(q.values.sum(), 1.0)


@_register("new_test_identity", 6, "sum q phat = sum p^3 (scaled by 4^n)")
def _new_test(n, trials, rng):
    for rho in random_states(n, trials, rng):
        p, ph, q = p_table(rho).values, p_hat_table(rho).values, q_table(rho).values
        yield from _slack_identity(4**n * np.dot(q, ph), 4**n * np.sum(p**3))


@_register("pure_state_collapse", 6, "phat = p / 2^n on pure states")
def _pure_collapse(n, trials, rng):
    for rho in pure_states(n, trials, rng):
        yield from _slack_identity(p_hat_table(rho).values, p_table(rho).values / 2**n)


@_register("gnw_equals_eta_on_pure", 6, "eta_gnw = eta on pure states")
def _gnw(n, trials, rng):
    for rho in pure_states(n, trials, rng):
        b = bias_report(rho)
        yield from _slack_identity(b.eta_gnw, b.eta)


@_register("eta_prime_sandwich", 6, "eta >= eta' >= eta^2")
def _sandwich(n, trials, rng):
    for rho in random_states(n, trials, rng):
        b = bias_report(rho)
        yield b.eta - b.eta_prime
        yield b.eta_prime - b.eta**2


@_register("linearity", 4, "4^n sum p^3 = 16^n sum_{x,y} phat(x) phat(y) phat(x+y)")
def _linearity(n, trials, rng):
    for rho in random_states(n, trials, rng):
        p, ph = p_table(rho).values, p_hat_table(rho).values
        yield from _slack_identity(4**n * np.sum(p**3), 16**n * triple_correlation(ph))


# ---------- completeness

@_register("p_lower", 3, "p-mass on Weyl(phi) >= <phi|rho|phi>^2 for every stabilizer phi")
def _p_lower(n, trials, rng):
    Ls = enumerate_lagrangians(n)
    for rho in random_states(n, trials, rng):
        p = p_table(rho).values
        masses = np.array([p[L.elements()].sum() for L in Ls])
        ov = overlaps(rho)
        yield from np.repeat(masses, 1 << n) - ov**2


@_register("eta_lower", 3, "eta >= F^6 with brute-force stabilizer fidelity")
def _eta_lower(n, trials, rng):
    for rho in random_states(n, trials, rng):
        yield bias_report(rho).eta - _state_fidelity(rho) ** 6


# ---------- soundness

@_register("fidelity_lower", 2, "best state on L has overlap >= p-mass of L; F >= 2^n phat-mass of L")
def _fidelity_lower(n, trials, rng):
    Ls = enumerate_lagrangians(n)
    for rho in random_states(n, trials, rng):
        p, ph = p_table(rho).values, p_hat_table(rho).values
        F = _state_fidelity(rho)
        for L in Ls:
            E = L.elements()
            best, _ = best_on_lagrangian(rho, L)
            yield best - p[E].sum()
            yield F - 2**n * ph[E].sum()


@_register("many_large_p_hat", 4, "|{x : 2^n f(x) >= gamma/4}| >= (3/4) gamma 2^n")
def _many_large(n, trials, rng):
    def slack(f):
        gamma = 2**n * triple_correlation(f)
        M = np.count_nonzero(2**n * f >= gamma / 4)
        return M - 0.75 * gamma * 2**n

    for rho in random_states(n, trials, rng):
        f = 2**n * p_hat_table(rho).values
        yield slack(f)
    for f in bounded_functions(n, trials, rng):
        yield slack(f)


@_register("proper_subspace_mass", 2, "sum_V f >= sum_V f(. + z) when fhat >= 0, all (V, z)")
def _proper_subspace(n, trials, rng):
    blocks = _subspace_blocks(n)
    Z = np.arange(4**n)

    def slacks(f):
        for _, E, _ in blocks:
            base = f[E].sum(axis=1)
            shifted = f[E[:, None, :] ^ Z[None, :, None]].sum(axis=2)
            yield from (base[:, None] - shifted).ravel()

    for rho in random_states(n, trials, rng):
        yield from slacks(p_table(rho).values)
        yield from slacks(p_hat_table(rho).values)
    for f in positive_spectrum_functions(n, trials, rng):
        yield from slacks(f)


def _symplectic_masses(n, trials, rng, hat: bool):
    blocks = _subspace_blocks(n, only_symplectic=True)
    for rho in random_states(n, trials, rng):
        if hat:
            vals, scale = p_hat_table(rho).values, 4**n
        else:
            vals, scale = p_table(rho).values, 2**n
        for d, E, _ in blocks:
            yield from np.sqrt(2.0**d) - scale * vals[E].sum(axis=1)


@_register("symplectic_upper_hat", 2, "4^n phat-mass of a symplectic A <= sqrt|A|")
def _symp_hat(n, trials, rng):
    yield from _symplectic_masses(n, trials, rng, hat=True)


@_register("symplectic_upper_p", 2, "2^n p-mass of a symplectic A <= sqrt|A|")
def _symp_p(n, trials, rng):
    yield from _symplectic_masses(n, trials, rng, hat=False)


def _cover_ok(S) -> bool:
    k = S.dim // 2
    cover = isotropic_cover(S)
    if len(cover) != (1 << k) + 1:
        return False
    if any(T.dim != k or not is_isotropic(T) or not T <= S for T in cover):
        return False
    if any(intersection(T, U).dim for T, U in itertools.combinations(cover, 2)):
        return False
    union = set().union(*(set(T.elements().tolist()) for T in cover))
    return union == set(S.elements().tolist())


@_register("mub_cover", 3, "symplectic S of dim 2k is covered by 2^k + 1 isotropic k-planes", EXACT_TOL)
def _mub(n, trials, rng):
    if n <= 2:
        subs = [S for S in enumerate_subspaces(n) if S.dim and is_symplectic(S)]
    else:
        subs = []
        while len(subs) < trials:
            S = random_subspace(n, 2 * int(rng.integers(1, 3)), rng)
            if is_symplectic(S):
                subs.append(S)
    for S in subs:
        yield 0.0 if _cover_ok(S) else -1.0


@_register("gram_schmidt", 6, "[x_i, z_j] = delta_ij, other products 0, spans V, centre = V cap V^perp", EXACT_TOL)
def _gram_schmidt(n, trials, rng):
    for _ in range(trials):
        V = random_subspace(n, int(rng.integers(0, 2 * n + 1)), rng)
        gs = symplectic_gram_schmidt(V)
        xs = [x for x, _ in gs.hyperbolic_pairs]
        zs = [z for _, z in gs.hyperbolic_pairs] + list(gs.central)
        ok = all(sp_word(n, x, z) == (i == j) for i, x in enumerate(xs) for j, z in enumerate(zs))
        ok &= all(sp_word(n, u, v) == 0 for u, v in itertools.combinations(xs, 2))
        ok &= all(sp_word(n, u, v) == 0 for u, v in itertools.combinations(zs, 2))
        gens = gs.generators()
        ok &= len(gens) == V.dim and span(gens, n=n) == V
        ok &= span(gs.central, n=n) == intersection(V, symplectic_complement(V))
        ok &= (gs.k == 0) == is_isotropic(V)
        yield 0.0 if ok else -1.0


# ---------- close regime

def _mass_in_M_slack(f, n):
    gamma = 4**n * np.sum(f**3)
    M = 2**n * f > 0.5
    return float(f[M].sum() - (4 * gamma - 1) / 3)


@_register("mass_in_M", 6, "mass of {2^n f > 1/2} >= (4 gamma - 1)/3")
def _mass_in_M(n, trials, rng):
    for rho in itertools.chain(random_states(n, trials, rng), near_stabilizer_states(n, trials, rng)):
        yield _mass_in_M_slack(p_table(rho).values, n)
    for f in bounded_functions(n, trials, rng):
        yield _mass_in_M_slack(f, n)


@_register("m_commute", 6, "{x : 2^n p(x) > 1/2} is pairwise symplectically orthogonal", EXACT_TOL)
def _m_commute(n, trials, rng):
    for rho in itertools.chain(random_states(n, trials, rng), near_stabilizer_states(n, trials, rng)):
        M = np.flatnonzero(2**n * p_table(rho).values > 0.5)
        yield 0.0 if not sp_matrix(n, M, M).any() else -1.0


@_register("close_regime", 3, "F >= (4 eta - 1)/3 whenever eta > 1/4")
def _close_regime(n, trials, rng):
    found = 0
    stream = near_stabilizer_states(n, 50 * trials, rng)
    for rho in stream:
        eta = bias_report(rho).eta
        if eta <= 0.25:
            continue
        yield _state_fidelity(rho) - (4 * eta - 1) / 3
        found += 1
        if found == trials:
            break


# ---------- sampler

@_register("sampler_vs_exact", 4, "six-copy Monte Carlo mean within 4 sigma of eta", EXACT_TOL)
def _sampler(n, trials, rng):
    for t, rho in enumerate(random_states(n, trials, rng)):
        mode = "measurement" if t % 2 and n <= 3 else "exact"
        cfg = SamplerConfig(mode=mode, seed=int(rng.integers(2**63)))
        est = estimate_eta(rho, cfg, SAMPLER_SHOTS)
        yield 4 * est.std_error - abs(est.mean - bias_report(rho).eta)


# ---------- driver

def run_check(name: str, n: int, trials: int = DEFAULT_TRIALS, seed: int = 0) -> CheckReport:
    """Run one registered check; raises KeyError / ValueError on bad name or n."""
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(REGISTRY)}")
    check = REGISTRY[name]
    if not 1 <= n <= check.max_n:
        raise ValueError(f"check {name!r} supports 1 <= n <= {check.max_n}, got n={n}")
    if trials < 1:
        raise ValueError("trials must be positive")
    slacks = np.fromiter(check.run(n, trials, check_rng(seed, name)), dtype=float)
    return CheckReport(
        check_name=name,
        n=n,
        instances=len(slacks),
        failures=int(np.count_nonzero(slacks < -check.tolerance)),
        worst_slack=float(slacks.min()) if len(slacks) else 0.0,
        tolerance=check.tolerance,
        seed=seed,
    )


def run_suite(names=None, n: int = 2, trials: int = DEFAULT_TRIALS, seed: int = 0,
              skip_unsupported: bool = True) -> list[CheckReport]:
    """Run several checks (all registered ones by default), in registry order."""
    names = list(REGISTRY) if names is None else list(names)
    reports = []
    for name in names:
        if skip_unsupported and name in REGISTRY and n > REGISTRY[name].max_n:
            continue
        reports.append(run_check(name, n, trials, seed))
    return reports
