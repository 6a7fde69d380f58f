"""Shot-level simulation of the six-copy test.

One shot of the test:

1. Bell difference sampling (4 copies): measure two fresh pairs rho x rho in
   the Bell basis and add the outcomes, x = x1 + x2.  The law of x is q.
2. Ancilla-free SWAP test (2 copies): measure rho x W_x rho W_x in the Bell
   basis; outcome (v, w) gives (-1)^(v.w), whose mean is 4^n phat(x).

Only two copies are ever measured jointly.  The shot mean estimates
eta = 4^n sum p^3.

Two sampler modes share this structure.  ``measurement`` draws every Bell
outcome from its exact probability; ``exact`` draws x straight from the q
table and the SWAP-test sign as a coin with bias 4^n phat(x).
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .fourier import FourierTable, walsh_hadamard
from .gf2 import DimensionError, PauliVector, parity, word_to_text
from .quantum import DensityMatrix, p_hat_table, q_table, weyl_matrix

MAX_MEASUREMENT_QUBITS = 5
MODES = ("measurement", "exact")
COPIES_PER_SHOT = 6
MAX_JOINT_COPIES = 2


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler mode, master seed and shard count.

    Shard i draws from its own Philox stream keyed by (seed, i), and shots are
    split over shards in a fixed way, so a given (mode, seed, shards) always
    reproduces the same samples.  Changing ``shards`` changes the realised
    stream but not its law.
    """

    mode: str = "exact"
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.shards < 1:
            raise ValueError("shards must be positive")

    def generator(self, shard: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(shard,))
        return np.random.Generator(np.random.Philox(ss))

    def split(self, count: int) -> list[int]:
        base, extra = divmod(count, self.shards)
        return [base + (i < extra) for i in range(self.shards)]


@dataclass(frozen=True)
class EtaEstimate:
    mean: float
    shots: int
    std_error: float
    plus: int
    minus: int

    @property
    def raw_counts(self) -> tuple[int, int]:
        return self.plus, self.minus

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "shots": self.shots,
            "std_error": self.std_error,
            "plus": self.plus,
            "minus": self.minus,
        }


def _run_shards(cfg: SamplerConfig, count: int, work):
    sizes = cfg.split(count)
    jobs = [(i, m) for i, m in enumerate(sizes)]
    if cfg.shards == 1:
        return [work(cfg.generator(0), sizes[0])]
    with ThreadPoolExecutor(max_workers=cfg.shards) as pool:
        return list(pool.map(lambda job: work(cfg.generator(job[0]), job[1]), jobs))


def _cdf(probs: np.ndarray) -> np.ndarray:
    probs = np.where(probs < 0, 0.0, probs)
    c = np.cumsum(probs)
    c /= c[-1]
    c[-1] = 1.0
    return c


def _draw(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    # zero-probability outcomes have empty CDF intervals and are never drawn
    return np.searchsorted(cdf, u, side="right")


def bell_probs(rho: DensityMatrix, sigma: DensityMatrix) -> FourierTable:
    """Outcome law of a Bell-basis measurement of rho x sigma.

    Outcome a labels |Phi_a> = (I x W_a)|Phi>, |Phi> = 2^-n/2 sum_x |x>|x>.
    Its probability is tr(conj(W_a) rho W_a^T sigma^T) / 2^n, evaluated with
    two batched Walsh-Hadamard transforms in O(8^n log) time.
    """
    if rho.n != sigma.n:
        raise DimensionError(f"states on {rho.n} and {sigma.n} qubits")
    n, d = rho.n, rho.dim
    if n > MAX_MEASUREMENT_QUBITS:
        raise ValueError(f"Bell probabilities are limited to n <= {MAX_MEASUREMENT_QUBITS}")
    k = np.arange(d)
    R = rho.matrix[k[:, None], k[:, None] ^ k[None, :]]  # R[k, m] = rho[k, k^m]
    S = sigma.matrix[k[:, None], k[:, None] ^ k[None, :]]
    # corr[m, u] = sum_k R[k, m] S[k^u, m], an XOR correlation along k
    corr = walsh_hadamard(walsh_hadamard(R.T) * walsh_hadamard(S.T)) / d
    probs = walsh_hadamard(corr.T).real.reshape(-1) / d
    if probs.min() < -1e-12:
        raise RuntimeError(f"Bell outcome probability {probs.min():.3g} is negative beyond roundoff")
    # clamp roundoff so that impossible outcomes are exactly impossible
    probs = np.where(probs < 1e-13, 0.0, probs)
    return FourierTable(n, probs / probs.sum())


def conjugate(rho: DensityMatrix, x: int) -> DensityMatrix:
    W = weyl_matrix(PauliVector(rho.n, int(x)))
    return DensityMatrix(rho.n, W @ rho.matrix @ W)


def swap_sign(n: int, words) -> np.ndarray:
    """(-1)^(v.w) for Bell outcomes a = (v, w)."""
    words = np.asarray(words, dtype=np.int64)
    return 1 - 2 * parity((words >> n) & words & ((1 << n) - 1)).astype(np.int64)


class _BellCache:
    def __init__(self, rho: DensityMatrix):
        self.rho = rho
        self._cdfs: dict[int, np.ndarray] = {}

    def cdf(self, x: int) -> np.ndarray:
        if x not in self._cdfs:
            self._cdfs[x] = _cdf(bell_probs(self.rho, conjugate(self.rho, x)).values)
        return self._cdfs[x]

    def prefill(self, xs):
        for x in np.unique(xs):
            self.cdf(int(x))


def _difference_words(rho: DensityMatrix, mode: str, rng, m: int, pair_cdf, q_cdf) -> np.ndarray:
    if mode == "measurement":
        u = rng.random(2 * m)
        return _draw(pair_cdf, u[:m]) ^ _draw(pair_cdf, u[m:])
    return _draw(q_cdf, rng.random(m))


def _check_measurement(rho: DensityMatrix, cfg: SamplerConfig):
    if cfg.mode == "measurement" and rho.n > MAX_MEASUREMENT_QUBITS:
        raise ValueError(f"measurement mode is limited to n <= {MAX_MEASUREMENT_QUBITS}")


def bell_difference_sample(rho: DensityMatrix, cfg: SamplerConfig, count: int) -> np.ndarray:
    """``count`` Bell-difference outcomes as packed words (law q)."""
    _check_measurement(rho, cfg)
    pair_cdf = _cdf(bell_probs(rho, rho).values) if cfg.mode == "measurement" else None
    q_cdf = _cdf(q_table(rho).values) if cfg.mode == "exact" else None
    parts = _run_shards(cfg, count, lambda rng, m: _difference_words(rho, cfg.mode, rng, m, pair_cdf, q_cdf))
    return np.concatenate(parts).astype(np.int64)


def _swap_outcomes(rho, mode, rng, xs, cache: _BellCache | None, phat) -> np.ndarray:
    u = rng.random(len(xs))
    if mode == "exact":
        accept = np.clip((1 + 4**rho.n * phat[xs]) / 2, 0.0, 1.0)
        return np.where(u < accept, 1, -1)
    out = np.empty(len(xs), dtype=np.int64)
    for x in np.unique(xs):
        sel = xs == x
        out[sel] = swap_sign(rho.n, _draw(cache.cdf(int(x)), u[sel]))
    return out


def swap_test_sample(rho: DensityMatrix, x, cfg: SamplerConfig, count: int) -> np.ndarray:
    """``count`` SWAP-test signs between rho and W_x rho W_x; mean 4^n phat(x)."""
    if isinstance(x, PauliVector) and x.n != rho.n:
        raise DimensionError(f"vector on {x.n} qubits, state on {rho.n}")
    x = int(x)
    _check_measurement(rho, cfg)
    cache = None
    if cfg.mode == "measurement":
        cache = _BellCache(rho)
        cache.prefill([x])
    phat = p_hat_table(rho).values
    parts = _run_shards(
        cfg, count,
        lambda rng, m: _swap_outcomes(rho, cfg.mode, rng, np.full(m, x, dtype=np.int64), cache, phat),
    )
    return np.concatenate(parts).astype(np.int64)


def eta_samples(rho: DensityMatrix, cfg: SamplerConfig, shots: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-shot (x, +-1 outcome) pairs of the six-copy test, shard by shard."""
    if shots < 1:
        raise ValueError("shots must be positive")
    _check_measurement(rho, cfg)
    mode = cfg.mode
    phat = p_hat_table(rho).values
    pair_cdf = q_cdf = cache = None
    if mode == "measurement":
        pair_cdf = _cdf(bell_probs(rho, rho).values)
        cache = _BellCache(rho)
        # q's support holds every reachable x; fill before threads start
        cache.prefill(np.flatnonzero(q_table(rho).values > 0))
    else:
        q_cdf = _cdf(q_table(rho).values)

    def shard(rng, m):
        xs = _difference_words(rho, mode, rng, m, pair_cdf, q_cdf)
        return xs, _swap_outcomes(rho, mode, rng, xs, cache, phat)

    parts = _run_shards(cfg, shots, shard)
    xs = np.concatenate([p[0] for p in parts]).astype(np.int64)
    outs = np.concatenate([p[1] for p in parts]).astype(np.int64)
    return xs, outs


def summarize(outcomes: np.ndarray) -> EtaEstimate:
    """Mean of +-1 outcomes with the conservative standard error 1/sqrt(shots)."""
    shots = len(outcomes)
    plus = int(np.count_nonzero(outcomes == 1))
    minus = shots - plus
    return EtaEstimate(
        mean=(plus - minus) / shots,
        shots=shots,
        std_error=1 / math.sqrt(shots),
        plus=plus,
        minus=minus,
    )


def estimate_eta(rho: DensityMatrix, cfg: SamplerConfig, shots: int) -> EtaEstimate:
    """Run ``shots`` independent six-copy shots and average the +-1 outputs."""
    return summarize(eta_samples(rho, cfg, shots)[1])


def samples_to_csv(n: int, xs: np.ndarray, outcomes: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["shot_index", "x_bits", "outcome"])
    for i, (x, o) in enumerate(zip(xs, outcomes)):
        w.writerow([i, word_to_text(n, int(x)), int(o)])
    return buf.getvalue()
