"""Brute-force and Monte Carlo oracles for the probability formulas.

The exhaustive oracles count matrices directly from the definition; they
never look at a Smith normal form.  Sampling uses numpy's counter-based
Philox generator with one stream per batch, keyed by ``(seed, batch)``, so
results do not depend on how batches are spread over threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (DomainError, GaussianInteger, SizeError, ValidationError, as_matrix)
from .expectation import signed_permutation_count
from .ortho import RationalOrthogonalMatrix, enumerate_On

EXHAUSTIVE_BUDGET = 10 ** 7
_CHUNK = 1 << 16
MC_BATCH = 1 << 18
SAMPLE_N_BATCH = 1 << 12


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    samples: int
    entry_bound: int

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed must fit in 64 bits, got {self.seed}")
        if self.samples < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")
        if self.entry_bound < 1:
            raise ValidationError(f"entry bound must be >= 1, got {self.entry_bound}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    entry_bound: int = 0  # after rounding up to a multiple of level^2

    def within(self, target: float, k_sigma: float = 5.0) -> bool:
        return abs(self.mean - target) <= k_sigma * self.stderr


@dataclass(frozen=True)
class SampleNResult:
    mean: float
    stderr: float
    all_divisible: bool
    samples: int
    entry_bound: int
    divisor: int
    max_count: int

    def __iter__(self):
        return iter((self.mean, self.stderr, self.all_divisible))


def default_threads() -> int:
    env = os.environ.get("ORTHOSMITH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"ORTHOSMITH_THREADS: expected integer, got {env!r}") from None
    return os.cpu_count() or 1


def _stream(seed: int, index: int) -> np.random.Generator:
    counter = np.array([0, 0, index, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def _run_batches(fn, n_batches: int, threads: int | None):
    threads = threads or default_threads()
    if threads <= 1 or n_batches <= 1:
        return [fn(b) for b in range(n_batches)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_batches)))


def _moments(total: int, total_sq: int, N: int) -> tuple[float, float]:
    mean = total / N
    if N < 2:
        return mean, 0.0
    var = Fraction(total_sq * N - total * total, N * (N - 1))
    return mean, math.sqrt(var / N)


# ---------------------------------------------------------------------------
# helpers shared by the exhaustive and sampling code


def _int_array(G, m: int) -> np.ndarray:
    return np.array([[int(x) % m for x in r] for r in as_matrix(G).rows], dtype=np.int64)


def _gauss_arrays(G, m: int) -> tuple[np.ndarray, np.ndarray]:
    G = as_matrix(G)
    re = np.array([[GaussianInteger.coerce(x).re % m for x in r] for r in G.rows], dtype=np.int64)
    im = np.array([[GaussianInteger.coerce(x).im % m for x in r] for r in G.rows], dtype=np.int64)
    return re, im


def _digits(start: int, stop: int, m: int, k: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, k), dtype=np.int64)
    for t in range(k):
        out[:, t] = idx % m
        idx //= m
    return out


def _symmetric_from(values: np.ndarray, n: int) -> np.ndarray:
    # values: (B, n(n+1)/2) upper-triangular entries, row-major
    B = values.shape[0]
    X = np.empty((B, n, n), dtype=np.int64)
    iu, ju = np.triu_indices(n)
    X[:, iu, ju] = values
    X[:, ju, iu] = values
    return X


def _sandwich(Lt: np.ndarray, X: np.ndarray, R: np.ndarray, m: int) -> np.ndarray:
    return (Lt @ ((X @ R) % m)) % m


def _csandwich(Lt, X, R, m):
    """``Lt @ X @ R`` for complex matrices held as (real, imag) integer pairs, mod m."""
    (lr, li), (xr, xi), (rr, ri) = Lt, X, R
    tr = (xr @ rr - xi @ ri) % m
    ti = (xr @ ri + xi @ rr) % m
    return (lr @ tr - li @ ti) % m, (lr @ ti + li @ tr) % m


def _all_zero(Y: np.ndarray) -> np.ndarray:
    return ~Y.reshape(Y.shape[0], -1).any(axis=1)


def _check_budget(size: int):
    if size > EXHAUSTIVE_BUDGET:
        raise SizeError(f"state space {size} exceeds the exhaustive budget {EXHAUSTIVE_BUDGET}")


def _check_modulus(m: int):
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DomainError(f"modulus must be a positive integer, got {m!r}")


# ---------------------------------------------------------------------------
# exhaustive oracles


def exhaustive_prob(G, m: int, ensemble: str = "symmetric", G2=None) -> Fraction:
    """Fraction of ``X`` mod ``m`` with ``G^T X G2 == 0`` (``G2`` defaults to ``G``).

    ``symmetric`` ranges over symmetric ``X``, ``asymmetric`` over all of them.
    """
    _check_modulus(m)
    G = as_matrix(G)
    G2 = G if G2 is None else as_matrix(G2)
    if not G.is_square or G.shape != G2.shape:
        raise ValidationError("exhaustive_prob needs square matrices of equal size")
    if G.ring != "Z" or G2.ring != "Z":
        raise ValidationError("exhaustive_prob works over Z; use exhaustive_prob_gaussian")
    n = G.nrows
    if ensemble == "symmetric":
        k = n * (n + 1) // 2
    elif ensemble == "asymmetric":
        k = n * n
    else:
        raise ValidationError(f"ensemble must be symmetric or asymmetric, got {ensemble!r}")
    size = m ** k
    _check_budget(size)
    Lt = _int_array(G, m).T.copy()
    R = _int_array(G2, m)
    hits = 0
    for start in range(0, size, _CHUNK):
        vals = _digits(start, min(size, start + _CHUNK), m, k)
        X = _symmetric_from(vals, n) if ensemble == "symmetric" else vals.reshape(-1, n, n)
        hits += int(_all_zero(_sandwich(Lt, X, R, m)).sum())
    return Fraction(hits, size)


def exhaustive_prob_gaussian(G, m: int, ensemble: str = "symmetric") -> Fraction:
    """Exhaustive oracle over Z[i]/m.

    ``symmetric``: ``X = X^T`` with Gaussian entries, event ``G^T X G == 0``.
    ``hermitian``: ``H = H^*`` with integer diagonal, event ``G^* H G == 0``.
    """
    _check_modulus(m)
    G = as_matrix(G)
    if not G.is_square:
        raise ValidationError("exhaustive_prob_gaussian needs a square matrix")
    n = G.nrows
    if ensemble == "symmetric":
        k = n * (n + 1)
    elif ensemble == "hermitian":
        k = n * n
    else:
        raise ValidationError(f"ensemble must be symmetric or hermitian, got {ensemble!r}")
    size = m ** k
    _check_budget(size)
    gr, gi = _gauss_arrays(G, m)
    right = (gr, gi)
    if ensemble == "symmetric":
        left = (gr.T.copy(), gi.T.copy())
    else:
        left = (gr.T.copy(), (-gi.T) % m)
    iu, ju = np.triu_indices(n, 1)
    hits = 0
    for start in range(0, size, _CHUNK):
        vals = _digits(start, min(size, start + _CHUNK), m, k)
        if ensemble == "symmetric":
            half = n * (n + 1) // 2
            X = (_symmetric_from(vals[:, :half], n), _symmetric_from(vals[:, half:], n))
        else:
            B = vals.shape[0]
            off = len(iu)
            xr = np.zeros((B, n, n), dtype=np.int64)
            xi = np.zeros((B, n, n), dtype=np.int64)
            d = np.arange(n)
            xr[:, d, d] = vals[:, :n]
            xr[:, iu, ju] = vals[:, n:n + off]
            xr[:, ju, iu] = vals[:, n:n + off]
            xi[:, iu, ju] = vals[:, n + off:]
            xi[:, ju, iu] = (-vals[:, n + off:]) % m
            X = (xr, xi)
        yr, yi = _csandwich(left, X, right, m)
        hits += int((_all_zero(yr) & _all_zero(yi)).sum())
    return Fraction(hits, size)


# ---------------------------------------------------------------------------
# Monte Carlo


def effective_entry_bound(k: int, modulus: int) -> int:
    """Round ``k`` up to a multiple of ``modulus`` so reductions are exactly uniform."""
    return -(-k // modulus) * modulus


def _as_orthogonal(Q) -> RationalOrthogonalMatrix:
    if isinstance(Q, RationalOrthogonalMatrix):
        return Q
    return RationalOrthogonalMatrix.from_rational(Q)


def mc_prob(Q, cfg: SampleConfig, ring: str = "Z", threads: int | None = None) -> McEstimate:
    """Estimate ``P(Q^T X Q integral)`` for symmetric ``X`` with entries uniform on ``1..k``.

    Over ``Zi`` real and imaginary parts are drawn independently on ``1..k``.
    ``k`` is first rounded up to a multiple of ``level^2``.
    """
    Q = _as_orthogonal(Q)
    if ring not in ("Z", "Zi"):
        raise ValidationError(f"ring must be Z or Zi, got {ring!r}")
    n, ell = Q.n, Q.level
    m = ell * ell
    k = effective_entry_bound(cfg.entry_bound, m)
    G = _int_array(Q.G, m)
    Gt = G.T.copy()
    zero = np.zeros_like(G)
    free = n * (n + 1) // 2
    n_batches = -(-cfg.samples // MC_BATCH)

    def batch(b: int) -> int:
        size = min(MC_BATCH, cfg.samples - b * MC_BATCH)
        rng = _stream(cfg.seed, b)
        xr = _symmetric_from(rng.integers(1, k, size=(size, free), endpoint=True) % m, n)
        if ring == "Z":
            return int(_all_zero(_sandwich(Gt, xr, G, m)).sum())
        xi = _symmetric_from(rng.integers(1, k, size=(size, free), endpoint=True) % m, n)
        yr, yi = _csandwich((Gt, zero), (xr, xi), (G, zero), m)
        return int((_all_zero(yr) & _all_zero(yi)).sum())

    hits = sum(_run_batches(batch, n_batches, threads))
    mean, stderr = _moments(hits, hits, cfg.samples)
    return McEstimate(mean=mean, stderr=stderr, samples=cfg.samples, entry_bound=k)


def sample_N(n: int, ell: int, cfg: SampleConfig, threads: int | None = None) -> SampleNResult:
    """Sample ``N_n(level)``: per draw, count the level-``ell`` orthogonal ``Q`` keeping ``X`` integral."""
    if n not in (2, 3):
        raise DomainError(f"n must be 2 or 3, got {n}")
    if ell < 1:
        raise DomainError(f"level must be >= 1, got {ell}")
    divisor = signed_permutation_count(n)
    m = ell * ell
    k = effective_entry_bound(cfg.entry_bound, m)
    Qs = enumerate_On(n, ell)
    if not Qs:
        return SampleNResult(0.0, 0.0, True, cfg.samples, k, divisor, 0)
    Gs = np.stack([_int_array(Q.G, m) for Q in Qs])
    Gts = np.ascontiguousarray(Gs.transpose(0, 2, 1))
    free = n * (n + 1) // 2
    n_batches = -(-cfg.samples // SAMPLE_N_BATCH)

    def batch(b: int):
        size = min(SAMPLE_N_BATCH, cfg.samples - b * SAMPLE_N_BATCH)
        rng = _stream(cfg.seed, b)
        X = _symmetric_from(rng.integers(1, k, size=(size, free), endpoint=True) % m, n)
        counts = np.zeros(size, dtype=np.int64)
        for G, Gt in zip(Gs, Gts):
            counts += _all_zero(_sandwich(Gt, X, G, m))
        return (int(counts.sum()), int((counts * counts).sum()),
                bool((counts % divisor == 0).all()), int(counts.max()))

    parts = _run_batches(batch, n_batches, threads)
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean, stderr = _moments(total, total_sq, cfg.samples)
    return SampleNResult(mean, stderr, all(p[2] for p in parts), cfg.samples, k, divisor,
                         max(p[3] for p in parts))
