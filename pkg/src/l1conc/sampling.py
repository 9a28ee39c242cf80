"""Seedable samplers for multinomial counts, Dirichlet vectors and Gaussian vectors.

All randomness flows through counter-based Philox streams keyed by a
:class:`StreamKey`, so any draw is reproducible from ``(master_seed,
stream_index)`` alone, independently of scheduling or worker count.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Absolute tolerance on the simplex sum; leaves double-precision headroom
# for dimensions up to ~1e6.
SIMPLEX_SUM_TOL = 1e-12

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimplexVector:
    """A probability vector: nonnegative entries summing to 1."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", e)
        if e.ndim != 1 or e.size < 1:
            raise ValidationError("simplex vector must be a 1-d array with at least one entry")
        if np.any(e < 0):
            raise ValidationError("simplex vector has a negative entry")
        if abs(float(e.sum()) - 1.0) > SIMPLEX_SUM_TOL:
            raise ValidationError(
                f"simplex vector entries sum to {e.sum()!r}, not 1 within {SIMPLEX_SUM_TOL}"
            )

    @property
    def dim(self) -> int:
        return self.entries.size

    def __len__(self) -> int:
        return self.entries.size

    @staticmethod
    def uniform(S: int) -> "SimplexVector":
        if S < 1:
            raise ValidationError("dimension must be >= 1")
        return SimplexVector(np.full(S, 1.0 / S))


def as_simplex(p) -> SimplexVector:
    """Coerce an array-like into a validated SimplexVector."""
    if isinstance(p, SimplexVector):
        return p
    return SimplexVector(np.asarray(p, dtype=float))


@dataclass(frozen=True)
class CountVector:
    """Multinomial outcome counts summing exactly to the trial count ``n``."""

    counts: np.ndarray
    n: int

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", c)
        if c.ndim != 1 or c.size < 1:
            raise ValidationError("counts must be a 1-d array with at least one entry")
        if np.any(c < 0):
            raise ValidationError("counts must be nonnegative")
        if int(c.sum()) != int(self.n):
            raise ValidationError(f"counts sum to {int(c.sum())}, expected n={self.n}")


@dataclass(frozen=True)
class StreamKey:
    """Deterministic handle for one Philox random stream.

    Distinct ``stream_index`` values under the same master seed yield
    statistically independent streams (the pair forms the 128-bit Philox key).
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= int(self.master_seed) <= _UINT64_MASK):
            raise ValidationError("master_seed must fit in 64 unsigned bits")
        if not (0 <= int(self.stream_index) <= _UINT64_MASK):
            raise ValidationError("stream_index must fit in 64 unsigned bits")

    def child(self, stream_index: int) -> "StreamKey":
        return StreamKey(self.master_seed, stream_index)

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _multinomial_chain(rng: np.random.Generator, p: np.ndarray, n_arr: np.ndarray) -> np.ndarray:
    """Sample multinomial counts via sequential conditional binomials.

    ``n_arr`` has one total count per row of the output; the chain runs
    vectorized across rows.  Stable for large n and any dimension.
    """
    size = n_arr.size
    S = p.size
    counts = np.zeros((size, S), dtype=np.int64)
    remaining = n_arr.astype(np.int64).copy()
    tail = 1.0
    for i in range(S - 1):
        if tail <= 0.0:
            break
        cond = min(max(float(p[i]) / tail, 0.0), 1.0)
        c = rng.binomial(remaining, cond)
        counts[:, i] = c
        remaining -= c
        tail -= float(p[i])
    counts[:, S - 1] = remaining
    return counts


def sample_multinomial(p, n: int, key: StreamKey) -> CountVector:
    """Draw one Multinomial(n, p) count vector, deterministic given ``key``."""
    p = as_simplex(p)
    if n < 0:
        raise ValidationError("trial count n must be >= 0")
    rng = key.generator()
    counts = _multinomial_chain(rng, p.entries, np.array([n]))[0]
    return CountVector(counts, n)


def sample_multinomial_batch(p, n: int, size: int, key: StreamKey) -> np.ndarray:
    """Draw ``size`` independent Multinomial(n, p) rows from one stream."""
    p = as_simplex(p)
    if n < 0:
        raise ValidationError("trial count n must be >= 0")
    if size < 1:
        raise ValidationError("batch size must be >= 1")
    rng = key.generator()
    return _multinomial_chain(rng, p.entries, np.full(size, n, dtype=np.int64))


def empirical_frequency(c: CountVector) -> SimplexVector:
    """Counts scaled by 1/n: the empirical distribution of the sample."""
    if c.n < 1:
        raise ValidationError("empirical frequency undefined for n = 0")
    return SimplexVector(c.counts / float(c.n))


def _gamma_to_simplex(g: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Normalize gamma variates to the simplex, guarding total underflow."""
    s = g.sum(axis=-1, keepdims=True)
    bad = (s <= 0.0)[..., 0]
    if np.any(bad):
        # all-zero gamma row (possible for very small alpha): fall back to the
        # Dirichlet mean, the canonical clamp-renormalize choice
        mean = alpha / alpha.sum()
        g = g.copy()
        g[bad] = mean
        s = g.sum(axis=-1, keepdims=True)
    return g / s


def sample_dirichlet(alpha, key: StreamKey) -> SimplexVector:
    """Draw one Dirichlet(alpha) vector via normalized Gamma variates."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size < 1:
        raise ValidationError("alpha must be a 1-d array with at least one entry")
    if np.any(alpha <= 0):
        raise ValidationError("alpha entries must be > 0")
    rng = key.generator()
    g = rng.standard_gamma(alpha)
    return SimplexVector(_gamma_to_simplex(g, alpha))


def sample_dirichlet_batch(alpha, size: int, key: StreamKey) -> np.ndarray:
    """Draw ``size`` Dirichlet(alpha) rows from one stream."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ValidationError("alpha entries must be > 0")
    if size < 1:
        raise ValidationError("batch size must be >= 1")
    rng = key.generator()
    g = rng.standard_gamma(alpha, size=(size, alpha.size))
    return _gamma_to_simplex(g, alpha)


def sample_standard_normal_vector(dim: int, key: StreamKey) -> np.ndarray:
    """Draw ``dim`` i.i.d. N(0,1) variates, deterministic given ``key``."""
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    return key.generator().standard_normal(dim)
