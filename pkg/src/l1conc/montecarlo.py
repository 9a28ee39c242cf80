"""Monte Carlo engine: tail and quantile estimation with exact confidence
intervals, a small-instance enumeration oracle, and bound falsification.

Trials are drawn in fixed-size chunks, each chunk from its own Philox stream
derived from ``(master_seed, stream, chunk_index)``.  Chunk boundaries do not
depend on the worker count, and chunk results are reassembled in index order,
so every estimate is bit-identical whether it ran on 1 worker or 64.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import beta as beta_dist

from .asymptotic import sample_Z_batch
from .bounds import BoundEvaluation, BoundSpec, evaluate_bound
from .errors import CapacityError, ValidationError
from .sampling import StreamKey, as_simplex, sample_dirichlet_batch, sample_multinomial_batch

CHUNK_SIZE = 1 << 14

# cap on the number of enumerated outcomes in the exact oracle
MAX_EXACT_OUTCOMES = 10**7

SOURCE_FAMILIES = ("multinomial", "dirichlet", "limit")


@dataclass(frozen=True)
class DeviationSource:
    """Describes which deviation statistic a Monte Carlo run samples.

    ``multinomial``/``dirichlet`` sources produce the l1 distance between a
    finite-n empirical (or Dirichlet(n·p)) vector and p; ``limit`` sources
    produce the asymptotic variable directly.  ``scale`` multiplies every
    sample, e.g. sqrt(n)·D/2 to compare finite-n draws with the limit law.
    """

    family: str
    S: int
    n: int | None = None
    D: float = 1.0
    p: tuple | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in SOURCE_FAMILIES:
            raise ValidationError(f"unknown source family {self.family!r}")
        if self.S < 2:
            raise ValidationError("S must be >= 2")
        if self.family != "limit":
            if self.n is None or self.n < 1:
                raise ValidationError("finite-n sources require n >= 1")
        if self.D <= 0:
            raise ValidationError("D must be > 0")
        if self.p is not None:
            as_simplex(np.asarray(self.p))

    def p_vector(self) -> np.ndarray:
        if self.p is None:
            return np.full(self.S, 1.0 / self.S)
        return np.asarray(self.p, dtype=float)


def _stream_index(stream: int, chunk: int) -> int:
    # pack (stream, chunk) into the 64-bit stream half of the Philox key
    return (stream << 32) | chunk


def _draw_chunk(source: DeviationSource, master_seed: int, stream: int, chunk: int,
                count: int) -> np.ndarray:
    key = StreamKey(master_seed, _stream_index(stream, chunk))
    if source.family == "limit":
        out = sample_Z_batch(source.S, source.D, count, key)
    else:
        p = source.p_vector()
        if source.family == "multinomial":
            counts = sample_multinomial_batch(p, source.n, count, key)
            out = np.abs(counts / float(source.n) - p).sum(axis=1)
        else:
            x = sample_dirichlet_batch(source.n * p, count, key)
            out = np.abs(x - p).sum(axis=1)
    if source.scale != 1.0:
        out = source.scale * out
    return out


def draw_samples(source: DeviationSource, trials: int, master_seed: int, *,
                 stream: int = 0, workers: int = 1) -> np.ndarray:
    """Draw ``trials`` deviation samples, reproducible and worker-independent."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    nchunks = (trials + CHUNK_SIZE - 1) // CHUNK_SIZE
    sizes = [CHUNK_SIZE] * (nchunks - 1) + [trials - CHUNK_SIZE * (nchunks - 1)]
    if workers > 1 and nchunks > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    _draw_chunk,
                    [source] * nchunks,
                    [master_seed] * nchunks,
                    [stream] * nchunks,
                    range(nchunks),
                    sizes,
                )
            )
    else:
        parts = [_draw_chunk(source, master_seed, stream, i, sz) for i, sz in enumerate(sizes)]
    return np.concatenate(parts)


def clopper_pearson(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Exact two-sided binomial confidence interval via beta quantiles."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not (0.0 < level < 1.0):
        raise ValidationError("level must lie in (0, 1)")
    if not (0 <= successes <= trials):
        raise ValidationError("successes must lie in [0, trials]")
    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(beta_dist.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(beta_dist.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


@dataclass(frozen=True)
class TailEstimate:
    """Estimated exceedance probability P(statistic >= threshold)."""

    threshold: float
    exceedance_count: int
    trials: int
    point: float
    ci_low: float
    ci_high: float
    ci_level: float


def tail_estimate_from_count(threshold: float, k: int, trials: int,
                             ci_level: float = 0.95) -> TailEstimate:
    lo, hi = clopper_pearson(k, trials, ci_level)
    return TailEstimate(
        threshold=threshold,
        exceedance_count=k,
        trials=trials,
        point=k / trials,
        ci_low=lo,
        ci_high=hi,
        ci_level=ci_level,
    )


def estimate_tail_probability(source: DeviationSource, threshold: float, trials: int,
                              master_seed: int, *, ci_level: float = 0.95,
                              stream: int = 0, workers: int = 1) -> TailEstimate:
    """Monte Carlo estimate of P(statistic >= threshold) with a Clopper-Pearson
    interval, deterministic given the master seed."""
    samples = draw_samples(source, trials, master_seed, stream=stream, workers=workers)
    k = int(np.count_nonzero(samples >= threshold))
    return tail_estimate_from_count(threshold, k, trials, ci_level)


def _compositions(n: int, S: int):
    """Yield all count vectors of length S summing to n (colex order)."""
    c = np.zeros(S, dtype=np.int64)

    def rec(rest: int, j: int):
        if j == S - 1:
            c[j] = rest
            yield c
            return
        for v in range(rest + 1):
            c[j] = v
            yield from rec(rest - v, j + 1)
            c[j] = 0

    yield from rec(n, 0)


def exact_tail_small(p, n: int, threshold: float) -> float:
    """Exact P(||c/n - p||_1 >= threshold) by enumerating all multinomial
    outcomes; log-factorial pmf evaluation keeps it overflow-safe to n ~ 100."""
    p = as_simplex(p).entries
    S = p.size
    if n < 1:
        raise ValidationError("n must be >= 1")
    if math.comb(n + S - 1, S - 1) > MAX_EXACT_OUTCOMES:
        raise CapacityError(
            f"{math.comb(n + S - 1, S - 1)} outcomes exceed the enumeration cap"
        )
    logfact = gammaln(np.arange(1, n + 2, dtype=float))  # logfact[i] = ln(i!)
    with np.errstate(divide="ignore"):
        logp = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), -np.inf)
    total = 0.0
    for c in _compositions(n, S):
        if np.abs(c / float(n) - p).sum() < threshold:
            continue
        if np.any((c > 0) & (p == 0)):
            continue
        lp = logfact[n] - logfact[c].sum() + np.where(c > 0, c * logp, 0.0).sum()
        total += math.exp(lp)
    return min(total, 1.0)


@dataclass(frozen=True)
class QuantileCurve:
    """Empirical CDF on a grid with a uniform DKW confidence band."""

    grid: np.ndarray
    cdf_estimates: np.ndarray
    dkw_halfwidth: float
    trials: int
    band_level: float


def dkw_halfwidth(trials: int, band_level: float) -> float:
    """Uniform empirical-CDF half-width sqrt(ln(2/a)/(2·trials))."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not (0.0 < band_level < 1.0):
        raise ValidationError("band level must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / band_level) / (2.0 * trials))


def estimate_quantile_curve(source: DeviationSource, grid, trials: int, master_seed: int, *,
                            band_level: float = 0.05, stream: int = 0,
                            workers: int = 1) -> QuantileCurve:
    """Empirical CDF of the deviation statistic on an ascending grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("grid must be strictly ascending")
    samples = np.sort(draw_samples(source, trials, master_seed, stream=stream, workers=workers))
    counts = np.searchsorted(samples, grid, side="right")
    return QuantileCurve(
        grid=grid,
        cdf_estimates=counts / float(trials),
        dkw_halfwidth=dkw_halfwidth(trials, band_level),
        trials=trials,
        band_level=band_level,
    )


VIOLATED = "Violated"
CONSISTENT = "Consistent"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of testing a claimed bound against Monte Carlo evidence.

    The classification uses the confidence interval, never the point
    estimate, so a correct bound is labeled Violated only with probability
    controlled by the interval level.
    """

    spec: BoundSpec
    evaluation: BoundEvaluation
    estimate: TailEstimate
    claimed_delta: float
    outcome: str


def classify_verdict(estimate: TailEstimate, claimed_delta: float) -> str:
    if estimate.ci_low > claimed_delta:
        return VIOLATED
    if estimate.ci_high <= claimed_delta:
        return CONSISTENT
    return INCONCLUSIVE


def falsify_bound(spec: BoundSpec, trials: int, master_seed: int, *,
                  family: str = "multinomial", ci_level: float = 0.95,
                  stream: int = 0, workers: int = 1) -> Verdict:
    """Estimate the exceedance probability at the bound's own threshold (uniform
    p) and classify the claim as Violated / Consistent / Inconclusive."""
    if trials < 100:
        raise ValidationError("falsification requires trials >= 100")
    if family not in ("multinomial", "dirichlet"):
        raise ValidationError(f"unsupported distribution family {family!r}")
    evaluation = evaluate_bound(spec)
    source = DeviationSource(family=family, S=spec.S, n=spec.n)
    estimate = estimate_tail_probability(
        source, evaluation.epsilon, trials, master_seed,
        ci_level=ci_level, stream=stream, workers=workers,
    )
    return Verdict(
        spec=spec,
        evaluation=evaluation,
        estimate=estimate,
        claimed_delta=spec.delta,
        outcome=classify_verdict(estimate, spec.delta),
    )
