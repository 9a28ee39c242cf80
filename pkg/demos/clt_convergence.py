"""Watch the finite-n deviation law converge to its Gaussian limit.

For uniform p and growing n, the Kolmogorov-Smirnov distance between samples
of sqrt(n)/2 * ||phat - p||_1 and the asymptotic limit variable shrinks
towards the two-sample noise floor.

Run:  python3 demos/clt_convergence.py
"""

import math

import numpy as np

from l1conc.montecarlo import DeviationSource, draw_samples

SEED = 99
S = 5
TRIALS = 100_000


def ks_distance(a: np.ndarray, b: np.ndarray) -> float:
    both = np.sort(np.concatenate([a, b]))
    ca = np.searchsorted(a, both, side="right") / a.size
    cb = np.searchsorted(b, both, side="right") / b.size
    return float(np.abs(ca - cb).max())


limit = np.sort(draw_samples(DeviationSource("limit", S), TRIALS, SEED, stream=500))

print(f"S = {S}, {TRIALS} samples per law")
print(f"{'n':>8} {'KS distance':>12}")
for i, n in enumerate([100, 1_000, 10_000, 100_000]):
    source = DeviationSource("multinomial", S, n=n, scale=math.sqrt(n) / 2)
    finite = np.sort(draw_samples(source, TRIALS, SEED, stream=i))
    print(f"{n:>8} {ks_distance(finite, limit):>12.4f}")

print(f"\n(two-sample noise floor is roughly {1.36 * math.sqrt(2 / TRIALS):.4f})")
