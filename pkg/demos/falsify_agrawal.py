"""Does the dimension-free l1 concentration bound survive simulation?

The claimed bound says P(||phat - p||_1 >= sqrt(2 ln(1/delta)/n)) <= delta for
any dimension S.  But the limit mean of sqrt(n)*||phat - p||_1 grows like
sqrt(2(S-1)/pi), so for large S the claimed threshold sits far below the bulk
of the distribution.  This script measures the actual exceedance probability
across S and prints the verdict for each.

Run:  python3 demos/falsify_agrawal.py
"""

from l1conc import BoundFamily, BoundSpec, agrawal_epsilon, expected_Z, falsify_bound

SEED = 20_240_817
N = 10_000
DELTA = 0.05
TRIALS = 10_000

print(f"claimed: P(l1 >= {agrawal_epsilon(N, DELTA):.4f}) <= {DELTA}  (n={N}, any S)")
print(f"{'S':>5} {'eps*sqrt(n)':>12} {'limit mean':>11} {'exceedance':>11} "
      f"{'95% CI':>19} {'verdict':>13}")

for S in (2, 5, 10, 20, 50, 100):
    spec = BoundSpec(BoundFamily.AGRAWAL, N, S, DELTA)
    verdict = falsify_bound(spec, TRIALS, SEED, stream=S)
    est = verdict.estimate
    # limit mean of sqrt(n)*l1 deviation = 2 * expected_Z(S)
    print(f"{S:>5} {est.threshold * N**0.5:>12.3f} {2 * expected_Z(S):>11.3f} "
          f"{est.point:>11.4f} [{est.ci_low:.4f}, {est.ci_high:.4f}] {verdict.outcome:>13}")

print("\nOnce sqrt(2(S-1)/pi) clears the claimed threshold, the bound fails outright.")
