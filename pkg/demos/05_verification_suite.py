"""Run the whole verification suite and print a result table.

Every derived identity has a corresponding mechanical check: exact ones
(normalizations, merges, change of variables) at fixed tolerances, and
statistical ones (samplers vs analytic laws) at p > 0.001 with one
retry at 10x samples.  The suite is deterministic given the seed.
"""

import time

from countcomp import all_passed, run_all

SEED = 42
start = time.perf_counter()
reports = run_all(SEED, level="quick")
elapsed = time.perf_counter() - start

print(f"{'check':46s} {'statistic':>12s} {'threshold':>10s}  verdict")
print("-" * 82)
for rep in reports:
    verdict = "pass" if rep.passed else ("inconclusive" if rep.inconclusive else "FAIL")
    print(f"{rep.name:46s} {rep.statistic:12.4g} {rep.threshold:10.4g}  {verdict}")
print("-" * 82)
print(f"{len(reports)} checks in {elapsed:.1f}s, seed {SEED}: "
      f"{'all passed' if all_passed(reports) else 'FAILURES PRESENT'}")
