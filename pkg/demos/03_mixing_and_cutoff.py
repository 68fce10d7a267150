"""Mixing behavior from three kinds of starting states, and the log-space
cutoff scan at n up to a million.

Run:  python3 demos/03_mixing_and_cutoff.py
"""

from burnside_lab import (
    State,
    chi2_avg,
    chi2_exact,
    chi2_from_one_one,
    cutoff_scan,
    cutoff_time,
    tv_exact,
)

n = 8
zeros = State(2, (0,) * n)
one_one = State(2, (0,) * (n - 1) + (1,))
half = State(2, (0,) * (n // 2) + (1,) * (n - n // 2))

print("exact distances at n = %d (computed as rationals, shown as floats):" % n)
print("start      l   chi-square     total variation")
for start, name in ((zeros, "zeros"), (one_one, "one-one"), (half, "half")):
    for ell in (1, 3, 5):
        print("%-9s %2d   %-12.6g %-12.6g"
              % (name, ell, float(chi2_exact(n, start, ell)),
                 float(tv_exact(n, start, ell))))
print()

# From a one-ones state a constant number of steps suffices: the exact
# chi-square sits inside [5, 270] (1/4)^(2s) for every n.
for big_n in (10, 50, 200):
    report = chi2_from_one_one(big_n, 4)
    print("one-ones chi2 at n=%-4d s=4: %.6g  (envelope [%.3g, %.3g])"
          % (big_n, float(report.value), float(report.lower), float(report.upper)))
print()

# Most states need ~ (log2/2) n / log n steps; the averaged distance has a
# cutoff there.  Exact values blow up past float range, so scan in log space.
for row in cutoff_scan([10 ** 4, 10 ** 6], [0.9, 1.0, 1.1]):
    print("n=%-8d factor %.1f (l = %6d):  log chi2_avg = %12.1f"
          % (row.n, row.factor, row.ell, row.value.logmag))
print("\ncutoff time at n = 10^6:", round(cutoff_time(10 ** 6), 1), "steps")
