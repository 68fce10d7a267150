"""Reproduce the alternation-count histogram: T(x)/(n-1) under the
stationary law converges to 2U(1-U), with density 1/sqrt(1-2x).

Writes alternations_nXXX.csv files; pass --plot to also render a PNG when
matplotlib is available.

Run:  python3 demos/04_alternation_figure.py [--plot]
"""

import csv
import math
import sys

from burnside_lab import RngStream, alternation_histogram
from burnside_lab.stats import histogram_csv_rows, limit_cdf

SAMPLES = 100000

for n in (200, 2000):
    hist, fit = alternation_histogram(n, SAMPLES, RngStream(seed=2024), bins=50)
    path = "alternations_n%d.csv" % n
    with open(path, "w", newline="") as handle:
        csv.writer(handle).writerows(histogram_csv_rows(hist))
    print("n=%-5d mean %.4f (limit 1/3), variance %.5f (limit %.5f), "
          "sup-CDF gap %.4f -> %s"
          % (n, fit.empirical_mean, fit.empirical_variance, 1 / 45,
             fit.sup_cdf_discrepancy, path))

if "--plot" in sys.argv:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        import numpy as np
    except ImportError:
        sys.exit("matplotlib not available; CSVs were still written")
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, n in zip(axes, (200, 2000)):
        hist, _ = alternation_histogram(n, SAMPLES, RngStream(seed=2024), bins=50)
        centers = [(a + b) / 2 for a, b in zip(hist.bin_edges, hist.bin_edges[1:])]
        width = hist.bin_edges[1] - hist.bin_edges[0]
        ax.bar(centers, [c / SAMPLES / width for c in hist.counts],
               width=width, alpha=0.6)
        xs = np.linspace(0, 0.4999, 400)
        ax.plot(xs, 1 / np.sqrt(1 - 2 * xs), "k-", lw=1.5)
        ax.set_title("n = %d" % n)
        ax.set_xlim(0, 0.7)
    fig.savefig("alternations.png", dpi=120)
    print("wrote alternations.png")
