"""Command-line surface: reproducible, file-emitting runs.

Every run writes its outputs plus a RunManifest JSON next to the primary
output; re-running a manifest's command reproduces exact outputs bit for
bit (seeded Monte Carlo reproduces the identical samples).  Exit codes:
0 success, 1 verification failure, 2 usage error, 3 state-space cap
exceeded, 4 unwritable output path.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass

from gmpy2 import mpq

from . import __version__
from .chain import (
    RngStream,
    State,
    StateSpaceCapError,
    build_kernel,
    run_chain,
    sample_stationary_many,
)
from .mixing import (
    chi2_avg,
    curve_csv_rows,
    cutoff_scan,
    distance_curve,
    scan_csv_rows,
)
from .spectral import basis_records, build_basis, multiplicity_table
from .stats import (
    alternation_histogram,
    alternations,
    expected_alternations_after,
    histogram_csv_rows,
    ones_moments,
    stationary_alternation_variance,
)
from .verifier import SUITES, run_suite

SCHEMA_PREFIX = "burnside-lab"
SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_UNWRITABLE = 4


def _schema(kind: str) -> str:
    return "%s/%s/%d" % (SCHEMA_PREFIX, kind, SCHEMA_VERSION)


@dataclass
class RunManifest:
    schema: str
    command: str
    parameters: dict
    seed: int
    stream: int
    version: str
    outputs: list
    duration_seconds: float


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _write_csv(path: str, kind: str, rows: list) -> None:
    with open(path, "w", newline="") as handle:
        handle.write("# schema=%s\n" % _schema(kind))
        writer = csv.writer(handle)
        writer.writerows(rows)


def _write_table(args, kind: str, rows: list) -> None:
    """Tabular output as CSV (default) or JSON, per --format."""
    if getattr(args, "format", "csv") == "json":
        header, data = rows[0], rows[1:]
        _write_json(args.out, {"schema": _schema(kind),
                               "columns": list(header),
                               "rows": [list(r) for r in data]})
    else:
        _write_csv(args.out, kind, rows)


def _emit(args, outputs: list, started: float) -> None:
    params = {key: value for key, value in vars(args).items()
              if key not in ("func",) and value is not None}
    manifest = RunManifest(
        schema=_schema("manifest"),
        command=args.command,
        parameters=params,
        seed=getattr(args, "seed", 0) or 0,
        stream=getattr(args, "stream", 0) or 0,
        version=__version__,
        outputs=outputs,
        duration_seconds=round(time.time() - started, 6),
    )
    path = outputs[0] + ".manifest.json"
    _write_json(path, asdict(manifest))
    print("%s -> %s (manifest %s) [%.2fs]"
          % (args.command, ", ".join(outputs), path, manifest.duration_seconds))


def _parse_steps(text: str) -> list:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _parse_start(text: str, n: int, k: int) -> State:
    if text == "zeros":
        return State(k, (0,) * n)
    if text == "one-one":
        return State(k, (0,) * (n - 1) + (1,))
    if text == "half":
        return State(k, (0,) * (n // 2) + (1,) * (n - n // 2))
    if text.startswith("orbit:"):
        ones = int(text.split(":", 1)[1])
        return State(k, (1,) * ones + (0,) * (n - ones))
    state = State.from_string(text, k)
    if state.n != n:
        raise ValueError("state literal %r has length %d, expected n=%d"
                         % (text, state.n, n))
    return state


def _cmd_kernel(args) -> int:
    kernel = build_kernel(args.n, args.k)
    payload = {
        "schema": _schema("kernel"),
        "n": args.n,
        "k": args.k,
        "stationary": [str(p) for p in kernel.stationary],
        "rows": [[str(v) for v in row] for row in kernel.matrix.data],
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    table = multiplicity_table(args.n)
    entries = sorted(table.items(), key=lambda kv: kv[0], reverse=True)
    payload = {
        "schema": _schema("spectrum"),
        "n": args.n,
        "eigenvalues": [{"value": str(lam), "multiplicity": mult}
                        for lam, mult in entries],
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _cmd_basis(args) -> int:
    basis = build_basis(args.n)
    payload = {
        "schema": _schema("basis"),
        "n": args.n,
        "vectors": basis_records(basis),
    }
    _write_json(args.out, payload)
    return EXIT_OK


_CURVE_GNUPLOT = """# gnuplot script for %(csv)s
set datafile separator ','
set logscale y
set xlabel 'step'
set ylabel '%(metric)s distance'
plot '%(csv)s' skip 2 using 4:($5/$6) with linespoints title '%(title)s'
"""


def _cmd_distance(args) -> int:
    steps = _parse_steps(args.steps)
    metric = "chi2" if args.command == "chi2" else "tv"
    if args.start == "avg":
        if metric != "chi2":
            raise ValueError("--start avg is a chi-square-only notion")
        rows = [("n", "start", "metric", "step", "value_num", "value_den")]
        for ell in steps:
            value = mpq(chi2_avg(args.n, ell, mode="exact"))
            rows.append((args.n, "avg", "chi2", ell,
                         int(value.numerator), int(value.denominator)))
        _write_table(args, "curve", rows)
    else:
        start = _parse_start(args.start, args.n, args.k)
        curve = distance_curve(args.n, start, metric, steps)
        _write_table(args, "curve", curve_csv_rows(curve))
    if args.gnuplot:
        with open(args.out + ".gp", "w") as handle:
            handle.write(_CURVE_GNUPLOT % {
                "csv": args.out, "metric": metric,
                "title": "n=%d start=%s" % (args.n, args.start)})
    return EXIT_OK


def _cmd_avg_chi2(args) -> int:
    steps = _parse_steps(args.steps)
    if args.mode == "exact":
        rows = [("n", "step", "value_num", "value_den")]
        for ell in steps:
            value = mpq(chi2_avg(args.n, ell, mode="exact"))
            rows.append((args.n, ell, int(value.numerator), int(value.denominator)))
    else:
        rows = [("n", "step", "log_value", "sign")]
        for ell in steps:
            value = chi2_avg(args.n, ell, mode="log")
            rows.append((args.n, ell, value.logmag, value.sign))
    _write_table(args, "avg-chi2", rows)
    return EXIT_OK


def _cmd_cutoff_scan(args) -> int:
    n_values = [int(v) for v in args.n.split(",")]
    factors = [float(v) for v in args.factors.split(",")]
    rows = cutoff_scan(n_values, factors, refined=not args.plain_log)
    _write_table(args, "cutoff-scan", scan_csv_rows(rows))
    return EXIT_OK


def _cmd_sample(args) -> int:
    rng = RngStream(args.seed, args.stream)
    if args.stationary:
        draws = sample_stationary_many(args.n, args.k, args.stationary, rng)
        rows = [("draw", "state")]
        for i, digits in enumerate(draws):
            rows.append((i, "".join(str(int(d)) for d in digits)))
    else:
        if args.steps is None:
            raise ValueError("sample needs --steps or --stationary")
        start = _parse_start(args.start, args.n, args.k)
        trajectory = run_chain(start, int(args.steps), rng)
        rows = [("step", "state")]
        for i, state in enumerate(trajectory):
            rows.append((i, str(state)))
    _write_table(args, "sample", rows)
    return EXIT_OK


def _cmd_stats(args) -> int:
    start = _parse_start(args.start, args.n, 2)
    ell = int(args.steps)
    ones = ones_moments(start, max(ell, 1))
    payload = {
        "schema": _schema("stats"),
        "n": args.n,
        "start": str(start),
        "step": ell,
        "alternations_start": alternations(start),
        "expected_alternations": str(expected_alternations_after(start, ell)),
        "stationary_alternation_mean": str(mpq(args.n - 1, 3)),
        "stationary_alternation_variance": str(stationary_alternation_variance(args.n)),
        "ones_mean": str(ones.mean),
        "ones_variance": str(ones.variance),
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _cmd_hist(args) -> int:
    rng = RngStream(args.seed, args.stream)
    hist, fit = alternation_histogram(args.n, args.samples, rng, bins=args.bins)
    _write_table(args, "histogram", histogram_csv_rows(hist))
    fit_path = args.out + ".fit.json"
    _write_json(fit_path, {
        "schema": _schema("histogram-fit"),
        "n": args.n,
        "samples": args.samples,
        "empirical_mean": fit.empirical_mean,
        "empirical_variance": fit.empirical_variance,
        "sup_cdf_discrepancy": fit.sup_cdf_discrepancy,
        "sup_cdf_discrepancy_dense": fit.sup_cdf_discrepancy_dense,
    })
    return EXIT_OK


def emit_report(results, path: str, report_format: str = "json",
                header: dict = None) -> int:
    """Write a check report (stable ordering by name, then parameters);
    returns the exit status: 0 on all-pass, 1 otherwise.  An empty result
    sequence is a valid empty report."""
    results = sorted(results, key=lambda r: (r.name, r.params))
    if report_format == "json":
        records = [{"name": r.name, "params": list(r.params),
                    "status": r.status, "witness": r.witness,
                    "details": r.details} for r in results]
        payload = {"schema": _schema("check-report"), "results": records}
        payload.update(header or {})
        _write_json(path, payload)
    else:
        with open(path, "w") as handle:
            for r in results:
                line = "%s %s %r" % (r.status.upper(), r.name, r.params)
                if r.witness:
                    line += " :: %s" % r.witness
                handle.write(line + "\n")
    failures = [r for r in results if not r.passed]
    for r in results:
        print("%-4s %s %r" % (r.status.upper(), r.name, r.params))
    if failures:
        print("first witness: %s" % failures[0].witness)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, max_n=args.max_n)
    return emit_report(results, args.out, args.format,
                       {"suite": args.suite, "max_n": args.max_n})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burnside-lab",
        description="Exact and Monte Carlo laboratory for the Burnside "
                    "process on k-ary n-tuples.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k_flag=True, seed=False):
        p.add_argument("--n", type=int, required=True)
        if k_flag:
            p.add_argument("--k", type=int, default=2)
        if seed:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--stream", type=int, default=0)
        p.add_argument("--out", required=True)

    p = sub.add_parser("kernel", help="exact kernel and stationary law as JSON")
    common(p)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("spectrum", help="eigenvalues and multiplicities (k=2)")
    common(p, k_flag=False)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("basis", help="orthogonal eigenbasis export (k=2)")
    common(p, k_flag=False)
    p.set_defaults(func=_cmd_basis)

    for name, help_text in (("chi2", "exact chi-square curve"),
                            ("tv", "exact total-variation curve")):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--start", required=True,
                       help="state literal | zeros | one-one | half | orbit:i | avg")
        p.add_argument("--steps", required=True, help="single step or lo..hi")
        p.add_argument("--gnuplot", action="store_true",
                       help="also write a gnuplot script next to the CSV")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("avg-chi2", help="average chi-square (exact or log mode)")
    common(p, k_flag=False)
    p.add_argument("--steps", required=True)
    p.add_argument("--mode", choices=("exact", "log"), default="exact")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_avg_chi2)

    p = sub.add_parser("cutoff-scan", help="log-space scan at cutoff multiples")
    p.add_argument("--n", required=True, help="comma-separated n values")
    p.add_argument("--factors", default="0.9,1.0,1.1")
    p.add_argument("--plain-log", action="store_true",
                   help="use log n instead of log((pi/2) n) in the cutoff time")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cutoff_scan)

    p = sub.add_parser("sample", help="chain trajectory or stationary draws")
    common(p, seed=True)
    p.add_argument("--start", default="zeros")
    p.add_argument("--steps", type=int)
    p.add_argument("--stationary", type=int,
                   help="emit this many stationary draws instead of a trajectory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("stats", help="exact alternation and ones moments")
    common(p, k_flag=False)
    p.add_argument("--start", default="zeros")
    p.add_argument("--steps", default="1")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("hist", help="stationary alternation histogram + fit")
    common(p, k_flag=False, seed=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_hist)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_verify)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.time()
    try:
        status = args.func(args)
    except StateSpaceCapError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except (OSError, IOError) as exc:
        print("error: cannot write output: %s" % exc, file=sys.stderr)
        return EXIT_UNWRITABLE
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    outputs = [args.out]
    if args.command == "hist":
        outputs.append(args.out + ".fit.json")
    if getattr(args, "gnuplot", False):
        outputs.append(args.out + ".gp")
    try:
        _emit(args, outputs, started)
    except (OSError, IOError) as exc:
        print("error: cannot write manifest: %s" % exc, file=sys.stderr)
        return EXIT_UNWRITABLE
    return status


def main() -> None:
    sys.exit(dispatch())
