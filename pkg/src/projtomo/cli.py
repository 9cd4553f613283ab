"""Command-line experiment harness.

Every subcommand writes CSV (header row first) to stdout or ``--output``.
Exit codes: 0 success, 1 validation or usage error, 2 capacity error,
3 failed selftest.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import bounds, jordan, pgm, quantum, wss
from .bootstrap import BootstrapConfig, bootstrap_trials, covering_experiment
from .errors import CapacityError, ProjTomoError
from .rng import SeededRng

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_SELFTEST = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _emit(rows: list[list], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return value


def _validate(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


# --- subcommands --------------------------------------------------------------


def cmd_metrics(args) -> list[list]:
    gen = SeededRng(args.seed).gen
    rows = [["pair", "d", "trace_distance", "fidelity", "bures", "affinity",
             "fuchs_van_de_graaf", "bures_trace", "affinity_sandwich"]]
    from .selftest import metric_inequalities

    for i in range(args.samples):
        if args.r:
            rho, sigma = (quantum.haar_projector(args.d, args.r, gen).state() for _ in range(2))
        else:
            rho, sigma = quantum.random_density_matrix(args.d, gen), quantum.random_density_matrix(args.d, gen)
        flags = metric_inequalities(rho, sigma)
        rows.append([i, args.d, quantum.trace_distance(rho, sigma), quantum.fidelity(rho, sigma),
                     quantum.bures_distance(rho, sigma), quantum.affinity(rho, sigma),
                     flags["fuchs_van_de_graaf"], flags["bures_trace"], flags["affinity"]])
    return rows


def cmd_jordan(args) -> list[list]:
    _validate(1 <= args.r <= args.d, "need 1 <= r <= d")
    gen = SeededRng(args.seed).gen
    p, q = quantum.haar_projector(args.d, args.r, gen), quantum.haar_projector(args.d, args.r, gen)
    dec = jordan.jordan_decompose(p, q)
    rows = [["block", "omega", "sine", "kind"]]
    for i, blk in enumerate(dec.blocks):
        kind = "1x1" if blk.omega >= 1 - jordan.BLOCK_TOL else "2x2"
        rows.append([i, blk.omega, blk.sine, kind])
    return rows


def cmd_wss(args) -> list[list]:
    d = args.d if args.d is not None else args.r
    _validate(1 <= args.r <= d, "need 1 <= r <= d")
    return wss.wss_distribution(args.n, wss.Spectrum.uniform(args.r, d)).csv_rows()


def cmd_threshold(args) -> list[list]:
    if args.r is None:
        return [["kind", "d", "epsilon", "threshold"],
                ["pure", args.d, args.epsilon, bounds.pure_threshold(args.d, args.epsilon)]]
    return [["kind", "d", "r", "epsilon", "threshold"],
            ["projector", args.d, args.r, args.epsilon, bounds.projector_threshold(args.d, args.r, args.epsilon)]]


def cmd_pgm_affinity(args) -> list[list]:
    rows = [["n", "d", "r", "expected_affinity", "expected_affinity_float", "bound", "pass"]]
    if args.grid:
        cells = [(n, d, r) for n in range(1, args.n + 1) for d in range(1, args.d + 1) for r in range(1, d + 1)]
    else:
        _validate(args.r is not None, "--r is required unless --grid is given")
        cells = [(args.n, args.d, args.r)]
    for n, d, r in cells:
        value, bound, ok = pgm.pgm_affinity_bound_check(n, d, r)
        rows.append([n, d, r, value, float(value), bound, ok])
    return rows


def cmd_hayashi(args) -> list[list]:
    t = pgm.hayashi_overlaps(args.n, args.d, args.samples, SeededRng(args.seed))
    rows = [["k", "empirical_moment", "std_error", "exact_bound", "within_3se"]]
    for k in range(1, args.kmax + 1):
        tk = t**k
        se = float(tk.std(ddof=1) / math.sqrt(args.samples)) if args.samples > 1 else float("nan")
        bound = bounds.pure_moment_bound(args.n, args.d, k)
        rows.append([k, float(tk.mean()), se, bound, float(tk.mean()) <= float(bound) + 3 * se])
    return rows


def _learner(args) -> pgm.LearnerSpec:
    params = {"n": args.n} if args.learner == "hayashi_pure" else {}
    return pgm.LearnerSpec(args.learner, float(args.epsilon), params)


def cmd_bootstrap(args) -> list[list]:
    oracle = "exact_restriction" if args.oracle_delta is None else ("noisy", args.oracle_delta)
    cfg = BootstrapConfig(args.d, args.r, float(args.epsilon), _learner(args), alpha=args.alpha,
                          n=args.n, c=args.c, bures_oracle=oracle)
    traces = bootstrap_trials(cfg, args.trials, SeededRng(args.seed))
    keys = list(traces[0].scalars()) if traces else []
    rows = [["trial", *keys, "copies_budget"]]
    for i, tr in enumerate(traces):
        s = tr.scalars()
        rows.append([i, *(s[k] for k in keys), cfg.copies_budget])
    return rows


def cmd_covering(args) -> list[list]:
    from .bootstrap import COVERING_COLUMNS

    learner = _learner(args)
    recs = covering_experiment(args.d, args.r, float(args.epsilon), args.alpha, args.trials,
                               SeededRng(args.seed), learner=learner)
    return [COVERING_COLUMNS] + [[rec[c] for c in COVERING_COLUMNS] for rec in recs]


def cmd_selftest(args) -> list[list]:
    from .selftest import run_selftest

    results = run_selftest(fast=args.fast)
    args._selftest_failed = not all(ok for _, ok, _ in results)
    return [["check", "pass", "detail"]] + [[name, ok, detail] for name, ok, detail in results]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projtomo", description="Projector-state tomography experiments.")
    parser.add_argument("--output", "-o", help="write CSV here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, seed=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        if seed:
            p.add_argument("--seed", type=_seed, required=True)
        return p

    p = add("metrics", cmd_metrics, "random-pair metric and inequality sweep", seed=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, help="use rank-r projector states instead of mixed states")
    p.add_argument("--samples", type=_positive_int, default=100)

    p = add("jordan", cmd_jordan, "Jordan block report for a seeded projector pair", seed=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)

    p = add("wss", cmd_wss, "exact weak Schur sampling table for a uniform spectrum")
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int)

    p = add("threshold", cmd_threshold, "sample-complexity lower-bound calculators")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--epsilon", type=_rational, required=True)

    p = add("pgm-affinity", cmd_pgm_affinity, "closed-form PGM affinity and bound check")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int)
    p.add_argument("--grid", action="store_true", help="sweep n' <= n, d' <= d, r <= d'")

    p = add("hayashi", cmd_hayashi, "Hayashi measurement moments against the exact bound", seed=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--kmax", type=_positive_int, default=4)

    for name, fn, text in [("bootstrap", cmd_bootstrap, "bootstrapped learner trials"),
                           ("covering", cmd_covering, "robust covering experiment")]:
        p = add(name, fn, text, seed=True)
        p.add_argument("--d", type=_positive_int, required=True)
        p.add_argument("--r", type=_positive_int, required=True)
        p.add_argument("--epsilon", type=_rational, required=True)
        p.add_argument("--alpha", type=float, default=0.2)
        p.add_argument("--trials", type=_positive_int, default=50)
        p.add_argument("--learner", choices=pgm.LEARNER_KINDS, default="adversarial_discard")
        p.add_argument("--n", type=_nonneg_int, default=0, help="learner copy count (accounting only)")
        if name == "bootstrap":
            p.add_argument("--c", type=float, default=16.0)
            p.add_argument("--oracle-delta", type=float, help="use the noisy Bures oracle with this delta")

    p = add("selftest", cmd_selftest, "run the invariant suite")
    p.add_argument("--fast", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rows = args.func(args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_INVALID
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ProjTomoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    buf = io.StringIO()
    _emit(rows, buf)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_SELFTEST if getattr(args, "_selftest_failed", False) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
