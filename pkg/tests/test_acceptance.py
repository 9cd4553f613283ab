"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every criterion records one PASS/FAIL line; the lines are printed in the
pytest terminal summary and when this file is run as a script.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from projtomo.bootstrap import BootstrapConfig, bootstrap_trials
from projtomo.bounds import projector_threshold, pure_moment_bound, pure_threshold
from projtomo.jordan import blockwise_metrics, jordan_decompose
from projtomo.pgm import LearnerSpec, hayashi_overlaps, pgm_expected_affinity
from projtomo.quantum import (
    affinity,
    bures_distance,
    fidelity,
    haar_projector,
    haar_tensor_moment,
    random_density_matrix,
    sym_dimension,
    sym_projector,
    trace_distance,
)
from projtomo.reptheory import content_ratio_product, first_row_insertion, partitions_of, supersets
from projtomo.rng import SeededRng
from projtomo.wss import Spectrum, wss_distribution

RESULTS: list[str] = []


def c1_pure_moment_identity():
    bad = [
        (n, d)
        for n in range(0, 51)
        for d in range(1, 51)
        if pure_moment_bound(n, d, 1) != Fraction(n + 1, n + d)
    ]
    return not bad, f"2550 cells, mismatches {bad[:5]}"


def c2_pgm_rank_one():
    bad = [
        (n, d)
        for n in range(1, 9)
        for d in range(1, 7)
        if pgm_expected_affinity(n, d, 1) != Fraction(n + 1, n + d)
    ]
    return not bad, f"48 cells, mismatches {bad}"


def c3_pgm_bound():
    bad, full_rank_bad, cells = [], [], 0
    for n in range(1, 41):
        for d in range(1, 6):
            for r in range(1, d + 1):
                cells += 1
                value = pgm_expected_affinity(n, d, r)
                if value < 1 - Fraction(3 * r * d, 2 * n) or value > 1:
                    bad.append((n, d, r))
                if r == d and value != 1:
                    full_rank_bad.append((n, d))
    return not bad and not full_rank_bad, f"{cells} cells, bound failures {bad}, r=d failures {full_rank_bad}"


def c4_hayashi():
    n, d, samples = 10, 4, 100_000
    t = hayashi_overlaps(n, d, samples, SeededRng(2024))
    se1 = t.std(ddof=1) / math.sqrt(samples)
    mean_ok = abs(t.mean() - 11 / 14) <= 3 * se1
    parts = [f"mean {t.mean():.5f} vs 11/14 (z={(t.mean() - 11 / 14) / se1:+.2f})"]
    moments_ok = True
    for k in range(1, 5):
        tk = t**k
        se = tk.std(ddof=1) / math.sqrt(samples)
        bound = float(pure_moment_bound(n, d, k))
        moments_ok &= tk.mean() <= bound + 3 * se
        parts.append(f"k={k}: {tk.mean():.5f}<= {bound:.5f}+3se")
    return mean_ok and moments_ok, "; ".join(parts)


def c5_wss_exactness():
    count = 0
    for n in range(1, 11):
        for d in range(1, 7):
            for r in range(1, min(4, d) + 1):
                dist = wss_distribution(n, Spectrum.uniform(r, d))
                count += 1
                if dist.total() != 1:
                    return False, f"n={n} d={d} r={r}: total {dist.total()}"
                if any(p != 0 and lam.length > r for lam, p in dist.items()):
                    return False, f"n={n} d={d} r={r}: support beyond r"
    return True, f"{count} tables exact and supported on len <= r"


def c6_jordan_equivalence():
    gen = SeededRng(6).gen
    worst = 0.0
    for _ in range(500):
        d = int(gen.integers(1, 17))
        r = int(gen.integers(1, min(5, d) + 1))
        p, q = haar_projector(d, r, gen), haar_projector(d, r, gen)
        td, fid, aff = blockwise_metrics(jordan_decompose(p, q))
        ps, qs = p.state(), q.state()
        worst = max(
            worst,
            abs(td - trace_distance(ps, qs)),
            abs(fid - fidelity(ps, qs)),
            abs(aff - affinity(ps, qs)),
        )
    return worst <= 1e-8, f"500 pairs, max deviation {worst:.2e}"


def c7_metric_inequalities():
    gen = SeededRng(7).gen
    slack = 1e-8
    fails = 0
    for i in range(10_000):
        d = int(gen.integers(2, 7))
        kind = i % 3
        if kind == 0:
            rho, sigma = random_density_matrix(d, gen), random_density_matrix(d, gen)
        elif kind == 1:
            rho = random_density_matrix(d, gen, rank=1)
            sigma = random_density_matrix(d, gen, rank=int(gen.integers(1, d + 1)))
        else:
            r = int(gen.integers(1, d + 1))
            rho, sigma = haar_projector(d, r, gen).state(), haar_projector(d, r, gen).state()
        td, f = trace_distance(rho, sigma), fidelity(rho, sigma)
        db, a = bures_distance(rho, sigma), affinity(rho, sigma)
        ok = (
            1 - f <= td + slack
            and td <= math.sqrt(max(0.0, 1 - f * f)) + slack
            and 0.5 * db * db <= td + slack
            and td <= db + slack
            and f * f <= a + slack
            and a <= f + slack
        )
        fails += not ok
    return fails == 0, f"10000 pairs, {fails} violations"


def c8_symmetric_subspace():
    for n in range(1, 6):
        for d in range(1, 6):
            tr = Fraction(float(np.trace(sym_projector(n, d)))).limit_denominator(math.factorial(n))
            if tr != sym_dimension(n, d):
                return False, f"trace {tr} at n={n}, d={d}"
    mean, se = haar_tensor_moment(2, 2, 100_000, SeededRng(8))
    target = sym_projector(2, 2) / sym_dimension(2, 2)
    dev = np.abs(mean - target)
    ok = bool(np.all((dev <= 3 * se) | (dev < 1e-12)))
    z = float(np.max(np.where(se > 0, dev / np.maximum(se, 1e-300), 0.0)))
    return ok, f"traces exact for n, d <= 5; Haar second moment max z={z:.2f}"


def c9_bootstrap_overlap():
    eps, alpha, trials = 0.1, 0.3, 50
    cfg = BootstrapConfig(60, 20, eps, LearnerSpec("adversarial_discard", eps), alpha=alpha)
    traces = bootstrap_trials(cfg, trials, SeededRng(9))
    target = 1 - 3 * eps**2 / alpha**2
    good = sum(t.tr_R_rho >= target for t in traces)
    # compare squared distances so sqrt round-off near zero does not dominate
    bures_bad = [
        i
        for i, t in enumerate(traces)
        if t.survived and t.final_bures_error**2 > 2 * (1 - math.sqrt(t.tr_R_rho)) + 1e-8
    ]
    survived = sum(t.survived for t in traces)
    return good >= 47 and not bures_bad, (
        f"tr(R rho) >= {target:.4f} in {good}/50; {survived} survived; Bures bound violated in {bures_bad}"
    )


def c10_thresholds():
    a = pure_threshold(64, Fraction(1, 8))
    b = projector_threshold(4, 2, Fraction(1, 80))
    return a == 64 and b == 400, f"pure {a}, projector {b}"


def c11_content_ratio_maximality():
    checked = 0
    for m in range(0, 7):
        for d in range(2, 6):
            for r in range(1, d):
                for lam in partitions_of(m, r):
                    for k in range(0, 4):
                        best = content_ratio_product(lam, first_row_insertion(lam, k), r, d)
                        for tau in supersets(lam, k, d):
                            checked += 1
                            if content_ratio_product(lam, tau, r, d) > best:
                                return False, f"lam={tuple(lam)} k={k} r={r} d={d} tau={tuple(tau)}"
    return True, f"{checked} (lam, tau) pairs with len(lam) <= r"


CRITERIA = [
    (1, "exact pure-moment identity", c1_pure_moment_identity, 1.0),
    (2, "PGM closed form at r=1", c2_pgm_rank_one, 30.0),
    (3, "PGM affinity bound", c3_pgm_bound, 120.0),
    (4, "Hayashi Monte-Carlo", c4_hayashi, 60.0),
    (5, "WSS exactness", c5_wss_exactness, 30.0),
    (6, "Jordan equivalence oracle", c6_jordan_equivalence, 60.0),
    (7, "metric-inequality suite", c7_metric_inequalities, 120.0),
    (8, "symmetric subspace", c8_symmetric_subspace, 60.0),
    (9, "bootstrap overlap", c9_bootstrap_overlap, 300.0),
    (10, "threshold arithmetic", c10_thresholds, 1.0),
    (11, "content-ratio maximality", c11_content_ratio_maximality, 60.0),
]


def evaluate(number, name, fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {number:2d} {name}: {detail} ({elapsed:.2f}s, budget {budget:g}s)"
    RESULTS.append(line)
    print(line)
    return ok, in_time, line


@pytest.mark.parametrize("number,name,fn,budget", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_acceptance(number, name, fn, budget):
    ok, in_time, line = evaluate(number, name, fn, budget)
    assert ok, line
    assert in_time, line


if __name__ == "__main__":
    for crit in CRITERIA:
        evaluate(*crit)
