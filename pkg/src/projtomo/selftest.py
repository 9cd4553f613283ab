"""Invariant checks runnable from the command line without pytest."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bounds, jordan, pgm, quantum, reptheory, wss
from .bootstrap import BootstrapConfig, bootstrap_trials
from .rng import SeededRng

Check = Callable[[bool], tuple[bool, str]]


def _pure_moment_identity(fast: bool):
    top = 20 if fast else 50
    ok = all(
        bounds.pure_moment_bound(n, d, 1) == Fraction(n + 1, n + d)
        for n in range(top + 1)
        for d in range(1, top + 1)
    )
    return ok, f"n <= {top}, d <= {top}"


def _pgm_rank_one(fast: bool):
    top = 5 if fast else 8
    bad = [
        (n, d)
        for n in range(1, top + 1)
        for d in range(1, 7)
        if pgm.pgm_expected_affinity(n, d, 1) != Fraction(n + 1, n + d)
    ]
    return not bad, f"mismatches: {bad}"


def _pgm_bound(fast: bool):
    top = 15 if fast else 40
    bad = []
    for n in range(1, top + 1):
        for d in range(1, 6):
            for r in range(1, d + 1):
                value, _, ok = pgm.pgm_affinity_bound_check(n, d, r)
                if not ok or (r == d and value != 1):
                    bad.append((n, d, r))
    return not bad, f"failing cells: {bad}"


def _hayashi(fast: bool):
    samples = 20_000 if fast else 100_000
    t = pgm.hayashi_overlaps(10, 4, samples, SeededRng(7))
    worst = -math.inf
    for k in range(1, 5):
        tk = t**k
        se = tk.std(ddof=1) / math.sqrt(samples)
        worst = max(worst, (tk.mean() - float(bounds.pure_moment_bound(10, 4, k))) / se)
    mean_z = abs(t.mean() - 11 / 14) / (t.std(ddof=1) / math.sqrt(samples))
    return mean_z <= 3 and worst <= 3, f"mean z = {mean_z:.3g}, worst moment z = {worst:.3g}"


def _wss(fast: bool):
    top = 6 if fast else 10
    for n in range(1, top + 1):
        for d in range(1, 7):
            for r in range(1, min(4, d) + 1):
                dist = wss.wss_distribution(n, wss.Spectrum.uniform(r, d))
                if dist.total() != 1 or any(p and lam.length > r for lam, p in dist.items()):
                    return False, f"n={n}, d={d}, r={r}"
    return True, f"n <= {top}"


def _jordan(fast: bool):
    gen = SeededRng(11).gen
    worst = 0.0
    for _ in range(100 if fast else 500):
        d = int(gen.integers(2, 17))
        r = int(gen.integers(1, min(5, d) + 1))
        p, q = quantum.haar_projector(d, r, gen), quantum.haar_projector(d, r, gen)
        td, fid, aff = jordan.blockwise_metrics(jordan.jordan_decompose(p, q))
        ps, qs = p.state(), q.state()
        worst = max(
            worst,
            abs(td - quantum.trace_distance(ps, qs)),
            abs(fid - quantum.fidelity(ps, qs)),
            abs(aff - quantum.affinity(ps, qs)),
        )
    return worst <= 1e-8, f"max deviation {worst:.3g}"


def metric_inequalities(rho, sigma, slack: float = 1e-8) -> dict[str, bool]:
    td = quantum.trace_distance(rho, sigma)
    f = quantum.fidelity(rho, sigma)
    db = quantum.bures_distance(rho, sigma)
    a = quantum.affinity(rho, sigma)
    return {
        "fuchs_van_de_graaf": 1 - f <= td + slack and td <= math.sqrt(max(0.0, 1 - f * f)) + slack,
        "bures_trace": 0.5 * db * db <= td + slack and td <= db + slack,
        "affinity": f * f <= a + slack and a <= f + slack,
    }


def _metrics(fast: bool):
    gen = SeededRng(13).gen
    pairs = 1000 if fast else 10_000
    for i in range(pairs):
        d = int(gen.integers(2, 6))
        rho = quantum.random_density_matrix(d, gen)
        sigma = quantum.random_density_matrix(d, gen)
        flags = metric_inequalities(rho, sigma)
        if not all(flags.values()):
            return False, f"pair {i}: {flags}"
    return True, f"{pairs} pairs"


def _sym(fast: bool):
    for n in range(1, 6):
        for d in range(1, 6):
            if d**n > quantum.SYM_LIMIT:
                continue
            tr = Fraction(float(np.trace(quantum.sym_projector(n, d)))).limit_denominator(math.factorial(n))
            if tr != quantum.sym_dimension(n, d):
                return False, f"trace mismatch at n={n}, d={d}"
    mean, se = quantum.haar_tensor_moment(2, 2, 20_000, SeededRng(17))
    target = quantum.sym_projector(2, 2) / quantum.sym_dimension(2, 2)
    z = np.max(np.abs(mean - target) / np.maximum(se, 1e-12))
    return bool(z <= 3 or np.max(np.abs(mean - target)) < 1e-12), f"max z = {z:.3g}"


def _thresholds(fast: bool):
    a = bounds.pure_threshold(64, Fraction(1, 8))
    b = bounds.projector_threshold(4, 2, Fraction(1, 80))
    return a == 64 and b == 400, f"{a}, {b}"


def _content_ratio(fast: bool):
    for m in range(7):
        for d in range(2, 6):
            for r in range(1, d):
                for lam in reptheory.partitions_of(m, r):
                    for k in range(4):
                        if not reptheory.first_row_is_maximal(lam, k, r, d):
                            return False, f"lam={tuple(lam)}, k={k}, r={r}, d={d}"
    return True, "|lam| <= 6, k <= 3, d <= 5"


def _bootstrap(fast: bool):
    trials = 10 if fast else 50
    eps, alpha = 0.1, 0.3
    cfg = BootstrapConfig(60, 20, eps, pgm.LearnerSpec("adversarial_discard", eps), alpha=alpha)
    runs = bootstrap_trials(cfg, trials, SeededRng(0))
    good = sum(t.tr_R_rho >= 1 - 3 * eps**2 / alpha**2 for t in runs)
    bures_ok = all(
        t.final_bures_error**2 <= 2 * (1 - math.sqrt(t.tr_R_rho)) + 1e-8 for t in runs if t.survived
    )
    need = math.ceil(0.94 * trials)
    return good >= need and bures_ok, f"{good}/{trials} overlap, bures {'ok' if bures_ok else 'violated'}"


CHECKS: list[tuple[str, Check]] = [
    ("pure_moment_identity", _pure_moment_identity),
    ("pgm_rank_one", _pgm_rank_one),
    ("pgm_bound", _pgm_bound),
    ("hayashi_moments", _hayashi),
    ("wss_exactness", _wss),
    ("jordan_equivalence", _jordan),
    ("metric_inequalities", _metrics),
    ("symmetric_subspace", _sym),
    ("threshold_arithmetic", _thresholds),
    ("content_ratio_maximality", _content_ratio),
    ("bootstrap_overlap", _bootstrap),
]


def run_selftest(fast: bool = False) -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(fast)
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
