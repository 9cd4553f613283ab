"""Weak Schur sampling: exact outcome tables and a seeded sampler."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .reptheory import SCHUR_ENUM_LIMIT, Partition, num_ssyt, num_syt, partitions_of, schur_eval
from .rng import SeededRng, as_generator


@dataclass(frozen=True)
class Spectrum:
    """Sorted-descending probability vector with exact entries summing to 1."""

    alpha: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        a = tuple(Fraction(x) for x in self.alpha)
        if not a:
            raise DomainError("spectrum must be nonempty")
        if any(x < 0 or x > 1 for x in a):
            raise DomainError("spectrum entries must lie in [0, 1]")
        if sum(a) != 1:
            raise DomainError(f"spectrum sums to {sum(a)}, not 1")
        object.__setattr__(self, "alpha", tuple(sorted(a, reverse=True)))

    @classmethod
    def uniform(cls, r: int, d: int | None = None) -> Spectrum:
        """``(1/r, ..., 1/r, 0, ..., 0)`` of length ``d`` (default ``r``)."""
        d = r if d is None else d
        if not 1 <= r <= d:
            raise DomainError(f"need 1 <= r <= d, got r={r}, d={d}")
        return cls((Fraction(1, r),) * r + (Fraction(0),) * (d - r))

    @property
    def dim(self) -> int:
        return len(self.alpha)

    @property
    def support(self) -> int:
        return sum(1 for x in self.alpha if x > 0)

    def uniform_rank(self) -> int | None:
        """``r`` if this is the uniform distribution on ``r`` outcomes."""
        r = self.support
        return r if all(x == Fraction(1, r) for x in self.alpha[:r]) else None


@dataclass(frozen=True)
class WssDistribution:
    n: int
    d: int
    table: dict

    def total(self) -> Fraction:
        return sum(self.table.values(), Fraction(0))

    def items(self):
        return self.table.items()

    def csv_rows(self, exact: bool = True) -> list[list[str]]:
        rows = [["partition", "prob_num", "prob_den", "prob_float"]]
        for lam, p in self.table.items():
            rows.append([lam.label(), str(p.numerator), str(p.denominator), format(float(p), ".12g")])
        return rows


def wss_distribution(n: int, spectrum: Spectrum, limit: int = SCHUR_ENUM_LIMIT) -> WssDistribution:
    """``Pr[lambda] = dim(lambda) * s_lambda(alpha)`` for every ``lambda ⊢ n`` with ``len <= d``.

    Uniform spectra use the hook-content count
    ``dim(lambda) * num_ssyt(lambda, r) / r^n``; other spectra need
    ``n <= limit``.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    d = spectrum.dim
    r = spectrum.uniform_rank()
    table = {}
    if r is not None:
        denom = r**n
        for lam in partitions_of(n, d):
            table[lam] = Fraction(num_syt(lam) * num_ssyt(lam, r), denom)
    else:
        if n > limit:
            raise CapacityError(f"n = {n} exceeds the tableau limit {limit} for a non-uniform spectrum")
        for lam in partitions_of(n, d):
            table[lam] = num_syt(lam) * Fraction(schur_eval(lam, spectrum.alpha, limit=limit))
    return WssDistribution(n, d, table)


def wss_sample(dist: WssDistribution, rng: SeededRng) -> Partition:
    """Inverse-CDF draw over the table's fixed (reverse-lexicographic) order."""
    return wss_sample_many(dist, 1, rng)[0]


def wss_sample_many(dist: WssDistribution, count: int, rng: SeededRng) -> list[Partition]:
    labels = list(dist.table)
    cdf = np.cumsum([float(p) for p in dist.table.values()])
    cdf[-1] = max(cdf[-1], 1.0)
    u = as_generator(rng).random(count)
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(labels) - 1)
    return [labels[i] for i in idx]


def lambda1_stats(n: int, r: int, samples: int, rng: SeededRng) -> tuple[float, float]:
    """Empirical ``E[lambda_1]`` and ``Pr[lambda_1 >= 2n/r]`` under the uniform rank-r spectrum."""
    if samples < 1:
        raise DomainError("samples must be positive")
    dist = wss_distribution(n, Spectrum.uniform(r))
    draws = wss_sample_many(dist, samples, rng)
    first = np.array([lam.part(1) for lam in draws], dtype=float)
    return float(first.mean()), float(np.mean(first >= 2 * n / r))


def lambda1_exact_mean(n: int, r: int) -> Fraction:
    dist = wss_distribution(n, Spectrum.uniform(r))
    return sum((p * lam.part(1) for lam, p in dist.items()), Fraction(0))


def wss_mean_bound(n: int, r: int) -> float:
    """``n/r + 2 sqrt(n)``."""
    return n / r + 2 * math.sqrt(n)


def dense_wss_probability(lam, rho: np.ndarray) -> float:
    """``tr(Pi_lambda rho^{⊗n})`` with ``Pi_lambda`` built from permutation operators."""
    from itertools import permutations

    from .quantum import permutation_operator, tensor_power
    from .reptheory import character, cycle_type

    lam = Partition(lam)
    n = lam.size
    d = rho.shape[0]
    proj = np.zeros((d**n, d**n), dtype=complex)
    for perm in permutations(range(n)):
        proj += character(lam, cycle_type(perm)) * permutation_operator(perm, d)
    proj *= num_syt(lam) / math.factorial(n)
    return float(np.real(np.trace(proj @ tensor_power(rho, n))))


def spectrum_of(values: Sequence) -> Spectrum:
    return Spectrum(tuple(Fraction(v) for v in values))
