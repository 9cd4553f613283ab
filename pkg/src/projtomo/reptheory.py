"""Exact combinatorics of partitions and Young tableaux.

Everything here is integer or :class:`fractions.Fraction` arithmetic.
Cells are 1-indexed ``(row, column)`` pairs; the content of ``(i, j)`` is
``j - i``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError

Rational = Fraction
SCHUR_ENUM_LIMIT = 12


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()) -> Partition:
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise DomainError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """``lambda_i`` (1-indexed), zero past the last row."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield (i, j)

    def conjugate(self) -> Partition:
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p >= j) for j in range(1, self[0] + 1))

    def contains(self, other: Sequence[int]) -> bool:
        """Diagram containment ``other ⊆ self``."""
        other = Partition(other)
        return len(other) <= len(self) and all(o <= s for o, s in zip(other, self))

    def add_box(self, i: int) -> Partition | None:
        """``self + e_i`` if that is a valid partition, else ``None``."""
        parts = list(self) + [0]
        if i < 1 or i > len(parts):
            return None
        if i > 1 and parts[i - 2] <= parts[i - 1]:
            return None
        parts[i - 1] += 1
        return Partition(parts)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"

    def label(self) -> str:
        return "-".join(str(p) for p in self)


def as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def partitions_of(n: int, max_len: int | None = None) -> list[Partition]:
    """Partitions of ``n`` with at most ``max_len`` parts, reverse-lexicographic."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if max_len is None:
        max_len = n
    if max_len < 0:
        raise DomainError("max_len must be nonnegative")
    return [Partition(p) for p in _partitions(n, n, max_len)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int, max_len: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first, max_len - 1):
            out.append((first,) + rest)
    return tuple(out)


def content(cell: tuple[int, int]) -> int:
    i, j = cell
    return j - i


def hook_length(lam, cell: tuple[int, int]) -> int:
    lam = as_partition(lam)
    i, j = cell
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise DomainError(f"cell {cell} is not in {tuple(lam)}")
    arm = lam[i - 1] - j
    leg = sum(1 for row in lam[i:] if row >= j)
    return arm + leg + 1


def _hook_product(lam: Partition) -> int:
    return math.prod(hook_length(lam, c) for c in lam.cells())


@lru_cache(maxsize=None)
def num_syt(lam) -> int:
    """Standard Young tableaux of shape ``lam`` (hook length formula)."""
    lam = as_partition(lam)
    return math.factorial(lam.size) // _hook_product(lam)


@lru_cache(maxsize=None)
def num_ssyt(lam, r: int) -> int:
    """Semistandard tableaux with entries in ``1..r`` (hook-content formula)."""
    lam = as_partition(lam)
    if r < 0:
        raise DomainError("r must be nonnegative")
    if len(lam) > r:
        return 0
    num = math.prod(r + content(c) for c in lam.cells())
    return num // _hook_product(lam)


def _uniform_value(x: Sequence):
    first = x[0]
    return first if all(v == first for v in x) else None


def schur_eval(lam, x: Sequence, limit: int = SCHUR_ENUM_LIMIT):
    """``s_lam(x)``: sum of ``x^T`` over semistandard tableaux ``T`` of shape ``lam``.

    Exact when ``x`` holds Fractions or ints.  Constant vectors use the
    hook-content count with no size limit; otherwise ``|lam|`` must not
    exceed ``limit``.  The tableau sum is organised by peeling off the
    horizontal strip holding the largest entry.
    """
    lam = as_partition(lam)
    x = list(x)
    if not lam:
        return type(x[0])(1) if x else 1
    if not x:
        return 0
    c = _uniform_value(x)
    if c is not None:
        return c ** lam.size * num_ssyt(lam, len(x))
    if lam.size > limit:
        raise CapacityError(f"|lambda| = {lam.size} exceeds the tableau limit {limit}")

    @lru_cache(maxsize=None)
    def rec(mu: tuple[int, ...], m: int):
        if not mu:
            return 1
        if m == 0 or len(mu) > m:
            return 0
        xm = x[m - 1]
        total = 0
        ranges = [range(mu[i + 1] if i + 1 < len(mu) else 0, mu[i] + 1) for i in range(len(mu))]
        for nu in product(*ranges):
            nu_t = tuple(p for p in nu if p > 0)
            if len(nu_t) > m - 1:
                continue
            strip = sum(mu) - sum(nu_t)
            sub = rec(nu_t, m - 1)
            if sub:
                total += sub * xm ** strip
        return total

    return rec(tuple(lam), len(x))


def pieri_expand(lam, d: int) -> list[Partition]:
    """All valid ``lam + e_i`` with at most ``d`` rows, ordered by ``i``."""
    lam = as_partition(lam)
    out = []
    for i in range(1, len(lam) + 2):
        nxt = lam.add_box(i)
        if nxt is not None and len(nxt) <= d:
            out.append(nxt)
    return out


def lr_admissible(lam, mu, tau, d: int) -> bool:
    """Necessary conditions for a nonzero Littlewood-Richardson coefficient.

    ``|lam| + |mu| = |tau|``, ``lam ⊆ tau``, ``mu ⊆ tau`` and ``len(tau) <= d``.
    A ``True`` result does not certify that the coefficient is positive.
    """
    lam, mu, tau = as_partition(lam), as_partition(mu), as_partition(tau)
    return (
        lam.size + mu.size == tau.size
        and tau.contains(lam)
        and tau.contains(mu)
        and len(tau) <= d
    )


def skew_cells(lam, tau) -> list[tuple[int, int]]:
    lam, tau = as_partition(lam), as_partition(tau)
    if not tau.contains(lam):
        raise DomainError(f"{tuple(lam)} is not contained in {tuple(tau)}")
    return [(i, j) for (i, j) in tau.cells() if j > lam.part(i)]


def content_ratio_product(lam, tau, r: int, d: int) -> Fraction:
    """``prod over cells of tau/lam of (r + content) / (d + content)``."""
    out = Fraction(1)
    for cell in skew_cells(lam, tau):
        c = content(cell)
        if d + c == 0:
            raise DomainError("d + content vanishes; tau has more than d rows")
        out *= Fraction(r + c, d + c)
    return out


def haar_irrep_scalar(lam, r: int, d: int) -> Fraction:
    """``s_lam(1^r) / s_lam(1^d)``, the scalar of ``E[nu_lam(P)]`` for Haar rank-r ``P``."""
    lam = as_partition(lam)
    den = num_ssyt(lam, d)
    if den == 0:
        raise DomainError(f"s_lambda(1^d) vanishes: {tuple(lam)} has more than {d} rows")
    return Fraction(num_ssyt(lam, r), den)


def first_row_insertion(lam, k: int) -> Partition:
    lam = as_partition(lam)
    parts = list(lam) or [0]
    parts[0] += k
    return Partition(parts)


def supersets(lam, k: int, max_len: int) -> list[Partition]:
    """Every ``tau ⊇ lam`` with ``|tau / lam| = k`` and at most ``max_len`` rows."""
    lam = as_partition(lam)
    level = {lam}
    for _ in range(k):
        nxt = set()
        for mu in level:
            nxt.update(pieri_expand(mu, max_len))
        level = nxt
    return sorted(level, reverse=True)


# --- symmetric-group characters ------------------------------------------


def _rim_hooks(lam: tuple[int, ...], size: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield ``(lam minus a border strip of length size, height)``."""
    # beta-numbers: removing a border strip of length s <=> moving a bead down by s
    n = len(lam)
    beta = [lam[i] + (n - 1 - i) for i in range(n)]
    bset = set(beta)
    for idx, b in enumerate(beta):
        nb = b - size
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for other in beta if nb < other < b)
        new_beta = sorted([v for v in beta if v != b] + [nb], reverse=True)
        parts = tuple(new_beta[i] - (n - 1 - i) for i in range(n))
        yield tuple(p for p in parts if p > 0), height


@lru_cache(maxsize=None)
def character(lam, cycle_type) -> int:
    """``chi_lam`` on a permutation of the given cycle type (Murnaghan-Nakayama)."""
    lam = tuple(as_partition(lam))
    cycles = tuple(sorted((int(c) for c in cycle_type if c > 0), reverse=True))
    if sum(lam) != sum(cycles):
        raise DomainError("shape and cycle type have different sizes")
    if not cycles:
        return 1
    first, rest = cycles[0], cycles[1:]
    total = 0
    for smaller, height in _rim_hooks(lam, first):
        total += (-1) ** height * character(smaller, rest)
    return total


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def centralizer_size(mu) -> int:
    """``z_mu = prod_k k^{m_k} m_k!`` for the cycle type ``mu``."""
    mu = tuple(mu)
    out = 1
    for k in set(mu):
        m = mu.count(k)
        out *= k**m * math.factorial(m)
    return out


def first_row_is_maximal(lam, k: int, r: int, d: int) -> bool:
    """Whether adding ``k`` boxes to row 1 maximizes ``content_ratio_product`` over all ``tau``.

    Candidates are every ``tau ⊇ lam`` with ``k`` extra boxes and at most
    ``d`` rows.  Meaningful for ``len(lam) <= r < d``.
    """
    best = content_ratio_product(lam, first_row_insertion(lam, k), r, d)
    return all(content_ratio_product(lam, tau, r, d) <= best for tau in supersets(lam, k, d))
