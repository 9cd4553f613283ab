"""Moment bounds and sample-complexity thresholds as exact calculators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError, ValidityError

PURE_EPS_MAX_SQ = Fraction(1, 48)
PROJ_EPS_MAX = Fraction(1, 80)
_REL_TOL = 1e-12


@dataclass(frozen=True)
class MomentBoundParams:
    n: int
    d: int
    r: int = 1
    k: int = 1
    lambda1: int = 0

    def __post_init__(self) -> None:
        if min(self.n, self.d, self.r, self.k, self.lambda1) < 0:
            raise DomainError("moment-bound parameters must be nonnegative")
        if self.r > self.d:
            raise DomainError(f"rank {self.r} exceeds dimension {self.d}")


def pure_moment_bound(n: int, d: int, k: int) -> Fraction:
    """``C(d+n-1, n) / C(d+n+k-1, n+k)``, i.e. ``prod_{i=1..k} (n+i)/(n+d+i-1)``."""
    if d < 1 or n < 0 or k < 0:
        raise DomainError("need d >= 1 and n, k >= 0")
    return Fraction(math.comb(d + n - 1, n), math.comb(d + n + k - 1, n + k))


def pure_moment_bound_loose(n: int, d: int, k: int) -> float:
    """``((n+k)/(d+n+k-1))^k``; never below :func:`pure_moment_bound`."""
    if d < 1 or n < 0 or k < 0:
        raise DomainError("need d >= 1 and n, k >= 0")
    if k == 0:
        return 1.0
    return float(Fraction(n + k, d + n + k - 1) ** k)


def projector_affinity_moment_bound(lambda1: int, n: int, d: int, r: int, k: int) -> Fraction:
    """``prod_{i=1..k} (r+lambda1+i-1)/(d+lambda1+i-1)``: the k-th affinity moment given ``lambda_1``."""
    MomentBoundParams(n, d, r, k, lambda1)
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= Fraction(r + lambda1 + i - 1, d + lambda1 + i - 1)
    return out


def projector_affinity_moment_bound_loose(lambda1: int, n: int, d: int, r: int, k: int) -> float:
    MomentBoundParams(n, d, r, k, lambda1)
    if k == 0:
        return 1.0
    return float(Fraction(r + lambda1 + k - 1, d + lambda1 + k - 1) ** k)


def averaged_projector_bound(n: int, d: int, r: int, k: int) -> Fraction:
    """``E_lambda`` of the conditional bound under weak Schur sampling of ``P/r``."""
    from .wss import Spectrum, wss_distribution

    dist = wss_distribution(n, Spectrum.uniform(r, d))
    return sum(
        (p * projector_affinity_moment_bound(lam.part(1), n, d, r, k) for lam, p in dist.items() if p),
        Fraction(0),
    )


def _exact(x) -> Fraction | float:
    return Fraction(x) if isinstance(x, (int, Rational)) else float(x)


def choose_k(epsilon) -> int:
    """``floor(1 / (16 eps^2))``."""
    eps = _exact(epsilon)
    if not eps > 0:
        raise DomainError("epsilon must be positive")
    if isinstance(eps, Fraction):
        return math.floor(1 / (16 * eps * eps))
    # guard float rounding right at integer boundaries (e.g. eps = 1/8)
    val = 1.0 / (16.0 * eps * eps)
    near = round(val)
    return near if abs(val - near) <= _REL_TOL * max(1.0, val) else math.floor(val)


def _le(x, bound) -> bool:
    if isinstance(x, Fraction):
        return x <= bound
    return x <= float(bound) * (1 + _REL_TOL)


def pure_threshold(d: int, epsilon):
    """``d / (64 eps^2)``; valid for ``d >= 2`` and ``0 < eps <= 1/sqrt(48)``."""
    eps = _exact(epsilon)
    if d < 2 or not eps > 0 or not _le(eps * eps, PURE_EPS_MAX_SQ):
        raise ValidityError(
            f"pure-state threshold requires d >= 2 and 0 < epsilon <= 1/sqrt(48); got d={d}, epsilon={epsilon}"
        )
    if isinstance(eps, Fraction):
        return Fraction(d) / (64 * eps * eps)
    return d / (64.0 * eps * eps)


def projector_threshold(d: int, r: int, epsilon):
    """``r d / (128 eps^2)``; valid for ``d >= 2``, ``1 <= r <= d/2`` and ``0 < eps <= 1/80``."""
    eps = _exact(epsilon)
    if d < 2 or r < 1 or 2 * r > d or not eps > 0 or not _le(eps, PROJ_EPS_MAX):
        raise ValidityError(
            "projector threshold requires d >= 2, 1 <= r <= d/2 and 0 < epsilon <= 1/80; "
            f"got d={d}, r={r}, epsilon={epsilon}"
        )
    if isinstance(eps, Fraction):
        return Fraction(r * d) / (128 * eps * eps)
    return r * d / (128.0 * eps * eps)
