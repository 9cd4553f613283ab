"""Pretty good measurement for projector states, plus the mock learners.

The closed form for the expected affinity is exact rational arithmetic
over partitions.  The Hayashi sampler draws the output overlap from its
Beta law.  The dense reference path samples the continuous PGM through
weak Schur sampling followed by a Metropolis walk on U(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Mapping

import numpy as np
import scipy.linalg

from .errors import CapacityError, DomainError
from .quantum import Projector, haar_state, haar_unitary
from .reptheory import (
    Partition,
    centralizer_size,
    character,
    num_ssyt,
    num_syt,
    partitions_of,
    pieri_expand,
)
from .rng import SeededRng, as_generator
from .wss import Spectrum, wss_distribution, wss_sample_many

DENSE_LIMIT = 1024
MCMC_BURN_IN = 200
MCMC_SCALE = 0.3
LEARNER_KINDS = ("hayashi_pure", "adversarial_discard", "uniform_tilt", "exact_oracle")


@dataclass(frozen=True)
class LearnerSpec:
    """A simulated trace-distance learner.

    ``hayashi_pure`` reads ``params["n"]`` (copies) and only handles rank 1.
    """

    kind: str
    epsilon: float
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in LEARNER_KINDS:
            raise DomainError(f"unknown learner kind {self.kind!r}; expected one of {LEARNER_KINDS}")
        if not 0 < self.epsilon <= 1:
            raise DomainError(f"learner epsilon must lie in (0, 1], got {self.epsilon}")
        if self.kind == "hayashi_pure" and int(self.params.get("n", 0)) < 1:
            raise DomainError("hayashi_pure needs params['n'] >= 1")


# --- Hayashi measurement ----------------------------------------------------


def hayashi_overlaps(n: int, d: int, size: int, rng) -> np.ndarray:
    """Overlaps ``t = |<u_hat|u>|^2`` with density proportional to ``t^n (1-t)^(d-2)``."""
    if d < 2:
        raise DomainError("the Hayashi measurement needs d >= 2")
    if n < 1:
        raise DomainError("n must be at least 1")
    return as_generator(rng).beta(n + 1, d - 1, size=size)


def hayashi_sample(u: np.ndarray, n: int, rng) -> np.ndarray:
    """One output of the pure-state PGM on ``u^{⊗n}``."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if d < 2:
        raise DomainError("the Hayashi measurement needs d >= 2")
    u = u / np.linalg.norm(u)
    gen = as_generator(rng)
    t = hayashi_overlaps(n, d, 1, gen)[0]
    w = haar_state(d, gen)
    w = w - np.vdot(u, w) * u
    w /= np.linalg.norm(w)
    phase = np.exp(2j * np.pi * gen.random())
    return phase * (math.sqrt(t) * u + math.sqrt(1.0 - t) * w)


# --- closed-form expected affinity -------------------------------------------


def pgm_expected_affinity(n: int, d: int, r: int) -> Fraction:
    """``E[Aff(P_hat/r, P/r)]`` for the PGM on ``(P/r)^{⊗n}``, exactly.

    Only diagrams with at most ``r`` rows have nonzero weight, so the sum
    runs over those.
    """
    if not 1 <= r <= d:
        raise DomainError(f"need 1 <= r <= d, got r={r}, d={d}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > 400:
        raise CapacityError(f"n = {n} exceeds the closed-form limit 400")
    return _pgm_affinity(n, d, r)


@lru_cache(maxsize=None)
def _pgm_affinity(n: int, d: int, r: int) -> Fraction:
    total = Fraction(0)
    for lam in partitions_of(n, r):
        s_r, s_d = num_ssyt(lam, r), num_ssyt(lam, d)
        inner = Fraction(0)
        for mu in pieri_expand(lam, d):
            mu_r = num_ssyt(mu, r)
            if mu_r:
                inner += Fraction(mu_r * mu_r, num_ssyt(mu, d))
        total += Fraction(s_d, s_r) * num_syt(lam) * inner
    return total / r ** (n + 1)


def pgm_affinity_bound_check(n: int, d: int, r: int) -> tuple[Fraction, Fraction, bool]:
    """``(E[Aff], 1 - 3rd/(2n), E[Aff] >= bound)``."""
    if n < 1:
        raise DomainError("the bound needs n >= 1")
    value = pgm_expected_affinity(n, d, r)
    if value > 1:
        raise AssertionError(f"expected affinity {value} exceeds 1")
    bound = 1 - Fraction(3 * r * d, 2 * n)
    return value, bound, value >= bound


# --- dense reference path ----------------------------------------------------


def cycle_types(n: int) -> list[Partition]:
    return partitions_of(n)


def schur_from_eigenvalues(lam, eigs: np.ndarray) -> np.ndarray:
    """``s_lam`` at each row of ``eigs`` via ``sum_mu chi_lam(mu) p_mu / z_mu``."""
    lam = Partition(lam)
    n = lam.size
    eigs = np.atleast_2d(np.asarray(eigs))
    power = {k: np.sum(eigs**k, axis=-1) for k in range(1, n + 1)}
    out = np.zeros(eigs.shape[0], dtype=eigs.dtype)
    for mu in cycle_types(n):
        chi = character(lam, mu)
        if chi:
            p_mu = np.prod([power[k] for k in mu], axis=0)
            out = out + (chi / centralizer_size(mu)) * p_mu
    return out


def dense_irrep_trace(lam, m: np.ndarray) -> complex:
    """``tr(Pi_lam M^{⊗n}) / dim(lam)`` by explicit character projection (brute force)."""
    from .quantum import permutation_operator, tensor_power
    from .reptheory import cycle_type

    lam = Partition(lam)
    n = lam.size
    d = m.shape[0]
    if d**n > DENSE_LIMIT:
        raise CapacityError(f"d^n = {d**n} exceeds the dense limit {DENSE_LIMIT}")
    big = tensor_power(m, n)
    acc = 0.0
    for perm in permutations(range(n)):
        acc = acc + character(lam, cycle_type(perm)) * np.trace(permutation_operator(perm, d) @ big)
    return acc / math.factorial(n)


def _posterior_weight(lam, fp: np.ndarray, fq: np.ndarray, us: np.ndarray) -> np.ndarray:
    """``s_lam`` of the spectrum of ``P U Q U^† P`` for a batch of unitaries."""
    x = fp.conj().T[None, :, :] @ us @ fq[None, :, :]
    m = x @ np.conj(np.swapaxes(x, -1, -2))
    eigs = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    return np.clip(schur_from_eigenvalues(lam, eigs).real, 0.0, None)


def _hermitian_exp_batch(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def pgm_dense_batch(P: Projector, n: int, count: int, rng, burn_in: int = MCMC_BURN_IN,
                    scale: float = MCMC_SCALE) -> list[Projector]:
    """``count`` independent PGM outputs for input ``P/r`` (one Metropolis chain each)."""
    d, r = P.dim, P.rank
    if d**n > DENSE_LIMIT:
        raise CapacityError(f"d^n = {d**n} exceeds the dense limit {DENSE_LIMIT}")
    if n < 1:
        raise DomainError("n must be at least 1")
    gen = as_generator(rng)
    if r == d:
        return [Projector(np.eye(d, dtype=complex)) for _ in range(count)]
    fq = np.eye(d, dtype=complex)[:, :r]
    lams = wss_sample_many(wss_distribution(n, Spectrum.uniform(r, d)), count, gen)

    us = np.stack([haar_unitary(d, gen) for _ in range(count)])
    order = {}
    for i, lam in enumerate(lams):
        order.setdefault(lam, []).append(i)
    for lam, idx in order.items():
        idx = np.array(idx)
        cur = us[idx]
        w_cur = _posterior_weight(lam, P.frame, fq, cur)
        for _ in range(burn_in):
            g = gen.standard_normal((len(idx), d, d)) + 1j * gen.standard_normal((len(idx), d, d))
            h = scale * 0.5 * (g + np.conj(np.swapaxes(g, -1, -2))) / math.sqrt(2)
            prop = _hermitian_exp_batch(h) @ cur
            w_prop = _posterior_weight(lam, P.frame, fq, prop)
            u = gen.random(len(idx))
            accept = u * w_cur < w_prop
            cur[accept] = prop[accept]
            w_cur[accept] = w_prop[accept]
        us[idx] = cur
    return [Projector(us[i] @ fq, _check=False) for i in range(count)]


def pgm_dense_simulate(P: Projector, n: int, rng) -> Projector:
    """One PGM output for input ``P/r`` (dense reference path, ``d^n <= 1024``)."""
    return pgm_dense_batch(P, n, 1, rng)[0]


# --- mock learners -----------------------------------------------------------


def canonical_frames(P: Projector) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of ``supp(P)`` and its complement that depend only on ``P``'s matrix."""
    m = P.matrix
    q1, _, _ = scipy.linalg.qr(m, pivoting=True)
    q2, _, _ = scipy.linalg.qr(np.eye(P.dim) - m, pivoting=True)
    return q1[:, : P.rank], q2[:, : P.dim - P.rank]


def _split_budget(epsilon: float, r: int) -> tuple[int, float]:
    """``(m, s)`` with ``m`` full discards plus one tilt of sine ``s``, summing to ``epsilon * r``."""
    total = epsilon * r
    m = math.floor(total + 1e-9)
    frac = total - m
    if frac < 1e-9:
        frac = 0.0
    return m, frac


def mock_learner_run(spec: LearnerSpec, P: Projector, rng) -> Projector:
    """Run a simulated learner on the projector state ``P/r``.

    ``adversarial_discard`` swaps ``floor(eps r)`` canonical directions of
    ``P`` for complement directions and tilts one more by the leftover
    angle, so the trace distance is exactly ``eps``.  ``uniform_tilt``
    tilts every canonical direction by ``arcsin(eps)``.
    """
    d, r = P.dim, P.rank
    eps = spec.epsilon
    if spec.kind == "exact_oracle":
        return P
    if spec.kind == "hayashi_pure":
        if r != 1:
            raise DomainError("hayashi_pure handles rank-1 inputs only")
        return Projector(hayashi_sample(P.frame[:, 0], int(spec.params["n"]), rng).reshape(-1, 1))
    inside, outside = canonical_frames(P)
    frame = inside.astype(complex).copy()
    if spec.kind == "adversarial_discard":
        m, frac = _split_budget(eps, r)
        touched = m + (1 if frac else 0)
        if touched > r or touched > d - r:
            raise DomainError(f"cannot corrupt {touched} directions with rank {r} in dimension {d}")
        frame[:, :m] = outside[:, :m]
        if frac:
            frame[:, m] = math.sqrt(1.0 - frac * frac) * inside[:, m] + frac * outside[:, m]
    else:  # uniform_tilt
        if d < 2 * r:
            raise DomainError(f"uniform_tilt needs d >= 2r, got d={d}, r={r}")
        c = math.sqrt(1.0 - eps * eps)
        frame = c * inside + eps * outside[:, :r]
    return Projector(frame)


def uniform_tilt_metrics(epsilon: float) -> tuple[float, float]:
    """``(fidelity, bures)`` of a uniform tilt with trace distance ``epsilon``."""
    fid = math.sqrt(1.0 - epsilon**2)
    return fid, math.sqrt(2.0 * (1.0 - fid))
