"""Bootstrapping a trace-distance learner into a Bures-distance learner.

The pipeline runs the learner twice under independent Haar rotations,
spans the two estimates, measures the input against that span, and hands
the restricted state to a Bures oracle.  Every intermediate object the
analysis reasons about is recorded in a :class:`BootstrapTrace`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ProtocolViolationError
from .jordan import align_projector, alignment_threshold, cover_blocks, lift_basis, numerical_rank, robust_cover_check
from .pgm import LearnerSpec, mock_learner_run
from .quantum import (
    DensityMatrix,
    Projector,
    bures_distance,
    haar_unitary,
    restrict_to_subspace,
    trace_distance,
)
from .rng import SeededRng, as_generator

BUDGET_SLACK = 1e-9
COVER_SAMPLES = 200


@dataclass(frozen=True)
class BootstrapConfig:
    """Runtime parameters.

    ``n`` is the learner's copy count (it only enters the accounting);
    ``bures_oracle`` is ``"exact_restriction"`` or ``("noisy", delta)``.
    """

    d: int
    r: int
    epsilon: float
    learner: LearnerSpec
    alpha: float = 0.2
    n: int = 0
    c: float = 16.0
    bures_oracle: object = "exact_restriction"

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.d:
            raise DomainError(f"need 1 <= r <= d, got r={self.r}, d={self.d}")
        if not 0 < self.alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")
        if not 0 < self.epsilon < self.alpha:
            raise DomainError("epsilon must lie in (0, alpha)")
        if self.n < 0 or self.c <= 0:
            raise DomainError("n must be nonnegative and c positive")
        _oracle_delta(self.bures_oracle)

    @property
    def measure_copies(self) -> int:
        return math.ceil(self.c * self.r**2 / self.epsilon**2)

    @property
    def oracle_copies(self) -> int:
        return math.ceil(self.measure_copies / 2)

    @property
    def copies_budget(self) -> int:
        return 2 * self.n + self.measure_copies

    @property
    def threshold(self) -> float:
        return alignment_threshold(self.epsilon, self.alpha)


def _oracle_delta(oracle) -> Optional[float]:
    if oracle == "exact_restriction":
        return None
    if isinstance(oracle, tuple) and len(oracle) == 2 and oracle[0] == "noisy":
        delta = float(oracle[1])
        if not 0 <= delta <= math.sqrt(2):
            raise DomainError("noisy oracle delta must lie in [0, sqrt(2)]")
        return delta
    raise DomainError(f"unknown Bures oracle {oracle!r}")


@dataclass
class BootstrapTrace:
    P_hat_1: Projector
    P_hat_2: Projector
    A1: Projector
    A2: Projector
    B1: Projector
    B2: Projector
    R: Projector
    tr_R_rho: float
    robust_cover: bool
    lift_min_overlap: float
    final_estimate: Optional[DensityMatrix]
    final_bures_error: float
    survived: bool = True
    copies_used: int = 0
    in_outcomes: int = 0
    learner_errors: tuple = field(default_factory=tuple)

    def scalars(self) -> dict:
        return {
            "rank_A1": self.A1.rank,
            "rank_A2": self.A2.rank,
            "rank_B1": self.B1.rank,
            "rank_B2": self.B2.rank,
            "rank_R": self.R.rank,
            "tr_R_rho": self.tr_R_rho,
            "robust_cover": self.robust_cover,
            "lift_min_overlap": self.lift_min_overlap,
            "survived": self.survived,
            "final_bures_error": self.final_bures_error,
            "copies_used": self.copies_used,
            "in_outcomes": self.in_outcomes,
            "learner_error_1": self.learner_errors[0],
            "learner_error_2": self.learner_errors[1],
        }


def span_projector(P1: Projector, P2: Projector, cutoff: float = 1e-8) -> Projector:
    """Projector onto the joint column span of two frames."""
    if P1.dim != P2.dim:
        raise DomainError("projectors live in different dimensions")
    return Projector.span(np.hstack([P1.frame, P2.frame]), cutoff=cutoff)


def _rotated_estimate(cfg: BootstrapConfig, P: Projector, gen: np.random.Generator) -> tuple[Projector, float]:
    u = haar_unitary(cfg.d, gen)
    est = mock_learner_run(cfg.learner, Projector(u @ P.frame, _check=False), gen)
    back = Projector(u.conj().T @ est.frame, _check=False)
    err = trace_distance(P, back)
    if err > cfg.learner.epsilon + BUDGET_SLACK:
        raise ProtocolViolationError(
            f"learner returned trace-distance error {err:.6g} above its budget {cfg.learner.epsilon}"
        )
    return back, err


def noisy_bures_estimate(sigma: DensityMatrix, R: Projector, delta: float) -> DensityMatrix:
    """A state inside ``supp(R)`` at Bures distance exactly ``delta`` from ``sigma``.

    Eigenvectors of ``sigma`` (largest weight first) are tilted toward
    distinct directions of ``supp(R)`` outside ``supp(sigma)``, all by one
    angle chosen so the fidelity is ``1 - delta^2/2``.
    """
    if delta == 0:
        return sigma
    w, v = np.linalg.eigh(sigma.mat)
    order = np.argsort(w)[::-1]
    w, v = np.clip(w[order], 0.0, None), v[:, order]
    k = int(np.sum(w > 1e-10))
    inside = v[:, :k]
    spare = R.frame - inside @ (inside.conj().T @ R.frame)
    room = Projector.span(spare) if np.linalg.norm(spare) > 1e-8 else Projector.empty(R.dim)
    t = min(k, room.rank)
    weight = float(np.sum(w[:t]))
    if t == 0 or delta**2 / 2 > weight:
        raise DomainError(f"no room inside R for a Bures perturbation of size {delta}")
    cos = 1.0 - delta**2 / (2 * weight)
    sin = math.sqrt(max(0.0, 1.0 - cos * cos))
    vecs = v[:, :k].copy()
    vecs[:, :t] = cos * vecs[:, :t] + sin * room.frame[:, :t]
    mat = (vecs * w[:k]) @ vecs.conj().T
    return DensityMatrix.normalized(mat)


def run_bootstrap(cfg: BootstrapConfig, P: Projector, rng) -> BootstrapTrace:
    """Run the bootstrapped learner on the projector state ``P/r``."""
    if P.dim != cfg.d or P.rank != cfg.r:
        raise DomainError(f"input projector has (d, r) = ({P.dim}, {P.rank}), config says ({cfg.d}, {cfg.r})")
    gen = as_generator(rng)
    rho = P.state()

    p1, e1 = _rotated_estimate(cfg, P, gen)
    p2, e2 = _rotated_estimate(cfg, P, gen)
    R = span_projector(p1, p2)
    tr_r = float(np.clip(np.sum(np.abs(R.frame.conj().T @ P.frame) ** 2) / cfg.r, 0.0, 1.0))

    shots = cfg.measure_copies
    hits = int(gen.binomial(shots, tr_r))
    copies = 2 * cfg.n + shots
    survived = hits >= cfg.oracle_copies
    estimate, err = None, float("nan")
    if survived:
        restricted, _ = restrict_to_subspace(rho, R)
        delta = _oracle_delta(cfg.bures_oracle)
        estimate = restricted if delta is None else noisy_bures_estimate(restricted, R, delta)
        err = bures_distance(rho, estimate)

    thr = cfg.threshold
    a1, b1 = align_projector(p1, P, thr), align_projector(P, p1, thr)
    a2, b2 = align_projector(p2, P, thr), align_projector(P, p2, thr)
    cover = robust_cover_check(b1, b2, P)
    lift_min = float("nan")
    if cover:
        lift_min = float(min(lift_basis(P, a1, b1, a2, b2).overlaps))
    return BootstrapTrace(
        P_hat_1=p1,
        P_hat_2=p2,
        A1=a1,
        A2=a2,
        B1=b1,
        B2=b2,
        R=R,
        tr_R_rho=tr_r,
        robust_cover=cover,
        lift_min_overlap=lift_min,
        final_estimate=estimate,
        final_bures_error=err,
        survived=survived,
        copies_used=copies,
        in_outcomes=hits,
        learner_errors=(e1, e2),
    )


def bootstrap_trials(cfg: BootstrapConfig, trials: int, rng: SeededRng, P: Projector | None = None):
    """Independent trials; trial ``i`` uses child stream ``i``.

    A fresh Haar projector is drawn per trial unless ``P`` is given.
    """
    from .quantum import haar_projector

    out = []
    for i in range(trials):
        child = rng.spawn(i)
        target = P if P is not None else haar_projector(cfg.d, cfg.r, child)
        out.append(run_bootstrap(cfg, target, child))
    return out


COVERING_COLUMNS = [
    "trial",
    "rank_B1",
    "rank_B2",
    "rank_sum",
    "rank_ok",
    "max_pair_overlap_sq",
    "overlap_ok",
    "robust_cover",
    "min_B2_on_B1_complement",
]


def _complement_within(P: Projector, sub: Projector) -> Projector:
    if sub.rank == 0:
        return P
    rest = P.frame - sub.frame @ (sub.frame.conj().T @ P.frame)
    if np.linalg.norm(rest) < 1e-8:
        return Projector.empty(P.dim)
    return Projector.span(rest)


def covering_record(P: Projector, b1: Projector, b2: Projector, gen: np.random.Generator) -> dict:
    rank_sum = numerical_rank(b1.matrix + b2.matrix)
    blocks = cover_blocks(b1, b2)
    max_ov = max((ov**2 for _, _, ov in blocks.pairs), default=0.0)
    bar = _complement_within(P, b1)
    if bar.rank == 0:
        min_q = 1.0
    else:
        g = gen.standard_normal((bar.rank, COVER_SAMPLES)) + 1j * gen.standard_normal((bar.rank, COVER_SAMPLES))
        vecs = bar.frame @ (g / np.linalg.norm(g, axis=0))
        min_q = float(np.min(np.sum(np.abs(b2.frame.conj().T @ vecs) ** 2, axis=0)))
    return {
        "rank_B1": b1.rank,
        "rank_B2": b2.rank,
        "rank_sum": rank_sum,
        "rank_ok": rank_sum == P.rank,
        "max_pair_overlap_sq": float(max_ov),
        "overlap_ok": bool(max_ov <= 0.1),
        "robust_cover": robust_cover_check(b1, b2, P),
        "min_B2_on_B1_complement": min_q,
    }


def covering_experiment(d: int, r: int, epsilon: float, alpha: float, trials: int, rng: SeededRng,
                        learner: LearnerSpec | None = None) -> list[dict]:
    """Per-trial covering diagnostics for ``B_i = align(P | P_hat_i)``."""
    learner = learner or LearnerSpec("adversarial_discard", epsilon)
    cfg = BootstrapConfig(d, r, epsilon, learner, alpha=alpha)
    if learner.kind == "adversarial_discard" and math.ceil(epsilon * r - 1e-9) < 1:
        raise DomainError("need ceil(epsilon * r) >= 1")
    from .quantum import haar_projector

    rows = []
    for i in range(trials):
        gen = rng.spawn(i).gen
        P = haar_projector(d, r, gen)
        p1, _ = _rotated_estimate(cfg, P, gen)
        p2, _ = _rotated_estimate(cfg, P, gen)
        b1 = align_projector(P, p1, cfg.threshold)
        b2 = align_projector(P, p2, cfg.threshold)
        rows.append({"trial": i, **covering_record(P, b1, b2, gen)})
    return rows
