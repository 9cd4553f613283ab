"""Jordan decompositions of projector pairs and the subspace geometry built on them.

Pairs of equal-rank projectors are decomposed through the SVD of the
cross-Gram matrix of their frames (principal angles).  Zero singular values
are the merged pairs of opposite 1x1 blocks, so an equal-rank pair always
yields exactly ``r`` blocks.  Blocks are sorted by descending overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .quantum import Projector

BLOCK_TOL = 1e-8
COVER_OVERLAP = 0.1


@dataclass(frozen=True)
class JordanBlock:
    u: np.ndarray
    v: np.ndarray
    omega: float
    sine: float = float("nan")

    def __post_init__(self) -> None:
        if math.isnan(self.sine):
            # ||v - <u|v> u|| stays accurate when the angle is tiny
            object.__setattr__(self, "sine", float(np.linalg.norm(self.v - np.vdot(self.u, self.v) * self.u)))


@dataclass(frozen=True)
class JordanDecomposition:
    blocks: tuple[JordanBlock, ...]
    dim: int
    rank: int

    @property
    def omegas(self) -> np.ndarray:
        return np.array([b.omega for b in self.blocks])

    @property
    def sines(self) -> np.ndarray:
        return np.array([b.sine for b in self.blocks])

    def u_frame(self) -> np.ndarray:
        return np.column_stack([b.u for b in self.blocks]) if self.blocks else np.zeros((self.dim, 0))

    def v_frame(self) -> np.ndarray:
        return np.column_stack([b.v for b in self.blocks]) if self.blocks else np.zeros((self.dim, 0))


def principal_pairs(f1: np.ndarray, f2: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Principal vectors of two frames.

    Returns ``(U, V, s)`` with ``U = f1 W`` and ``V = f2 Z`` where
    ``f1^† f2 = W diag(s) Z^†`` is a full SVD; the first ``min(a, b)``
    columns are paired with ``<U_i|V_i> = s_i >= 0``, the rest are unpaired.
    """
    g = f1.conj().T @ f2
    if g.size == 0:
        return f1.copy(), f2.copy(), np.zeros(0)
    w, s, zh = np.linalg.svd(g, full_matrices=True)
    return f1 @ w, f2 @ zh.conj().T, np.clip(s, 0.0, 1.0)


def jordan_decompose(P: Projector, Q: Projector) -> JordanDecomposition:
    """Jordan vectors and overlaps of two equal-rank projectors."""
    if P.dim != Q.dim:
        raise DomainError("projectors live in different dimensions")
    if P.rank != Q.rank:
        raise DomainError(f"ranks differ ({P.rank} vs {Q.rank}); equal ranks are required")
    u, v, s = principal_pairs(P.frame, Q.frame)
    blocks = tuple(JordanBlock(u[:, i].copy(), v[:, i].copy(), float(s[i])) for i in range(P.rank))
    return JordanDecomposition(blocks, P.dim, P.rank)


def blockwise_metrics(dec: JordanDecomposition) -> tuple[float, float, float]:
    """``(trace distance, fidelity, affinity)`` of the two projector states."""
    w = dec.omegas
    r = dec.rank
    td = float(np.sum(dec.sines) / r)
    return td, float(np.sum(w) / r), float(np.sum(w**2) / r)


def blockwise_bures(dec: JordanDecomposition) -> float:
    _, fid, _ = blockwise_metrics(dec)
    return math.sqrt(max(0.0, 2.0 * (1.0 - fid)))


def align_projector(P1: Projector, P2: Projector, threshold: float, tol: float = 1e-12) -> Projector:
    """Span of the Jordan vectors of ``P1`` whose squared overlap is at least ``threshold``."""
    dec = jordan_decompose(P1, P2)
    keep = [b.u for b in dec.blocks if b.omega**2 >= threshold - tol]
    if not keep:
        return Projector.empty(P1.dim)
    return Projector.span(np.column_stack(keep))


def alignment_threshold(epsilon: float, alpha: float) -> float:
    """``1 - epsilon^2 / alpha^2``."""
    return 1.0 - (epsilon / alpha) ** 2


def numerical_rank(m: np.ndarray, tol: float = BLOCK_TOL) -> int:
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    return int(np.sum(w > tol))


class CoverBlocks(NamedTuple):
    """Block structure of two subprojectors ``Pi1``, ``Pi2``.

    ``fixed1`` are 1x1 blocks fixed by ``Pi1``; ``fixed2`` are 1x1 blocks
    fixed by ``Pi2`` but not ``Pi1``; ``pairs`` are the 2x2 blocks as
    ``(w1, w2, overlap)`` with ``<w1|w2> = overlap`` real.
    """

    fixed1: list
    fixed2: list
    pairs: list


def cover_blocks(Pi1: Projector, Pi2: Projector, tol: float = BLOCK_TOL) -> CoverBlocks:
    u, v, s = principal_pairs(Pi1.frame, Pi2.frame)
    m = len(s)
    fixed1, fixed2, pairs = [], [], []
    for i in range(Pi1.rank):
        if i < m and tol < s[i] < 1.0 - tol:
            pairs.append((u[:, i], v[:, i], float(s[i])))
        else:
            fixed1.append(u[:, i])
    for i in range(Pi2.rank):
        if i < m and s[i] >= 1.0 - tol:
            continue  # shared with Pi1
        if i < m and s[i] > tol:
            continue  # second vector of a 2x2 block
        fixed2.append(v[:, i])
    return CoverBlocks(fixed1, fixed2, pairs)


def robust_cover_check(Pi1: Projector, Pi2: Projector, Pi: Projector) -> bool:
    """Whether ``Pi1`` and ``Pi2`` robustly cover ``Pi``.

    Requires ``rank(Pi1 + Pi2) = rank(Pi)`` and every 2x2 Jordan block of
    the pair to have squared overlap at most 0.1.
    """
    if not (Pi.contains(Pi1) and Pi.contains(Pi2)):
        raise DomainError("Pi1 and Pi2 must be subprojectors of Pi")
    if numerical_rank(Pi1.matrix + Pi2.matrix) != Pi.rank:
        return False
    blocks = cover_blocks(Pi1, Pi2)
    return all(ov**2 <= COVER_OVERLAP for _, _, ov in blocks.pairs)


class BasisLift(NamedTuple):
    basis: list
    lifted: list
    overlaps: list
    kinds: list


def _lift_through(pair_dec: JordanDecomposition, psi: np.ndarray) -> np.ndarray:
    """Preimage of ``psi`` in the aligned subspace, normalized.

    ``pair_dec`` pairs the aligned vectors ``a_i`` (first) with their Jordan
    partners ``b_i`` inside ``P`` (second): ``sum_i <b_i|psi> / <b_i|a_i> a_i``.
    """
    out = np.zeros_like(psi)
    for blk in pair_dec.blocks:
        ov = np.vdot(blk.v, blk.u)
        if abs(ov) < BLOCK_TOL:
            raise DomainError("aligned block has vanishing overlap; cannot lift")
        out = out + (np.vdot(blk.v, psi) / ov) * blk.u
    return out / np.linalg.norm(out)


def lift_basis(P: Projector, A1: Projector, B1: Projector, A2: Projector, B2: Projector) -> BasisLift:
    """Orthonormal basis of ``supp(P)`` adapted to ``(B1, B2)`` and its lift into ``supp(A1 + A2)``.

    ``A_i`` and ``B_i`` must be matched aligned subspaces (``A_i`` inside the
    estimate, ``B_i`` inside ``P``) from one Jordan decomposition, and
    ``B1``, ``B2`` must robustly cover ``P``.  Vectors of ``supp(B1)`` lift
    through ``A1``, vectors of ``supp(B2)`` through ``A2``, and each
    orthogonalized partner ``w1_perp`` lifts as
    ``lift(w2) - <w1|w2> lift(w1)``.
    """
    if A1.rank != B1.rank or A2.rank != B2.rank:
        raise DomainError("aligned pairs must have equal ranks")
    if not robust_cover_check(B1, B2, P):
        raise DomainError("B1 and B2 do not robustly cover P")
    dec1 = jordan_decompose(A1, B1)
    dec2 = jordan_decompose(A2, B2)
    blocks = cover_blocks(B1, B2)

    basis, lifted, kinds = [], [], []
    for u in blocks.fixed1:
        basis.append(u)
        lifted.append(_lift_through(dec1, u))
        kinds.append("B1")
    for v in blocks.fixed2:
        basis.append(v)
        lifted.append(_lift_through(dec2, v))
        kinds.append("B2")
    for w1, w2, ov in blocks.pairs:
        w1_lift = _lift_through(dec1, w1)
        w2_lift = _lift_through(dec2, w2)
        perp = w2 - ov * w1
        perp_lift = w2_lift - ov * w1_lift
        basis.extend([w1, perp / np.linalg.norm(perp)])
        lifted.extend([w1_lift, perp_lift / np.linalg.norm(perp_lift)])
        kinds.extend(["B12", "B12-perp"])
    overlaps = [float(abs(np.vdot(a, b)) ** 2) for a, b in zip(basis, lifted)]
    return BasisLift(basis, lifted, overlaps, kinds)


def jordan_decompose_recursive(P: Projector, Q: Projector, tol: float = 1e-9) -> list[tuple[int, np.ndarray]]:
    """Block decomposition by eigenvectors of ``P + Q`` (small-dimension cross-check).

    Returns ``(block_dimension, basis_columns)`` for each invariant block.
    """
    p, q = P.matrix, Q.matrix
    d = P.dim
    remaining = np.eye(d, dtype=complex)
    blocks = []
    while remaining.shape[1] > 0:
        r_op = remaining.conj().T @ (p + q) @ remaining
        _, vecs = np.linalg.eigh(0.5 * (r_op + r_op.conj().T))
        x = remaining @ vecs[:, -1]
        px = p @ x
        resid = px - np.vdot(x, px) * x
        if np.linalg.norm(resid) < tol:
            basis = x.reshape(-1, 1)
        else:
            basis = np.linalg.qr(np.column_stack([x, px]))[0]
        blocks.append((basis.shape[1], basis))
        proj = remaining.conj().T @ basis
        full = np.linalg.qr(np.column_stack([proj, np.eye(remaining.shape[1])]))[0]
        remaining = remaining @ full[:, basis.shape[1]: remaining.shape[1]]
    return blocks
