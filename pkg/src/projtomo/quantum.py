"""Dense linear algebra for quantum states.

Density matrices, projectors stored by an isometry frame, Haar sampling,
the four distance measures (trace distance, fidelity, Bures distance,
affinity), rounding to a projector state, restriction to a subspace, a
binary projective measurement, and symmetric-subspace utilities.

Tolerances:
    construction invariants  1e-10
    eigenvalue clipping      1e-12
    PSD acceptance           1e-9
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import CapacityError, DegenerateRestrictionError, DomainError
from .rng import SeededRng, as_generator

ATOL = 1e-10
EIG_CLIP = 1e-12
PSD_TOL = 1e-9
SYM_LIMIT = 4096


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def approx_equal(a, b, atol: float = ATOL) -> bool:
    """Entrywise comparison of two matrices at absolute tolerance ``atol``."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, PSD, trace-one ``d x d`` matrix."""

    mat: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DomainError(f"density matrix must be square and nonempty, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > ATOL:
            raise DomainError(f"density matrix trace is {np.trace(m).real:.3g}, not 1")
        if np.linalg.eigvalsh(hermitize(m))[0] < -PSD_TOL:
            raise DomainError("density matrix is not PSD")
        object.__setattr__(self, "mat", _freeze(m))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_pure(cls, vec) -> DensityMatrix:
        v = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def normalized(cls, m) -> DensityMatrix:
        """Symmetrize and rescale a PSD matrix to unit trace."""
        m = hermitize(np.asarray(m, dtype=complex))
        t = np.trace(m).real
        if t <= EIG_CLIP:
            raise DegenerateRestrictionError("matrix has no weight to normalize")
        return cls(m / t)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(hermitize(self.mat))[::-1]


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector stored as a ``d x r`` column-orthonormal frame.

    The dense matrix ``frame @ frame^dagger`` is derived on demand; the
    rank is exact by construction.  Rank zero is allowed.
    """

    frame: np.ndarray
    _check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        f = np.asarray(self.frame, dtype=complex)
        if f.ndim == 1:
            f = f.reshape(-1, 1)
        if f.ndim != 2 or f.shape[0] == 0 or f.shape[1] > f.shape[0]:
            raise DomainError(f"projector frame must be d x r with r <= d, got {f.shape}")
        if not np.all(np.isfinite(f)):
            raise DomainError("projector frame has non-finite entries")
        if self._check and f.shape[1] > 0:
            gram = f.conj().T @ f
            if np.max(np.abs(gram - np.eye(f.shape[1]))) > ATOL:
                raise DomainError("projector frame is not column-orthonormal")
        object.__setattr__(self, "frame", _freeze(f))

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def rank(self) -> int:
        return self.frame.shape[1]

    @cached_property
    def matrix(self) -> np.ndarray:
        m = self.frame @ self.frame.conj().T
        m.setflags(write=False)
        return m

    def state(self) -> DensityMatrix:
        """The projector state ``P / rank``."""
        if self.rank == 0:
            raise DomainError("rank-0 projector has no associated state")
        return DensityMatrix(hermitize(self.matrix) / self.rank)

    def complement(self) -> Projector:
        """Projector onto the orthogonal complement in ``C^d``."""
        if self.rank == 0:
            return Projector(np.eye(self.dim, dtype=complex))
        q, _ = np.linalg.qr(self.frame, mode="complete")
        return Projector(q[:, self.rank:], _check=False)

    def contains(self, other: Projector, atol: float = 1e-8) -> bool:
        """True when ``supp(other)`` lies inside ``supp(self)``."""
        if other.rank == 0:
            return True
        resid = other.frame - self.frame @ (self.frame.conj().T @ other.frame)
        return float(np.linalg.norm(resid, 2)) <= atol

    @classmethod
    def empty(cls, d: int) -> Projector:
        return cls(np.zeros((d, 0), dtype=complex))

    @classmethod
    def from_matrix(cls, m, atol: float = 1e-8) -> Projector:
        """Recover the frame of a dense projector matrix (eigenvalues > 1/2)."""
        w, v = np.linalg.eigh(hermitize(np.asarray(m, dtype=complex)))
        if np.any((w > atol) & (w < 1 - atol)):
            raise DomainError("matrix is not a projector")
        return cls(v[:, w > 0.5])

    @classmethod
    def span(cls, vectors, cutoff: float = 1e-8) -> Projector:
        """Projector onto the column span of ``vectors`` (numerical rank by SVD)."""
        a = np.asarray(vectors, dtype=complex)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.shape[1] == 0:
            return cls.empty(a.shape[0])
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        k = int(np.sum(s > cutoff))
        return cls(u[:, :k], _check=False)


Matrixish = Union[DensityMatrix, Projector, np.ndarray]


def _as_matrix(x: Matrixish) -> np.ndarray:
    if isinstance(x, DensityMatrix):
        return x.mat
    if isinstance(x, Projector):
        return x.state().mat
    m = np.asarray(x, dtype=complex)
    if m.ndim == 1:
        m = np.outer(m, m.conj())
    return m


def _pair(rho: Matrixish, sigma: Matrixish) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a PSD matrix via Hermitian eigendecomposition."""
    w, v = np.linalg.eigh(hermitize(m))
    if w[0] < -PSD_TOL:
        raise DomainError(f"matrix is not PSD (min eigenvalue {w[0]:.3g})")
    w = np.where(w < EIG_CLIP, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


# --- sampling -------------------------------------------------------------


def haar_unitary(d: int, rng: SeededRng) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a complex Ginibre matrix, phase-fixed)."""
    if d < 1:
        raise DomainError("dimension must be positive")
    g = as_generator(rng)
    z = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_state(d: int, rng: SeededRng) -> np.ndarray:
    """Haar-random unit vector in ``C^d``."""
    if d < 1:
        raise DomainError("dimension must be positive")
    g = as_generator(rng)
    z = g.standard_normal(d) + 1j * g.standard_normal(d)
    return z / np.linalg.norm(z)


def haar_states(d: int, count: int, rng: SeededRng) -> np.ndarray:
    """``count`` independent Haar-random unit vectors, one per row."""
    g = as_generator(rng)
    z = g.standard_normal((count, d)) + 1j * g.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_projector(d: int, r: int, rng: SeededRng) -> Projector:
    """Haar-random rank-``r`` projector: the first ``r`` columns of a Haar unitary."""
    if d < 1:
        raise DomainError("dimension must be positive")
    if not 1 <= r <= d:
        raise DomainError(f"rank must lie in [1, {d}], got {r}")
    return Projector(haar_unitary(d, rng)[:, :r], _check=False)


def random_density_matrix(d: int, rng: SeededRng, rank: int | None = None) -> DensityMatrix:
    """Random mixed state from a ``d x rank`` Ginibre matrix (Hilbert-Schmidt when rank = d)."""
    g = as_generator(rng)
    k = d if rank is None else rank
    z = g.standard_normal((d, k)) + 1j * g.standard_normal((d, k))
    m = z @ z.conj().T
    return DensityMatrix(hermitize(m / np.trace(m).real))


# --- distance measures ------------------------------------------------------


def trace_distance(rho: Matrixish, sigma: Matrixish) -> float:
    """Half the sum of singular values of ``rho - sigma``."""
    a, b = _pair(rho, sigma)
    s = np.linalg.svd(a - b, compute_uv=False)
    return float(0.5 * np.sum(s))


def fidelity(rho: Matrixish, sigma: Matrixish) -> float:
    """Square-root fidelity ``tr sqrt(sqrt(rho) sigma sqrt(rho))``."""
    a, b = _pair(rho, sigma)
    sa = psd_sqrt(a)
    psd_sqrt(b)  # PSD check on sigma
    w = np.linalg.eigvalsh(hermitize(sa @ b @ sa))
    w = np.where(w < EIG_CLIP, 0.0, w)
    return float(np.sum(np.sqrt(w)))


def bures_distance(rho: Matrixish, sigma: Matrixish) -> float:
    f = fidelity(rho, sigma)
    return math.sqrt(max(0.0, 2.0 * (1.0 - f)))


def affinity(rho: Matrixish, sigma: Matrixish) -> float:
    """``tr(sqrt(rho) sqrt(sigma))``."""
    a, b = _pair(rho, sigma)
    return float(np.real(np.trace(psd_sqrt(a) @ psd_sqrt(b))))


def projector_affinity(p: Projector, q: Projector) -> float:
    """Affinity of ``P/r`` and ``Q/r`` via ``tr(PQ)/r``."""
    if p.dim != q.dim or p.rank != q.rank:
        raise DomainError("projectors must share dimension and rank")
    g = p.frame.conj().T @ q.frame
    return float(np.sum(np.abs(g) ** 2) / p.rank)


# --- rounding, restriction, measurement -----------------------------------


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(vec) > 1e-9))
    ph = vec[idx] / abs(vec[idx]) if abs(vec[idx]) > 0 else 1.0
    return vec / ph


def round_to_projector_state(rho_hat: Matrixish, r: int) -> Projector:
    """Projector onto the eigenvectors of the ``r`` largest eigenvalues.

    Eigenvectors are phase-fixed (first significant entry real positive) and
    sorted by descending eigenvalue (rounded to 1e-10), then
    lexicographically by their rounded entries.
    """
    m = _as_matrix(rho_hat)
    d = m.shape[0]
    if not 0 <= r <= d:
        raise DomainError(f"rank {r} exceeds dimension {d}")
    w, v = np.linalg.eigh(hermitize(m))
    cols = [_canonical_phase(v[:, i]) for i in range(d)]

    def key(i: int):
        entries = np.round(cols[i], 9)
        return (-round(float(w[i]), 10), tuple((-x.real, -x.imag) for x in entries))

    order = sorted(range(d), key=key)
    return Projector(np.column_stack([cols[i] for i in order[:r]]) if r else np.zeros((d, 0)))


def restrict_to_subspace(rho: Matrixish, R: Projector) -> tuple[DensityMatrix, float]:
    """``(R rho R / tr(R rho), tr(R rho))``."""
    m = _as_matrix(rho)
    if m.shape[0] != R.dim:
        raise DomainError("dimension mismatch between state and subspace")
    p = float(np.real(np.trace(R.matrix @ m)))
    if p <= 1e-12:
        raise DegenerateRestrictionError(f"tr(R rho) = {p:.3g} leaves nothing to restrict")
    return DensityMatrix(hermitize(R.matrix @ m @ R.matrix) / p), p


def measure_binary(rho: Matrixish, R: Projector, rng: SeededRng) -> tuple[str, DensityMatrix]:
    """Projective measurement ``{R, I - R}``; returns ``("in"|"out", post-state)``."""
    m = _as_matrix(rho)
    if m.shape[0] != R.dim:
        raise DomainError("dimension mismatch between state and measurement")
    p_in = min(1.0, max(0.0, float(np.real(np.trace(R.matrix @ m)))))
    outcome = "in" if as_generator(rng).random() < p_in else "out"
    proj = R if outcome == "in" else R.complement()
    post = hermitize(proj.matrix @ m @ proj.matrix)
    return outcome, DensityMatrix(post / np.trace(post).real)


# --- symmetric subspace ---------------------------------------------------


def sym_dimension(n: int, d: int) -> int:
    """``binom(n + d - 1, n)``."""
    if n < 0 or d < 1:
        raise DomainError("need n >= 0 and d >= 1")
    return math.comb(n + d - 1, n)


def permutation_operator(perm, d: int) -> np.ndarray:
    """Matrix on ``(C^d)^{⊗n}`` placing tensor factor ``perm[k]`` in slot ``k``."""
    n = len(perm)
    idx = _permuted_indices(tuple(perm), d)
    m = np.zeros((d**n, d**n))
    m[idx, np.arange(d**n)] = 1.0
    return m


def _permuted_indices(perm: tuple[int, ...], d: int) -> np.ndarray:
    n = len(perm)
    grid = np.arange(d**n).reshape((d,) * n)
    inv = np.argsort(perm)
    return np.transpose(grid, inv).reshape(-1)


def sym_projector(n: int, d: int, limit: int = SYM_LIMIT) -> np.ndarray:
    """``(1/n!) sum_pi P(pi)`` on ``(C^d)^{⊗n}``; real-valued."""
    if n < 0 or d < 1:
        raise DomainError("need n >= 0 and d >= 1")
    size = d**n
    if size > limit:
        raise CapacityError(f"d^n = {size} exceeds the dense limit {limit}")
    counts = np.zeros((size, size), dtype=np.int64)
    cols = np.arange(size)
    for perm in itertools.permutations(range(n)):
        counts[_permuted_indices(perm, d), cols] += 1
    return counts / math.factorial(n)


def tensor_power(m: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def haar_tensor_moment(n: int, d: int, samples: int, rng: SeededRng) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo mean and standard error of ``(|u><u|)^{⊗n}`` over Haar ``u``."""
    if d**n > SYM_LIMIT:
        raise CapacityError(f"d^n = {d**n} exceeds the dense limit {SYM_LIMIT}")
    vecs = haar_states(d, samples, rng)
    flat = vecs
    for _ in range(n - 1):
        flat = np.einsum("si,sj->sij", flat, vecs).reshape(samples, -1)
    outer = np.einsum("si,sj->sij", flat, flat.conj())
    mean = outer.mean(axis=0)
    se = np.sqrt(outer.real.var(axis=0) + outer.imag.var(axis=0)) / math.sqrt(samples)
    return mean, se
