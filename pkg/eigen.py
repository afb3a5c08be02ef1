"""
Dense Hermitian eigensolver and spectral utilities.

hermitian_eig runs cyclic complex Jacobi: each rotation first removes the
phase of the pivot a_pq with diag(1, conj(w)), then applies a real Givens
rotation, so every pivot is annihilated exactly and the accumulated
eigenvector matrix stays unitary to rounding.
"""
import logging
import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

import config
from hypergraph import ComplexUnitHypergraph, degree_profile
from operators import ComplexMatrix, OPERATOR_KINDS, operator
from utils import (
    BadParameter, LengthMismatch, NoConvergence, NonPositiveDiagonal, NotHermitian,
    NotSquare, TimeUtils, ToleranceUtils, ZeroDegreeVertex, ZeroVector, structured_logger,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[ComplexMatrix, np.ndarray]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending real eigenvalues, optional unit eigenvectors (columns) and the worst residual"""
    values: np.ndarray
    vectors: Optional[np.ndarray] = None
    max_residual: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        if self.vectors is not None:
            vectors = np.array(self.vectors, dtype=complex)
            vectors.setflags(write=False)
            object.__setattr__(self, 'vectors', vectors)

    def __len__(self):
        return len(self.values)

    @property
    def lambda_min(self) -> float:
        return float(self.values[0])

    @property
    def lambda_max(self) -> float:
        return float(self.values[-1])


def _as_array(M: MatrixLike) -> np.ndarray:
    entries = M.entries if isinstance(M, ComplexMatrix) else np.asarray(M)
    entries = np.array(entries, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {entries.shape}")
    return entries


def _normalize_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the first largest-magnitude component of each column real and non-negative"""
    for col in range(vectors.shape[1]):
        x = vectors[:, col]
        norm = np.linalg.norm(x)
        if norm > 0:
            x = x / norm
        idx = int(np.argmax(np.abs(x)))
        if abs(x[idx]) > 0:
            x = x * (abs(x[idx]) / x[idx])
            x[idx] = abs(x[idx])
        vectors[:, col] = x
    return vectors


def _max_residual(M: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    residuals = M @ vectors - vectors * values[None, :]
    return float(np.max(np.linalg.norm(residuals, axis=0)))


def _jacobi(H: np.ndarray, want_vectors: bool):
    """Cyclic complex Jacobi on a Hermitian array; returns (diagonal, V or None, sweeps)"""
    n = H.shape[0]
    A = H.copy()
    V = np.eye(n, dtype=complex) if want_vectors else None
    scale = float(np.linalg.norm(A))
    target = config.JACOBI_OFFDIAG_REL * scale

    sweeps = 0
    while True:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            break
        if sweeps >= config.JACOBI_MAX_SWEEPS:
            raise NoConvergence(sweeps, off)
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                g = abs(b)
                if g == 0.0:
                    continue
                w = b / g
                a = A[p, p].real
                d = A[q, q].real
                tau = (d - a) / (2.0 * g)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                wc = w.conjugate()

                # A <- U^+ A U with U = [[c, s], [-s conj(w), c conj(w)]] on (p, q)
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * wc * col_q
                A[:, q] = s * col_p + c * wc * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * w * row_q
                A[q, :] = s * row_p + c * w * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real

                if V is not None:
                    v_p = V[:, p].copy()
                    v_q = V[:, q].copy()
                    V[:, p] = c * v_p - s * wc * v_q
                    V[:, q] = s * v_p + c * wc * v_q
    return np.diag(A).real.copy(), V, sweeps


def hermitian_eig(M: MatrixLike, want_vectors: bool = False) -> Spectrum:
    """
    Eigen-decomposition of a Hermitian matrix.

    Args:
        M: square matrix, Hermitian within SOLVER_HERMITIAN_TOL
        want_vectors: also return unit eigenvectors aligned with the values

    Returns:
        Spectrum with ascending values

    Raises:
        NotSquare, NotHermitian, NoConvergence
    """
    M = _as_array(M)
    deviation = ToleranceUtils.max_abs_diff(M, M.conj().T)
    if deviation > config.SOLVER_HERMITIAN_TOL:
        raise NotHermitian(deviation, config.SOLVER_HERMITIAN_TOL)
    n = M.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=complex) if want_vectors else None, 0.0)

    start = time.perf_counter()
    H = 0.5 * (M + M.conj().T)
    diagonal, V, sweeps = _jacobi(H, want_vectors)
    order = np.argsort(diagonal, kind='stable')
    values = diagonal[order]

    scale = ToleranceUtils.spectral_scale(values)
    trace = float(np.trace(M).real)
    if abs(float(np.sum(values)) - trace) > 1e-9 * n * scale:
        raise NoConvergence(sweeps, abs(float(np.sum(values)) - trace))

    vectors = None
    residual = 0.0
    if want_vectors:
        vectors = _normalize_phases(V[:, order])
        residual = _max_residual(M, values, vectors)
    structured_logger.log_solver_event(n, sweeps, TimeUtils.elapsed_ms(start))
    return Spectrum(values, vectors, residual)


def general_eig_real_spectrum(M: MatrixLike, D_like: Sequence[float], want_vectors: bool = True) -> Spectrum:
    """
    Spectrum of M = D^-1 K style matrices through the similar Hermitian D^1/2 M D^-1/2.

    If y is an eigenvector of D^1/2 M D^-1/2 then D^-1/2 y is one of M for the
    same eigenvalue; returned vectors are rescaled to unit norm and residuals
    are measured against M itself.
    """
    M = _as_array(M)
    d = np.asarray(D_like, dtype=float).reshape(-1)
    if d.shape[0] != M.shape[0]:
        raise LengthMismatch(f"diagonal has {d.shape[0]} entries, matrix is {M.shape[0]}x{M.shape[0]}")
    if np.any(d <= 0):
        raise NonPositiveDiagonal(f"diagonal entries must be positive: {np.flatnonzero(d <= 0).tolist()}")
    root = np.sqrt(d)
    similar = root[:, None] * M / root[None, :]
    inner = hermitian_eig(similar, want_vectors=want_vectors)
    if not want_vectors:
        return inner
    vectors = _normalize_phases(inner.vectors / root[:, None])
    return Spectrum(inner.values, vectors, _max_residual(M, inner.values, vectors))


def count_zero_eigenvalues(values: Sequence[float], tol_policy: Optional[config.NullityTolerance] = None) -> int:
    tol_policy = tol_policy or config.get_nullity_policy()
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    tau = tol_policy.threshold(float(np.max(np.abs(values))))
    return int(np.sum(np.abs(values) <= tau))


def nullity(M: MatrixLike, tol_policy: Optional[config.NullityTolerance] = None) -> int:
    """Multiplicity of the eigenvalue 0 under the two-sided tolerance"""
    return count_zero_eigenvalues(hermitian_eig(M).values, tol_policy)


def spectral_radius(s: Spectrum) -> float:
    if len(s) == 0:
        return 0.0
    return max(abs(s.lambda_min), abs(s.lambda_max))


def gershgorin_bound(M: MatrixLike) -> float:
    """max_i (|m_ii| + sum_{j != i} |m_ij|)"""
    M = _as_array(M)
    if M.shape[0] == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def rayleigh(kind: str, G: ComplexUnitHypergraph, x: np.ndarray) -> Union[float, np.ndarray]:
    """
    Rayleigh quotient of A, K, L or calL at x (or at each column of a 2-D x).

    K, L and calL use the edge-sum form sum_e |sum_{v_j in e} omega(v_j, e)^-1 x_j|^2,
    which is real by construction; L divides by sum_i deg(v_i) |x_i|^2.
    """
    X = np.asarray(x, dtype=complex)
    single = X.ndim == 1
    if single:
        X = X[:, None]
    if X.shape[0] != G.n:
        raise LengthMismatch(f"vector has {X.shape[0]} entries, hypergraph has {G.n} vertices")
    norms = np.sum(np.abs(X) ** 2, axis=0)
    if np.any(norms == 0):
        raise ZeroVector("Rayleigh quotient of the zero vector")

    if kind == 'A':
        A = operator(G, 'A').entries
        quotient = np.sum(X.conj() * (A @ X), axis=0) / norms
        drift = np.abs(quotient.imag)
        if np.any(drift > config.RAYLEIGH_TOL * (1.0 + np.abs(quotient.real))):
            raise NotHermitian(float(np.max(drift)), config.RAYLEIGH_TOL)
        result = quotient.real
    elif kind in ('K', 'L', 'calL'):
        B = operator(G, 'B').entries
        if kind == 'K':
            result = np.sum(np.abs(B.conj().T @ X) ** 2, axis=0) / norms
        else:
            degrees = np.array(degree_profile(G).degrees, dtype=float)
            if np.any(degrees == 0):
                raise ZeroDegreeVertex([int(v) for v in np.flatnonzero(degrees == 0)])
            if kind == 'L':
                weighted = np.sum(degrees[:, None] * np.abs(X) ** 2, axis=0)
                result = np.sum(np.abs(B.conj().T @ X) ** 2, axis=0) / weighted
            else:
                scaled = X / np.sqrt(degrees)[:, None]
                result = np.sum(np.abs(B.conj().T @ scaled) ** 2, axis=0) / norms
    else:
        raise BadParameter(f"unknown Rayleigh quotient kind {kind!r}; expected A, K, L or calL")
    return float(result[0]) if single else result


def closed_form_eigenvalues(M: MatrixLike) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix of order <= 3 from its characteristic polynomial.

    Order 2 uses the quadratic formula, order 3 the trigonometric solution of
    the depressed cubic. Independent of the Jacobi solver; used as its oracle.
    """
    M = _as_array(M)
    n = M.shape[0]
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([M[0, 0].real])
    if n == 2:
        a, d = M[0, 0].real, M[1, 1].real
        half_gap = math.hypot((a - d) / 2.0, abs(M[0, 1]))
        mid = (a + d) / 2.0
        return np.array([mid - half_gap, mid + half_gap])
    if n == 3:
        off = abs(M[0, 1]) ** 2 + abs(M[0, 2]) ** 2 + abs(M[1, 2]) ** 2
        q = float(np.trace(M).real) / 3.0
        shifted = M - q * np.eye(3)
        p2 = float(np.sum(np.diag(shifted).real ** 2)) + 2.0 * off
        if p2 == 0.0:
            return np.array([q, q, q])
        p = math.sqrt(p2 / 6.0)
        r = float(np.linalg.det(shifted / p).real) / 2.0
        r = min(1.0, max(-1.0, r))
        phi = math.acos(r) / 3.0
        largest = q + 2.0 * p * math.cos(phi)
        smallest = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
        middle = 3.0 * q - largest - smallest
        return np.sort(np.array([smallest, middle, largest]))
    raise BadParameter(f"closed-form eigenvalues need order <= 3, got {n}")


@lru_cache(maxsize=config.SPECTRUM_CACHE_SIZE)
def operator_spectrum(G: ComplexUnitHypergraph, kind: str, want_vectors: bool = False) -> Spectrum:
    """Cached spectrum of one of A, K, Kstar, L, Lstar, calL"""
    if kind not in OPERATOR_KINDS:
        raise BadParameter(f"unknown operator {kind!r}; expected one of {list(OPERATOR_KINDS)}")
    if kind == 'L':
        degrees = np.array(degree_profile(G).degrees, dtype=float)
        return general_eig_real_spectrum(operator(G, 'L'), degrees, want_vectors=want_vectors)
    return hermitian_eig(operator(G, kind), want_vectors=want_vectors)
