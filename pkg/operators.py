"""
Matrices of a complex unit hypergraph: D, B, A, K, K*, L, calL and L*.

Matrices are emitted exactly as their defining formulas dictate and are never
symmetrized; a Hermitian hint is verified against HERMITIAN_TOL at
construction, so a construction bug surfaces as NotHermitian instead of being
averaged away.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

import config
from hypergraph import ComplexUnitHypergraph, adjacency_gain, degree_profile
from utils import BadParameter, NotHermitian, ToleranceUtils, ZeroDegreeVertex

logger = logging.getLogger(__name__)

OPERATOR_KINDS = ('A', 'K', 'Kstar', 'L', 'Lstar', 'calL')


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Dense complex matrix; entries are read-only"""
    entries: np.ndarray
    hermitian_hint: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise BadParameter(f"matrix must be 2-D, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise BadParameter("matrix has non-finite entries")
        if self.hermitian_hint:
            if entries.shape[0] != entries.shape[1]:
                raise NotHermitian(float('inf'), config.HERMITIAN_TOL)
            deviation = ToleranceUtils.max_abs_diff(entries, entries.conj().T)
            if deviation > config.HERMITIAN_TOL:
                raise NotHermitian(deviation, config.HERMITIAN_TOL)
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def conj_transpose(self) -> 'ComplexMatrix':
        """M^+"""
        return ComplexMatrix(self.entries.conj().T, self.hermitian_hint)


def _positive_degrees(G: ComplexUnitHypergraph) -> np.ndarray:
    degrees = np.array(degree_profile(G).degrees, dtype=float)
    zero = [int(v) for v in np.flatnonzero(degrees == 0)]
    if zero:
        raise ZeroDegreeVertex(zero)
    return degrees


def degree_matrix(G: ComplexUnitHypergraph) -> ComplexMatrix:
    return ComplexMatrix(np.diag(np.array(degree_profile(G).degrees, dtype=complex)).reshape(G.n, G.n), True)


def incidence_matrix(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """B_ij = omega(v_i, e_j) on incidences, 0 elsewhere"""
    B = np.zeros((G.n, G.m), dtype=complex)
    for v, j, phase in G.incidences():
        B[v, j] = phase.to_complex()
    return ComplexMatrix(B)


def adjacency_matrix(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """a_ij = sum over edges joining v_i and v_j of phi_e(v_i, v_j)"""
    A = np.zeros((G.n, G.n), dtype=complex)
    for e, edge in enumerate(G.edges):
        members = [v for v, _ in edge]
        for i in members:
            for j in members:
                if i != j:
                    A[i, j] += adjacency_gain(G, e, i, j).to_complex()
    return ComplexMatrix(A, True)


def kirchhoff(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """K = D - A"""
    K = degree_matrix(G).entries - adjacency_matrix(G).entries
    if config.DEBUG:
        B = incidence_matrix(G).entries
        deviation = ToleranceUtils.max_abs_diff(K, B @ B.conj().T)
        assert deviation <= config.HERMITIAN_TOL, f"K != BB+ (deviation {deviation:.3e})"
    return ComplexMatrix(K, True)


def dual_kirchhoff(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """K* = B^+ B"""
    B = incidence_matrix(G).entries
    return ComplexMatrix(B.conj().T @ B, True)


def normalized(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """L = D^-1 K (not Hermitian in general)"""
    degrees = _positive_degrees(G)
    return ComplexMatrix(kirchhoff(G).entries / degrees[:, None])


def sym_normalized(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """calL = Id - D^-1/2 A D^-1/2, Hermitian and similar to L"""
    scale = 1.0 / np.sqrt(_positive_degrees(G))
    A = adjacency_matrix(G).entries
    return ComplexMatrix(np.eye(G.n, dtype=complex) - scale[:, None] * A * scale[None, :], True)


def dual_normalized(G: ComplexUnitHypergraph) -> ComplexMatrix:
    """L* = B^+ D^-1 B"""
    degrees = _positive_degrees(G)
    B = incidence_matrix(G).entries
    return ComplexMatrix((B.conj().T / degrees[None, :]) @ B, True)


_BUILDERS = {
    'A': adjacency_matrix,
    'B': incidence_matrix,
    'D': degree_matrix,
    'K': kirchhoff,
    'Kstar': dual_kirchhoff,
    'L': normalized,
    'Lstar': dual_normalized,
    'calL': sym_normalized,
}


@lru_cache(maxsize=config.SPECTRUM_CACHE_SIZE)
def operator(G: ComplexUnitHypergraph, kind: str) -> ComplexMatrix:
    """Cached operator lookup by name (A, B, D, K, Kstar, L, Lstar, calL)"""
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise BadParameter(f"unknown operator {kind!r}; expected one of {sorted(_BUILDERS)}") from None
    return builder(G)
