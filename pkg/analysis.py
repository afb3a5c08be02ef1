"""
Theorem checks for complex unit hypergraphs.

Every identity, inequality and interlacing statement about A, K, K*, L, calL
and L* is an executable check returning a CheckReport. Checks never raise on
a violated statement, only on malformed input (bad vertex/edge indices,
switching lengths); run_full_suite additionally turns any error raised
inside a check into a failed report so a fuzz run never aborts.
"""
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import config
from eigen import count_zero_eigenvalues, gershgorin_bound, operator_spectrum, rayleigh, spectral_radius
from hypergraph import (
    ComplexUnitHypergraph, SwitchingFunction, adjacency_gain, connected_components,
    constant_phase_vertices, degree_profile, dual, edge_switch_to_constant_phase,
    independence_number, random_switching, switch, underlying, volume,
    weak_delete_edges, weak_delete_vertices,
)
from operators import operator
from signature_utils import generate_check_signature, generate_hypergraph_signature
from utils import (
    BadParameter, BadVertexIndex, HypergraphError, MetricsUtils, ToleranceUtils, TooLarge,
    structured_logger,
)

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped'

NO_VERTICES = 'no vertices'
ZERO_DEGREE = 'zero-degree vertex'

# Exact-arithmetic round trips (switch then unswitch) drift by a few ulps
_ROUNDTRIP_TOL = 1e-14

BOUND_VERDICTS = (
    'gershgorin_A', 'K_equality', 'K_underlying', 'K_upper',
    'L_equality', 'L_underlying', 'L_upper', 'max_degree_size', 'rho_A',
)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one theorem check"""
    check_name: str
    inputs_digest: str
    measured: Tuple[Tuple[str, float], ...]
    tolerance: float
    verdict: str
    reason: Optional[str] = None
    notes: Tuple[str, ...] = ()
    skipped_parts: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL


@dataclass(frozen=True)
class BoundReport:
    """
    Quantities of the spectral-radius and largest-eigenvalue bounds.

    Every verdict can be recomputed from the stored reals and `tolerance`;
    spectral fields are None when the hypergraph has no vertices or only
    empty edges, and the L fields are None when a vertex has degree 0.
    """
    delta: int
    nabla: int
    bound_rho_A: int
    bound_K: int
    bound_L: int
    bound_max_degree_size: int
    tolerance: float
    is_regular: bool
    is_uniform: bool
    is_connected: bool
    strict_converse: bool
    rho_A: Optional[float] = None
    gershgorin_A: Optional[float] = None
    lambda_max_K: Optional[float] = None
    lambda_max_K_underlying: Optional[float] = None
    lambda_max_L: Optional[float] = None
    lambda_max_L_underlying: Optional[float] = None
    rho_A_sharp: Optional[bool] = None
    equality_K: Optional[bool] = None
    equality_L: Optional[bool] = None
    alpha: Optional[int] = None
    alpha_witness: Optional[Tuple[int, ...]] = None
    verdicts: Dict[str, str] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SuiteResult:
    """Reports of one full suite run, ordered by check name"""
    inputs_digest: str
    seed: int
    reports: Tuple[CheckReport, ...]

    @property
    def passed(self) -> int:
        return sum(1 for r in self.reports if r.verdict == PASS)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.reports if r.verdict == FAIL)

    @property
    def skipped(self) -> int:
        return sum(1 for r in self.reports if r.verdict == SKIPPED)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary_line(self) -> str:
        return f"checks: {self.passed} passed, {self.failed} failed, {self.skipped} skipped"

    def by_name(self, check_name: str) -> CheckReport:
        for report in self.reports:
            if report.check_name == check_name:
                return report
        raise KeyError(check_name)


class _CheckRun:
    """Collects measurements, failed sub-claims and skipped parts for one check"""

    def __init__(self, check_name: str, digest: str, tolerance: float = config.SPECTRAL_TOL):
        self.check_name = check_name
        self.digest = digest
        self.tolerance = tolerance
        self.measured: List[Tuple[str, float]] = []
        self.failures: List[str] = []
        self.notes: List[str] = []
        self.skipped_parts: List[str] = []

    def record(self, label: str, value: float):
        self.measured.append((label, float(value)))

    def expect(self, label: str, ok: bool):
        if not ok:
            self.failures.append(label)

    def within(self, label: str, deviation: float, tol: float):
        """deviation <= tol"""
        self.record(label, deviation)
        self.expect(label, deviation <= tol)

    def matches(self, label: str, value: float, target: float, tol: float):
        self.record(label, value)
        self.record(f"{label}.expected", target)
        self.expect(label, abs(value - target) <= tol)

    def at_most(self, label: str, lhs: float, rhs: float, slack: float):
        self.record(f"{label}.lhs", lhs)
        self.record(f"{label}.rhs", rhs)
        self.expect(label, lhs <= rhs + slack)

    def equal(self, label: str, value: int, target: int):
        self.record(label, value)
        self.record(f"{label}.expected", target)
        self.expect(label, value == target)

    def note(self, text: str):
        self.notes.append(text)

    def skip_part(self, part: str, reason: str):
        self.skipped_parts.append(f"{part}: {reason}")

    def skipped(self, reason: str) -> CheckReport:
        return self._emit(SKIPPED, reason)

    def finish(self) -> CheckReport:
        if self.failures:
            return self._emit(FAIL, 'violated: ' + ', '.join(self.failures))
        if not self.measured and self.skipped_parts:
            return self._emit(SKIPPED, '; '.join(self.skipped_parts))
        return self._emit(PASS, None)

    def _emit(self, verdict: str, reason: Optional[str]) -> CheckReport:
        report = CheckReport(
            check_name=self.check_name,
            inputs_digest=self.digest,
            measured=tuple(self.measured),
            tolerance=self.tolerance,
            verdict=verdict,
            reason=reason,
            notes=tuple(self.notes),
            skipped_parts=tuple(self.skipped_parts),
        )
        structured_logger.log_check_event(self.check_name, verdict, {
            'inputs_digest': self.digest,
            'reason': reason,
        })
        return report


# =============================================================================
# HELPERS
# =============================================================================

def _values(G: ComplexUnitHypergraph, kind: str) -> np.ndarray:
    return operator_spectrum(G, kind).values


def _has_zero_degree(G: ComplexUnitHypergraph) -> bool:
    return any(d == 0 for d in degree_profile(G).degrees)


def _multiset_tol(*spectra) -> float:
    return config.SPECTRAL_TOL * ToleranceUtils.spectral_scale(*spectra)


def _entry_dev(X: np.ndarray, Y: np.ndarray) -> float:
    return ToleranceUtils.max_abs_diff(X, Y)


def _vertex_set(G: ComplexUnitHypergraph, S: Iterable[int]) -> List[int]:
    S = sorted(set(S))
    for v in S:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < G.n:
            raise BadVertexIndex(v, G.n)
    return [int(v) for v in S]


def _interlacing_violation(lower: np.ndarray, middle: np.ndarray, upper: np.ndarray) -> float:
    """max over k of (lower_k - middle_k) and (middle_k - upper_k); <= 0 when interlaced"""
    if middle.size == 0:
        return 0.0
    return float(max(np.max(lower - middle), np.max(middle - upper)))


# =============================================================================
# TRACES, DUALITY, KERNELS
# =============================================================================

def check_trace_identities(G: ComplexUnitHypergraph) -> CheckReport:
    """sum spec(A) = 0, sum spec(K) = sum spec(K*) = vol V, sum spec(L) = sum spec(L*) = n"""
    run = _CheckRun('trace_identities', generate_check_signature(G))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    vol = degree_profile(G).volume

    run.matches('sum_lambda_A', float(np.sum(_values(G, 'A'))), 0.0, config.SPECTRAL_TOL)
    for kind in ('K', 'Kstar'):
        run.matches(f"sum_lambda_{kind}", float(np.sum(_values(G, kind))), float(vol),
                    config.SPECTRAL_TOL * (1 + vol))

    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
    else:
        for kind in ('L', 'Lstar'):
            run.matches(f"sum_lambda_{kind}", float(np.sum(_values(G, kind))), float(G.n),
                        config.SPECTRAL_TOL * (1 + G.n))
        run.note('trace(L*) = sum over edges and their vertices of 1/deg(v) = n')
    return run.finish()


def check_dual_spectra(G: ComplexUnitHypergraph) -> CheckReport:
    """Nonzero spectra of K and K* (and of L and L*) agree; nullities differ by n - m"""
    run = _CheckRun('dual_spectra', generate_check_signature(G))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    policy = config.get_nullity_policy()

    K = _values(G, 'K')
    Ks = _values(G, 'Kstar')
    run.within('nonzero_K_vs_Kstar',
               ToleranceUtils.multiset_deviation(ToleranceUtils.strip_zeros(K, policy),
                                                 ToleranceUtils.strip_zeros(Ks, policy)),
               _multiset_tol(K, Ks))
    mu_K = count_zero_eigenvalues(K, policy)
    run.equal('nullity_K_minus_Kstar', mu_K - count_zero_eigenvalues(Ks, policy), G.n - G.m)
    run.within('K_of_dual_vs_Kstar',
               _entry_dev(operator(dual(G), 'K').entries, operator(G, 'Kstar').entries),
               config.HERMITIAN_TOL)

    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
        return run.finish()
    L = _values(G, 'L')
    Ls = _values(G, 'Lstar')
    run.within('nonzero_L_vs_Lstar',
               ToleranceUtils.multiset_deviation(ToleranceUtils.strip_zeros(L, policy),
                                                 ToleranceUtils.strip_zeros(Ls, policy)),
               _multiset_tol(L, Ls))
    mu_L = count_zero_eigenvalues(L, policy)
    run.equal('nullity_L_minus_Lstar', mu_L - count_zero_eigenvalues(Ls, policy), G.n - G.m)
    run.equal('nullity_K_minus_L', mu_K - mu_L, 0)
    return run.finish()


def check_kernels(G: ComplexUnitHypergraph) -> CheckReport:
    """ker K = ker L = ker B+, verified through ranks and the computed null vectors of K"""
    run = _CheckRun('kernels', generate_check_signature(G))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    policy = config.get_nullity_policy()

    Ks = _values(G, 'Kstar')
    rank_B = len(Ks) - count_zero_eigenvalues(Ks, policy)
    spectrum = operator_spectrum(G, 'K', True)
    mu_K = count_zero_eigenvalues(spectrum.values, policy)
    run.record('rank_B', rank_B)
    run.equal('nullity_K', mu_K, G.n - rank_B)

    tau = policy.threshold(float(np.max(np.abs(spectrum.values))))
    null_vectors = spectrum.vectors[:, np.abs(spectrum.values) <= tau]
    tol = _multiset_tol(spectrum.values)
    B = operator(G, 'B').entries
    worst = float(np.max(np.linalg.norm(B.conj().T @ null_vectors, axis=0))) if null_vectors.shape[1] else 0.0
    run.within('max_norm_Bplus_x', worst, tol)

    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
    else:
        L = operator(G, 'L').entries
        worst = float(np.max(np.linalg.norm(L @ null_vectors, axis=0))) if null_vectors.shape[1] else 0.0
        run.within('max_norm_L_x', worst, tol)
    return run.finish()


def check_nonnegativity(G: ComplexUnitHypergraph) -> CheckReport:
    """K, K*, L and L* are positive semidefinite"""
    run = _CheckRun('nonnegativity', generate_check_signature(G), config.RAYLEIGH_TOL)
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    kinds = ['K', 'Kstar']
    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
    else:
        kinds += ['L', 'Lstar']
    for kind in kinds:
        values = _values(G, kind)
        if values.size == 0:
            continue
        lowest = float(values[0])
        run.record(f"lambda_min_{kind}", lowest)
        run.expect(f"lambda_min_{kind}", lowest >= -config.RAYLEIGH_TOL * ToleranceUtils.spectral_scale(values))
    return run.finish()


# =============================================================================
# STRUCTURE AND OPERATOR IDENTITIES
# =============================================================================

def check_structure(G: ComplexUnitHypergraph, seed: int = 0) -> CheckReport:
    """Dual involution, degree/size swap, gain reciprocity, switching inverses, deletion commutation"""
    run = _CheckRun('structure', generate_check_signature(G, seed=seed), _ROUNDTRIP_TOL)
    rng = np.random.default_rng(seed)
    profile = degree_profile(G)

    run.expect('dual_involution', dual(dual(G)) == G)
    dual_profile = degree_profile(dual(G))
    run.expect('dual_swaps_degrees_and_sizes',
               dual_profile.degrees == profile.sizes and dual_profile.sizes == profile.degrees)
    run.equal('sum_degrees_minus_sum_sizes', sum(profile.degrees) - sum(profile.sizes), 0)
    run.equal('volume_minus_incidences', profile.volume - G.incidence_count, 0)

    worst = 0.0
    for e, edge in enumerate(G.edges):
        members = [v for v, _ in edge]
        for i in members:
            for j in members:
                if i < j:
                    product = (adjacency_gain(G, e, i, j) * adjacency_gain(G, e, j, i)).to_complex()
                    worst = max(worst, abs(product - 1.0))
    run.within('gain_reciprocity', worst, config.HERMITIAN_TOL)

    for kind in ('vertex', 'edge'):
        f = random_switching(G, kind, rng)
        restored = switch(switch(G, f), f.inverse())
        drift = max(
            (abs(a.to_complex() - b.to_complex())
             for edge_a, edge_b in zip(restored.edges, G.edges)
             for (_, a), (_, b) in zip(edge_a, edge_b)),
            default=0.0,
        )
        run.within(f"{kind}_switch_inverse", drift, _ROUNDTRIP_TOL)

    if G.n >= 2:
        order = rng.permutation(G.n)
        cut = int(rng.integers(1, G.n))
        stop = int(rng.integers(cut, G.n + 1))
        first = [int(v) for v in order[:cut]]
        second = [int(v) for v in order[cut:stop]]
        one, map_one = weak_delete_vertices(G, first)
        two, map_two = weak_delete_vertices(G, second)
        left, _ = weak_delete_vertices(one, [map_one[v] for v in second])
        right, _ = weak_delete_vertices(two, [map_two[v] for v in first])
        union, _ = weak_delete_vertices(G, first + second)
        run.expect('vertex_deletion_commutes', left == right == union)
    return run.finish()


def check_operator_identities(G: ComplexUnitHypergraph) -> CheckReport:
    """K = BB+, L = D^-1 BB+, calL = D^1/2 L D^-1/2, L* = (D^-1/2 B)+(D^-1/2 B), diagonals of A and K"""
    run = _CheckRun('operator_identities', generate_check_signature(G), config.HERMITIAN_TOL)
    tol = config.HERMITIAN_TOL
    B = operator(G, 'B').entries
    K = operator(G, 'K').entries
    BBplus = B @ B.conj().T
    degrees = np.array(degree_profile(G).degrees, dtype=float)

    run.within('K_vs_BBplus', _entry_dev(K, BBplus), tol)
    run.within('A_diagonal', float(np.max(np.abs(np.diag(operator(G, 'A').entries)), initial=0.0)), 0.0)
    run.within('K_diagonal_vs_degrees', float(np.max(np.abs(np.diag(K) - degrees), initial=0.0)), 0.0)
    run.within('Kstar_vs_BplusB', _entry_dev(operator(G, 'Kstar').entries, B.conj().T @ B), tol)

    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
        return run.finish()
    root = np.sqrt(degrees)
    L = operator(G, 'L').entries
    run.within('L_vs_Dinv_BBplus', _entry_dev(L, BBplus / degrees[:, None]), tol)
    run.within('calL_vs_similarity', _entry_dev(operator(G, 'calL').entries, root[:, None] * L / root[None, :]), tol)
    scaled = B / root[:, None]
    run.within('Lstar_vs_factorization', _entry_dev(operator(G, 'Lstar').entries, scaled.conj().T @ scaled), tol)
    return run.finish()


def check_quadratic_forms(G: ComplexUnitHypergraph, seed: int = 0) -> CheckReport:
    """x+Kx and x+calLx against their edge sums on seeded random complex vectors"""
    run = _CheckRun('quadratic_forms', generate_check_signature(G, seed=seed), config.RAYLEIGH_TOL)
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((G.n, config.QUADRATIC_FORM_SAMPLES)) \
        + 1j * rng.standard_normal((G.n, config.QUADRATIC_FORM_SAMPLES))

    def edge_sum(weights: np.ndarray) -> np.ndarray:
        total = np.zeros(X.shape[1])
        for edge in G.edges:
            inner = np.zeros(X.shape[1], dtype=complex)
            for v, phase in edge:
                inner += phase.to_complex().conjugate() * X[v] * weights[v]
            total += np.abs(inner) ** 2
        return total

    def compare(label: str, M: np.ndarray, weights: np.ndarray):
        forms = np.sum(X.conj() * (M @ X), axis=0)
        expected = edge_sum(weights)
        run.within(f"{label}_vs_edge_sum",
                   float(np.max(np.abs(forms - expected) / (1.0 + np.abs(forms)))),
                   config.RAYLEIGH_TOL)

    compare('xKx', operator(G, 'K').entries, np.ones(G.n))
    if _has_zero_degree(G):
        run.skip_part('calL', ZERO_DEGREE)
    else:
        degrees = np.array(degree_profile(G).degrees, dtype=float)
        compare('xcalLx', operator(G, 'calL').entries, 1.0 / np.sqrt(degrees))
    return run.finish()


def check_rayleigh_extremality(G: ComplexUnitHypergraph, seed: int = 0) -> CheckReport:
    """Random Rayleigh quotients stay inside [lambda_1, lambda_n]; eigenvectors attain both ends"""
    run = _CheckRun('rayleigh_extremality', generate_check_signature(G, seed=seed), config.RAYLEIGH_TOL)
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((G.n, config.RAYLEIGH_SAMPLES)) \
        + 1j * rng.standard_normal((G.n, config.RAYLEIGH_SAMPLES))
    X /= np.linalg.norm(X, axis=0)[None, :]

    kinds = ['A', 'K']
    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
    else:
        kinds += ['L', 'calL']
    for kind in kinds:
        spectrum = operator_spectrum(G, kind, True)
        scale = ToleranceUtils.spectral_scale(spectrum.values)
        quotients = rayleigh(kind, G, X)
        run.at_most(f"{kind}.lambda_1_le_min_rq", spectrum.lambda_min, float(np.min(quotients)),
                    config.RAYLEIGH_TOL * scale)
        run.at_most(f"{kind}.max_rq_le_lambda_n", float(np.max(quotients)), spectrum.lambda_max,
                    config.RAYLEIGH_TOL * scale)
        ends = rayleigh(kind, G, spectrum.vectors[:, [0, -1]])
        run.within(f"{kind}.rq_at_extreme_eigenvectors",
                   float(max(abs(ends[0] - spectrum.lambda_min), abs(ends[1] - spectrum.lambda_max))),
                   config.SPECTRAL_TOL * scale)
    return run.finish()


# =============================================================================
# REGULAR AND UNIFORM HYPERGRAPHS
# =============================================================================

def check_regular_equivalence(G: ComplexUnitHypergraph) -> CheckReport:
    """For d-regular G: spec(L) = spec(K)/d and spec(A) = d - spec(K)"""
    run = _CheckRun('regular_equivalence', generate_check_signature(G))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    profile = degree_profile(G)
    if not profile.is_regular:
        return run.skipped('not regular')
    d = profile.max_degree
    run.record('degree', d)
    K = _values(G, 'K')
    A = _values(G, 'A')
    run.within('A_vs_d_minus_K', ToleranceUtils.multiset_deviation(A, d - K), _multiset_tol(A, K))
    if d == 0:
        run.skip_part('L', ZERO_DEGREE)
    else:
        L = _values(G, 'L')
        run.within('L_vs_K_over_d', ToleranceUtils.multiset_deviation(L, K / d), _multiset_tol(L, K))
    return run.finish()


def check_regular_uniform_dual_L(G: ComplexUnitHypergraph) -> CheckReport:
    """For d-regular k-uniform G: L(G*) = (d/k) L*(G) and L*(G*) = (d/k) L(G)"""
    run = _CheckRun('regular_uniform_dual_L', generate_check_signature(G), config.HERMITIAN_TOL)
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    if G.m == 0:
        return run.skipped('no edges')
    profile = degree_profile(G)
    if not profile.is_regular:
        return run.skipped('not regular')
    if not profile.is_uniform:
        return run.skipped('not uniform')
    d, k = profile.max_degree, profile.max_size
    if d == 0 or k == 0:
        return run.skipped(ZERO_DEGREE)
    ratio = d / k
    G_star = dual(G)
    run.record('degree', d)
    run.record('edge_size', k)
    run.within('L_of_dual_vs_Lstar',
               _entry_dev(operator(G_star, 'L').entries, ratio * operator(G, 'Lstar').entries),
               config.HERMITIAN_TOL)
    run.within('Lstar_of_dual_vs_L',
               _entry_dev(operator(G_star, 'Lstar').entries, ratio * operator(G, 'L').entries),
               config.HERMITIAN_TOL)
    return run.finish()


# =============================================================================
# WEAK DELETION AND SWITCHING
# =============================================================================

def check_vertex_deletion_interlacing(G: ComplexUnitHypergraph, S: Iterable[int]) -> CheckReport:
    """
    lambda_k(M(G)) <= lambda_k(M(G - S)) <= lambda_{k+r}(M(G)) for M in A, K, calL.

    Weak vertex deletion keeps the degrees of the remaining vertices, so each
    M(G - S) is the principal submatrix of M(G) on the kept vertices.
    """
    S = _vertex_set(G, S)
    run = _CheckRun('vertex_deletion_interlacing', generate_check_signature(G, S=S))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    r = len(S)
    if r >= G.n:
        return run.skipped('deletion leaves no vertices')
    reduced, _ = weak_delete_vertices(G, S)
    run.record('deleted', r)

    kinds = ['A', 'K']
    if _has_zero_degree(G):
        run.skip_part('calL', ZERO_DEGREE)
    else:
        kinds.append('calL')
    keep = G.n - r
    for kind in kinds:
        full = _values(G, kind)
        part = _values(reduced, kind)
        slack = _multiset_tol(full, part)
        run.within(f"{kind}.max_violation",
                   _interlacing_violation(full[:keep], part, full[r:r + keep]), slack)
    return run.finish()


def check_edge_deletion_interlacing(G: ComplexUnitHypergraph, F: Iterable[int]) -> CheckReport:
    """lambda_{j-r}(K(G)) <= lambda_j(K(G - F)) <= lambda_j(K(G))"""
    F = sorted(set(F))
    reduced = weak_delete_edges(G, F)
    run = _CheckRun('edge_deletion_interlacing', generate_check_signature(G, F=F))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    r = len(F)
    full = _values(G, 'K')
    part = _values(reduced, 'K')
    slack = _multiset_tol(full, part)
    run.record('deleted', r)
    run.within('upper.max_violation', float(np.max(part - full)), slack)
    if r < G.n:
        run.within('lower.max_violation', float(np.max(full[:G.n - r] - part[r:])), slack)
    else:
        run.skip_part('lower', 'no index j with j > r')
    run.note('stated range: j in {r-1, ..., n}; lower chain checked for j >= r+1, upper chain for all j')
    return run.finish()


def check_switching(G: ComplexUnitHypergraph, f: SwitchingFunction) -> CheckReport:
    """
    Matrix relations of vertex and edge switching plus cospectrality.

    Vertex switching by zeta: B -> D(zeta)+ B, A, K, L -> D(zeta)+ M D(zeta),
    K* and L* unchanged. Edge switching by xi: B -> B D(xi)+, A, K, L
    unchanged, K*, L* -> D(xi) M D(xi)+.
    """
    switched = switch(G, f)
    run = _CheckRun('switching', generate_check_signature(G, f=f), config.HERMITIAN_TOL)
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    tol = config.HERMITIAN_TOL
    Z = f.diagonal()
    Zh = Z.conj().T
    with_L = not _has_zero_degree(G)
    if not with_L:
        run.skip_part('L', ZERO_DEGREE)

    def old(kind):
        return operator(G, kind).entries

    def new(kind):
        return operator(switched, kind).entries

    run.record('vertex_kind', 1.0 if f.kind == 'vertex' else 0.0)
    if f.kind == 'vertex':
        run.within('B', _entry_dev(new('B'), Zh @ old('B')), tol)
        for kind in ('A', 'K') + (('L',) if with_L else ()):
            run.within(kind, _entry_dev(new(kind), Zh @ old(kind) @ Z), tol)
        for kind in ('Kstar',) + (('Lstar',) if with_L else ()):
            run.within(kind, _entry_dev(new(kind), old(kind)), tol)
    else:
        run.within('B', _entry_dev(new('B'), old('B') @ Zh), tol)
        for kind in ('A', 'K') + (('L',) if with_L else ()):
            run.within(kind, _entry_dev(new(kind), old(kind)), tol)
        for kind in ('Kstar',) + (('Lstar',) if with_L else ()):
            run.within(kind, _entry_dev(new(kind), Z @ old(kind) @ Zh), tol)

    for kind in ('A', 'K', 'Kstar') + (('L', 'Lstar') if with_L else ()):
        before = _values(G, kind)
        after = _values(switched, kind)
        run.within(f"spectrum_{kind}", ToleranceUtils.multiset_deviation(before, after),
                   _multiset_tol(before, after))
    return run.finish()


# =============================================================================
# BOUNDS
# =============================================================================

def bound_report(G: ComplexUnitHypergraph, with_alpha: bool = True) -> BoundReport:
    """
    rho(A) <= Delta(nabla - 1); lambda_n(K) <= lambda_n(K(G')) <= nabla Delta;
    lambda_n(L) <= lambda_n(L(G')) <= nabla; max(Delta, nabla) <= lambda_n(K).

    Equality in the K chain holds for regular uniform hypergraphs, in the L
    chain for uniform ones. The converse is asserted only when G is connected
    with no empty edges and no isolated vertices; otherwise equality without
    the hypothesis is reported in notes.
    """
    profile = degree_profile(G)
    delta, nabla = profile.max_degree, profile.max_size
    slack = config.SPECTRAL_TOL
    has_empty = any(size == 0 for size in profile.sizes)
    isolated = any(d == 0 for d in profile.degrees)
    connected = len(connected_components(G)) == 1
    base = dict(
        delta=delta,
        nabla=nabla,
        bound_rho_A=delta * (nabla - 1),
        bound_K=nabla * delta,
        bound_L=nabla,
        bound_max_degree_size=max(delta, nabla),
        tolerance=slack,
        is_regular=profile.is_regular,
        is_uniform=profile.is_uniform,
        is_connected=connected,
        strict_converse=connected and not has_empty and not isolated,
    )
    if G.n == 0 or nabla == 0:
        return BoundReport(**base, verdicts={key: SKIPPED for key in BOUND_VERDICTS},
                           notes=('no vertices' if G.n == 0 else 'every edge is empty',))

    def verdict(ok: bool) -> str:
        return PASS if ok else FAIL

    notes = []
    verdicts: Dict[str, str] = {}
    rho = spectral_radius(operator_spectrum(G, 'A'))
    gersh = gershgorin_bound(operator(G, 'A'))
    lam_K = float(_values(G, 'K')[-1])
    G_plain = underlying(G)
    lam_K_plain = float(_values(G_plain, 'K')[-1])
    verdicts['rho_A'] = verdict(rho <= base['bound_rho_A'] + slack)
    verdicts['gershgorin_A'] = verdict(rho <= gersh + slack)
    verdicts['K_underlying'] = verdict(lam_K <= lam_K_plain + slack)
    verdicts['K_upper'] = verdict(lam_K_plain <= base['bound_K'] + slack)
    verdicts['max_degree_size'] = verdict(base['bound_max_degree_size'] <= lam_K + slack)

    equality_K = abs(lam_K_plain - base['bound_K']) <= slack
    hypothesis_K = profile.is_regular and profile.is_uniform
    verdicts['K_equality'] = _equality_verdict(equality_K, hypothesis_K, base['strict_converse'],
                                               'K', 'regular and uniform', notes)

    lam_L = lam_L_plain = None
    equality_L = None
    if isolated:
        for key in ('L_underlying', 'L_upper', 'L_equality'):
            verdicts[key] = SKIPPED
        notes.append(f"L bounds skipped: {ZERO_DEGREE}")
    else:
        lam_L = float(_values(G, 'L')[-1])
        lam_L_plain = float(_values(G_plain, 'L')[-1])
        verdicts['L_underlying'] = verdict(lam_L <= lam_L_plain + slack)
        verdicts['L_upper'] = verdict(lam_L_plain <= base['bound_L'] + slack)
        equality_L = abs(lam_L_plain - base['bound_L']) <= slack
        verdicts['L_equality'] = _equality_verdict(equality_L, profile.is_uniform, base['strict_converse'],
                                                   'L', 'uniform', notes)

    alpha = witness = None
    if with_alpha and G.n <= config.MAX_BRUTE_FORCE_VERTICES:
        alpha, witness = independence_number(G)

    return BoundReport(
        **base,
        rho_A=rho,
        gershgorin_A=gersh,
        lambda_max_K=lam_K,
        lambda_max_K_underlying=lam_K_plain,
        lambda_max_L=lam_L,
        lambda_max_L_underlying=lam_L_plain,
        rho_A_sharp=abs(rho - base['bound_rho_A']) <= slack,
        equality_K=equality_K,
        equality_L=equality_L,
        alpha=alpha,
        alpha_witness=witness,
        verdicts=dict(sorted(verdicts.items())),
        notes=tuple(notes),
    )


def _equality_verdict(equality: bool, hypothesis: bool, strict: bool, label: str,
                      hypothesis_name: str, notes: List[str]) -> str:
    if hypothesis:
        return PASS if equality else FAIL
    if not equality:
        return PASS
    if strict:
        return FAIL
    notes.append(f"{label} bound attained although G is not {hypothesis_name} (G is disconnected "
                 f"or has empty edges or isolated vertices)")
    return PASS


def check_bounds(G: ComplexUnitHypergraph) -> CheckReport:
    """bound_report as a CheckReport"""
    report = bound_report(G)
    run = _CheckRun('bounds', generate_check_signature(G), report.tolerance)
    if all(v == SKIPPED for v in report.verdicts.values()):
        return run.skipped(report.notes[0] if report.notes else NO_VERTICES)
    for label in ('rho_A', 'bound_rho_A', 'gershgorin_A', 'lambda_max_K', 'lambda_max_K_underlying',
                  'bound_K', 'lambda_max_L', 'lambda_max_L_underlying', 'bound_L', 'bound_max_degree_size'):
        value = getattr(report, label)
        if value is not None:
            run.record(label, value)
    for key, value in report.verdicts.items():
        if value == SKIPPED:
            run.skip_part(key, ZERO_DEGREE)
        else:
            run.expect(key, value == PASS)
    for text in report.notes:
        run.note(text)
    return run.finish()


# =============================================================================
# CONSTANT-PHASE AND INDEPENDENT SETS
# =============================================================================

def check_constant_phase_set(G: ComplexUnitHypergraph, S: Iterable[int]) -> CheckReport:
    """
    For S whose vertices each carry a single phase:
    lambda_1(K) <= sum_e |e cap S|^2 / |S| <= lambda_n(K), and the same with
    vol S in the denominator for L.
    """
    S = _vertex_set(G, S)
    run = _CheckRun('constant_phase_set', generate_check_signature(G, S=S))
    if not S:
        return run.skipped('empty vertex set')
    constant = set(constant_phase_vertices(G, config.HERMITIAN_TOL))
    broken = [v for v in S if v not in constant]
    if broken:
        return run.skipped(f"hypothesis fails: non-constant phase at vertices {broken}")
    _sandwich(run, G, S, '')
    return run.finish()


def _sandwich(run: _CheckRun, G: ComplexUnitHypergraph, S: Sequence[int], prefix: str):
    members = set(S)
    hits = sum(sum(1 for v, _ in edge if v in members) ** 2 for edge in G.edges)
    K = _values(G, 'K')
    slack = _multiset_tol(K)
    quotient = hits / len(S)
    run.record(f"{prefix}sum_sq_intersections", hits)
    run.at_most(f"{prefix}K.lambda_1_le_q", float(K[0]), quotient, slack)
    run.at_most(f"{prefix}K.q_le_lambda_n", quotient, float(K[-1]), slack)
    if _has_zero_degree(G):
        run.skip_part(f"{prefix}L", ZERO_DEGREE)
        return
    L = _values(G, 'L')
    slack = _multiset_tol(L)
    quotient = hits / volume(G, S)
    run.at_most(f"{prefix}L.lambda_1_le_q", float(L[0]), quotient, slack)
    run.at_most(f"{prefix}L.q_le_lambda_n", quotient, float(L[-1]), slack)


def check_independence_bounds(G: ComplexUnitHypergraph) -> CheckReport:
    """
    For a maximum independent set S:
    lambda_1(K) <= vol S / |S| <= lambda_n(K), and alpha is at most the number
    of eigenvalues of L on either side of 1 and of A on either side of 0.

    Raises:
        TooLarge: above MAX_BRUTE_FORCE_VERTICES vertices
    """
    run = _CheckRun('independence_bounds', generate_check_signature(G))
    if G.n == 0:
        return run.skipped(NO_VERTICES)
    alpha, witness = independence_number(G)
    run.record('alpha', alpha)
    K = _values(G, 'K')
    slack = _multiset_tol(K)
    ratio = volume(G, witness) / alpha
    run.at_most('K.lambda_1_le_volS_over_S', float(K[0]), ratio, slack)
    run.at_most('K.volS_over_S_le_lambda_n', ratio, float(K[-1]), slack)

    switched, _ = edge_switch_to_constant_phase(G, witness)
    constant = set(constant_phase_vertices(switched, config.HERMITIAN_TOL))
    run.expect('switched_set_has_constant_phase', all(v in constant for v in witness))
    _sandwich(run, switched, witness, 'switched.')

    count_slack = config.SPECTRAL_TOL
    A = _values(G, 'A')
    run.at_most('A.alpha_le_count', alpha,
                min(int(np.sum(A <= count_slack)), int(np.sum(A >= -count_slack))), 0)
    if _has_zero_degree(G):
        run.skip_part('L', ZERO_DEGREE)
    else:
        L = _values(G, 'L')
        run.at_most('L.alpha_le_count', alpha,
                    min(int(np.sum(L <= 1 + count_slack)), int(np.sum(L >= 1 - count_slack))), 0)
    return run.finish()


# =============================================================================
# SUITE
# =============================================================================

def merge_reports(check_name: str, reports: Sequence[CheckReport]) -> CheckReport:
    """
    Fold the reports of several samples of one check into a single report.

    Failing if any sample failed, skipped only if every sample was skipped.
    """
    if not reports:
        raise BadParameter(f"merge_reports({check_name!r}) needs at least one report")
    digests = [r.inputs_digest for r in reports]
    base = ':'.join(digests[0].split(':')[:2])
    digest = f"{base}:{hashlib.md5('|'.join(digests).encode()).hexdigest()[:8]}"

    measured: List[Tuple[str, float]] = []
    failures: List[str] = []
    skipped_parts: List[str] = []
    notes: List[str] = []
    for i, report in enumerate(reports):
        measured.extend((f"sample{i}.{label}", value) for label, value in report.measured)
        if report.verdict == FAIL:
            failures.append(f"sample{i} {report.reason}")
        elif report.verdict == SKIPPED:
            skipped_parts.append(f"sample{i}: {report.reason}")
        skipped_parts.extend(f"sample{i} {part}" for part in report.skipped_parts)
        for text in report.notes:
            if text not in notes:
                notes.append(text)

    if failures:
        verdict, reason = FAIL, '; '.join(failures)
    elif all(r.verdict == SKIPPED for r in reports):
        verdict, reason = SKIPPED, '; '.join(dict.fromkeys(r.reason for r in reports))
    else:
        verdict, reason = PASS, None
    return CheckReport(
        check_name=check_name,
        inputs_digest=digest,
        measured=tuple(measured),
        tolerance=max(r.tolerance for r in reports),
        verdict=verdict,
        reason=reason,
        notes=tuple(notes),
        skipped_parts=tuple(skipped_parts),
    )


def _sample_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _deletion_samples(size: int, rng: np.random.Generator, allow_all: bool) -> List[List[int]]:
    """Every singleton plus one larger random subset (r = 1 exhaustively, r > 1 sampled)"""
    if size == 0:
        return [[]]
    samples = [[k] for k in range(size)]
    upper = size + 1 if allow_all else size
    if upper > 2:
        r = int(rng.integers(2, upper))
        samples.append(sorted(int(k) for k in rng.choice(size, r, replace=False)))
    return samples


def _suite_tasks(G: ComplexUnitHypergraph, seed: int) -> List[Tuple[str, Callable[[], CheckReport]]]:
    def vertex_deletions():
        samples = _deletion_samples(G.n, _sample_rng(seed, 1), allow_all=False)
        return merge_reports('vertex_deletion_interlacing',
                             [check_vertex_deletion_interlacing(G, S) for S in samples])

    def edge_deletions():
        samples = _deletion_samples(G.m, _sample_rng(seed, 2), allow_all=True)
        return merge_reports('edge_deletion_interlacing',
                             [check_edge_deletion_interlacing(G, F) for F in samples])

    def switchings():
        rng = _sample_rng(seed, 3)
        zeta = random_switching(G, 'vertex', rng)
        xi = random_switching(G, 'edge', rng)
        return merge_reports('switching', [
            check_switching(G, zeta),
            check_switching(G, xi),
            check_switching(switch(G, zeta), xi),
        ])

    def constant_phase_sets():
        S = constant_phase_vertices(G, config.HERMITIAN_TOL)
        samples = [S, S[:1]] if S else [[0] if G.n else []]
        return merge_reports('constant_phase_set', [check_constant_phase_set(G, s) for s in samples])

    return [
        ('bounds', lambda: check_bounds(G)),
        ('constant_phase_set', constant_phase_sets),
        ('dual_spectra', lambda: check_dual_spectra(G)),
        ('edge_deletion_interlacing', edge_deletions),
        ('independence_bounds', lambda: check_independence_bounds(G)),
        ('kernels', lambda: check_kernels(G)),
        ('nonnegativity', lambda: check_nonnegativity(G)),
        ('operator_identities', lambda: check_operator_identities(G)),
        ('quadratic_forms', lambda: check_quadratic_forms(G, seed)),
        ('rayleigh_extremality', lambda: check_rayleigh_extremality(G, seed)),
        ('regular_equivalence', lambda: check_regular_equivalence(G)),
        ('regular_uniform_dual_L', lambda: check_regular_uniform_dual_L(G)),
        ('structure', lambda: check_structure(G, seed)),
        ('switching', switchings),
        ('trace_identities', lambda: check_trace_identities(G)),
        ('vertex_deletion_interlacing', vertex_deletions),
    ]


def _guarded(G: ComplexUnitHypergraph, name: str, task: Callable[[], CheckReport]) -> CheckReport:
    try:
        with MetricsUtils.timed(f"check {name}", inputs_digest=generate_hypergraph_signature(G)):
            return task()
    except TooLarge as e:
        run = _CheckRun(name, generate_hypergraph_signature(G))
        return run.skipped(f"too large: {e}")
    except HypergraphError as e:
        logger.error(f"check {name} raised {type(e).__name__}: {e}")
        run = _CheckRun(name, generate_hypergraph_signature(G))
        run.failures.append(f"error: {type(e).__name__}: {e}")
        return run.finish()


def run_full_suite(G: ComplexUnitHypergraph, seed: Optional[int] = None,
                   workers: Optional[int] = None) -> SuiteResult:
    """
    Run every check on G with deletion sets, switchings and random vectors
    drawn deterministically from `seed`.

    Args:
        G: hypergraph under test
        seed: sample seed (default SUITE_SEED); must be >= 0
        workers: thread count (default SUITE_WORKERS)

    Returns:
        SuiteResult with one report per check, sorted by name
    """
    seed = config.SUITE_SEED if seed is None else seed
    if seed < 0:
        raise BadParameter(f"suite seed must be >= 0, got {seed}")
    workers = config.SUITE_WORKERS if workers is None else workers
    tasks = _suite_tasks(G, seed)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda item: _guarded(G, *item), tasks))
    else:
        reports = [_guarded(G, name, task) for name, task in tasks]

    result = SuiteResult(
        inputs_digest=generate_hypergraph_signature(G),
        seed=seed,
        reports=tuple(sorted(reports, key=lambda r: r.check_name)),
    )
    logger.info(f"suite {result.inputs_digest} seed={seed}: {result.summary_line()}")
    return result
