"""
Complex unit hypergraphs: the combinatorial model, its statistics,
transformations and generators.

A hypergraph is stored as an immutable value: n vertices (0..n-1) and an
ordered tuple of edges, each edge a tuple of (vertex, PhaseValue) pairs sorted
by vertex. The absence of a pair means "not incident" (omega = 0); a phase is
never zero. Edges form a list, not a set, so multi-edges survive every
transformation.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

import config
from utils import (
    BadEdgeIndex, BadParameter, BadVertexIndex, DuplicateIncidence, EmptyEdgeWarning,
    LengthMismatch, NonUnitPhase, NotAdjacentInEdge, TooLarge,
)

logger = logging.getLogger(__name__)

# Values within a few ulps of modulus one are kept bit-for-bit, so normalizing
# an already-normalized phase is the identity and file round-trips are exact.
_UNIT_SLACK = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class PhaseValue:
    """A complex unit, the label omega(v, e) of one incidence"""
    re: float
    im: float

    def __post_init__(self):
        re = float(self.re)
        im = float(self.im)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NonUnitPhase(float('nan'))
        modulus = math.hypot(re, im)
        if abs(modulus - 1.0) > config.PHASE_TOL:
            raise NonUnitPhase(modulus)
        if abs(modulus - 1.0) > _UNIT_SLACK:
            re /= modulus
            im /= modulus
        # -0.0 would not survive a text round trip
        object.__setattr__(self, 're', re + 0.0)
        object.__setattr__(self, 'im', im + 0.0)

    @classmethod
    def one(cls) -> 'PhaseValue':
        return cls(1.0, 0.0)

    @classmethod
    def from_angle(cls, theta: float) -> 'PhaseValue':
        return cls(math.cos(theta), math.sin(theta))

    @classmethod
    def root_of_unity(cls, j: int, k: int) -> 'PhaseValue':
        """exp(2 pi i j / k), exact on quarter turns"""
        j %= k
        if (4 * j) % k == 0:
            quarter = (4 * j) // k
            return cls(*((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[quarter])
        return cls.from_angle(2.0 * math.pi * j / k)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def conjugate(self) -> 'PhaseValue':
        """Also the inverse, since |omega| = 1"""
        return PhaseValue(self.re, -self.im)

    inverse = conjugate

    def __mul__(self, other: 'PhaseValue') -> 'PhaseValue':
        if not isinstance(other, PhaseValue):
            return NotImplemented
        return PhaseValue(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> 'PhaseValue':
        return PhaseValue(-self.re, -self.im)


Edge = Tuple[Tuple[int, PhaseValue], ...]


@dataclass(frozen=True)
class ComplexUnitHypergraph:
    """(V, E, I, omega) with V = {0..n-1} and E an ordered tuple of edges"""
    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise BadParameter(f"vertex count must be >= 0, got {self.n}")
        normalized = []
        for j, edge in enumerate(self.edges):
            seen = set()
            for position, (v, phase) in enumerate(edge):
                if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or not 0 <= v < self.n:
                    raise BadVertexIndex(v, self.n, edge=j, position=position)
                if v in seen:
                    raise DuplicateIncidence(int(v), j, position=position)
                if not isinstance(phase, PhaseValue):
                    raise BadParameter(f"edge {j}: phase of vertex {v} is not a PhaseValue")
                seen.add(v)
            normalized.append(tuple(sorted(((int(v), p) for v, p in edge), key=lambda vp: vp[0])))
        object.__setattr__(self, 'edges', tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def incidence_count(self) -> int:
        return sum(len(edge) for edge in self.edges)

    def edge_map(self, j: int) -> Dict[int, PhaseValue]:
        if not 0 <= j < self.m:
            raise BadEdgeIndex(j, self.m)
        return dict(self.edges[j])

    def incidences(self) -> Iterator[Tuple[int, int, PhaseValue]]:
        """Yield (vertex, edge, phase) in edge order"""
        for j, edge in enumerate(self.edges):
            for v, phase in edge:
                yield v, j, phase

    def phase(self, v: int, j: int) -> Optional[PhaseValue]:
        """omega(v, e_j), or None when v is not in e_j"""
        return self.edge_map(j).get(v)


@dataclass(frozen=True)
class SwitchingFunction:
    """zeta: V -> T (kind 'vertex') or xi: E -> T (kind 'edge')"""
    kind: str
    values: Tuple[PhaseValue, ...]

    def __post_init__(self):
        if self.kind not in ('vertex', 'edge'):
            raise BadParameter(f"switching kind must be 'vertex' or 'edge', got {self.kind!r}")
        object.__setattr__(self, 'values', tuple(self.values))

    def inverse(self) -> 'SwitchingFunction':
        return SwitchingFunction(self.kind, tuple(v.conjugate() for v in self.values))

    def diagonal(self) -> np.ndarray:
        """D_n(zeta) or D_m(xi)"""
        return np.diag(np.array([v.to_complex() for v in self.values], dtype=complex))


@dataclass(frozen=True)
class DegreeProfile:
    degrees: Tuple[int, ...]
    sizes: Tuple[int, ...]
    max_degree: int
    max_size: int
    is_regular: bool
    is_uniform: bool

    @property
    def volume(self) -> int:
        return sum(self.degrees)


# =============================================================================
# CONSTRUCTION
# =============================================================================

def build(n: int, raw_edges: Sequence[Sequence[Tuple[int, float, float]]]) -> ComplexUnitHypergraph:
    """
    Validate raw (vertex, re, im) triples grouped by edge into a hypergraph.

    Raises:
        NonUnitPhase, DuplicateIncidence, BadVertexIndex: carrying the edge
        index and the position of the offending triple within it.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise BadParameter(f"n must be a non-negative integer, got {n!r}")
    edges = []
    for j, raw_edge in enumerate(raw_edges):
        edge = []
        seen = set()
        for position, (v, re, im) in enumerate(raw_edge):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise BadVertexIndex(v, n, edge=j, position=position)
            if v in seen:
                raise DuplicateIncidence(int(v), j, position=position)
            seen.add(v)
            try:
                phase = PhaseValue(re, im)
            except NonUnitPhase as e:
                raise NonUnitPhase(e.modulus, edge=j, position=position) from None
            edge.append((int(v), phase))
        edges.append(tuple(edge))
    return ComplexUnitHypergraph(int(n), tuple(edges))


def from_gain_graph(n: int, gain_edges: Iterable[Tuple[int, int, PhaseValue]]) -> ComplexUnitHypergraph:
    """
    Embed a complex unit gain graph as a 2-uniform hypergraph.

    Edge (i, j, g) becomes {i: 1, j: -conj(g)}, whose adjacency gain
    phi_e(i, j) is exactly g.
    """
    edges = []
    for i, j, gain in gain_edges:
        if i == j:
            raise BadParameter(f"gain graph edge ({i}, {j}) is a loop")
        edges.append(((i, PhaseValue.one()), (j, -gain.conjugate())))
    return ComplexUnitHypergraph(n, tuple(edges))


# =============================================================================
# STATISTICS
# =============================================================================

def degree_profile(G: ComplexUnitHypergraph) -> DegreeProfile:
    degrees = [0] * G.n
    for v, _, _ in G.incidences():
        degrees[v] += 1
    sizes = [len(edge) for edge in G.edges]
    return DegreeProfile(
        degrees=tuple(degrees),
        sizes=tuple(sizes),
        max_degree=max(degrees, default=0),
        max_size=max(sizes, default=0),
        is_regular=len(set(degrees)) <= 1,
        is_uniform=len(set(sizes)) <= 1,
    )


def adjacency_gain(G: ComplexUnitHypergraph, e: int, i: int, j: int) -> PhaseValue:
    """phi_e(v_i, v_j) = -omega(v_i, e) * omega(v_j, e)^-1"""
    edge = G.edge_map(e)
    if i == j or i not in edge or j not in edge:
        raise NotAdjacentInEdge(f"vertices {i} and {j} are not joined by edge {e}")
    return -(edge[i] * edge[j].conjugate())


def is_oriented(G: ComplexUnitHypergraph) -> bool:
    """Every phase is +1 or -1"""
    return all(phase.im == 0.0 and abs(phase.re) == 1.0 for _, _, phase in G.incidences())


def constant_phase_vertices(G: ComplexUnitHypergraph, tol: Optional[float] = None) -> List[int]:
    """Vertices whose phase is the same on every incidence (degree <= 1 always qualifies)"""
    tol = config.HERMITIAN_TOL if tol is None else tol
    first: Dict[int, complex] = {}
    broken: Set[int] = set()
    for v, _, phase in G.incidences():
        z = phase.to_complex()
        if v not in first:
            first[v] = z
        elif abs(z - first[v]) > tol:
            broken.add(v)
    return [v for v in range(G.n) if v not in broken]


def is_independent(G: ComplexUnitHypergraph, S: Iterable[int]) -> bool:
    S = set(S)
    return all(sum(1 for v, _ in edge if v in S) <= 1 for edge in G.edges)


def connected_components(G: ComplexUnitHypergraph) -> List[List[int]]:
    """Vertex sets of the components of the vertex-edge incidence graph"""
    graph = nx.Graph()
    graph.add_nodes_from(('v', v) for v in range(G.n))
    graph.add_nodes_from(('e', j) for j in range(G.m))
    graph.add_edges_from((('v', v), ('e', j)) for v, j, _ in G.incidences())
    components = []
    for component in nx.connected_components(graph):
        vertices = sorted(index for kind, index in component if kind == 'v')
        if vertices:
            components.append(vertices)
    return sorted(components)


def is_connected(G: ComplexUnitHypergraph) -> bool:
    return len(connected_components(G)) <= 1


# =============================================================================
# TRANSFORMATIONS
# =============================================================================

def dual(G: ComplexUnitHypergraph) -> ComplexUnitHypergraph:
    """G*: edges become vertices, omega*(e, v) = omega(v, e)^-1"""
    stars: List[List[Tuple[int, PhaseValue]]] = [[] for _ in range(G.n)]
    for v, j, phase in G.incidences():
        stars[v].append((j, phase.conjugate()))
    return ComplexUnitHypergraph(G.m, tuple(tuple(star) for star in stars))


def underlying(G: ComplexUnitHypergraph) -> ComplexUnitHypergraph:
    """G': same incidences, every phase 1"""
    one = PhaseValue.one()
    return ComplexUnitHypergraph(G.n, tuple(tuple((v, one) for v, _ in edge) for edge in G.edges))


def weak_delete_vertices(G: ComplexUnitHypergraph, S: Iterable[int]) -> Tuple[ComplexUnitHypergraph, Dict[int, int]]:
    """
    Remove the vertices in S and their incidences, keeping every edge.

    Returns:
        (hypergraph, index_map) where index_map sends each surviving old
        vertex index to its compacted new index.
    """
    S = set(S)
    for v in S:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < G.n:
            raise BadVertexIndex(v, G.n)
    index_map = {}
    for v in range(G.n):
        if v not in S:
            index_map[v] = len(index_map)
    edges = tuple(
        tuple((index_map[v], phase) for v, phase in edge if v not in S)
        for edge in G.edges
    )
    return ComplexUnitHypergraph(len(index_map), edges), index_map


def weak_delete_edges(G: ComplexUnitHypergraph, F: Iterable[int]) -> ComplexUnitHypergraph:
    F = set(F)
    for j in F:
        if isinstance(j, bool) or not isinstance(j, (int, np.integer)) or not 0 <= j < G.m:
            raise BadEdgeIndex(j, G.m)
    return ComplexUnitHypergraph(G.n, tuple(edge for j, edge in enumerate(G.edges) if j not in F))


def switch(G: ComplexUnitHypergraph, f: SwitchingFunction) -> ComplexUnitHypergraph:
    """omega(v, e) -> zeta(v)^-1 omega(v, e), or xi(e)^-1 omega(v, e)"""
    expected = G.n if f.kind == 'vertex' else G.m
    if len(f.values) != expected:
        raise LengthMismatch(
            f"{f.kind} switching function has {len(f.values)} values, hypergraph needs {expected}"
        )
    if f.kind == 'vertex':
        edges = tuple(
            tuple((v, f.values[v].conjugate() * phase) for v, phase in edge)
            for edge in G.edges
        )
    else:
        edges = tuple(
            tuple((v, f.values[j].conjugate() * phase) for v, phase in edge)
            for j, edge in enumerate(G.edges)
        )
    return ComplexUnitHypergraph(G.n, edges)


def edge_switch_to_constant_phase(G: ComplexUnitHypergraph, S: Iterable[int]) -> Tuple[ComplexUnitHypergraph, SwitchingFunction]:
    """
    Edge-switch so every vertex of an independent set S has phase 1 everywhere.

    Each edge meets S at most once, so xi(e) = omega(s, e) for the unique s in
    e cap S (and 1 elsewhere) sets every such phase to 1 independently.
    """
    S = set(S)
    if not is_independent(G, S):
        raise BadParameter(f"vertex set {sorted(S)} is not independent")
    values = []
    for edge in G.edges:
        hit = [phase for v, phase in edge if v in S]
        values.append(hit[0] if hit else PhaseValue.one())
    xi = SwitchingFunction('edge', tuple(values))
    return switch(G, xi), xi


# =============================================================================
# GENERATORS
# =============================================================================

def gen_random(n: int, m: int, p: float, phase_mode: str = 'continuous', k: int = 2,
               seed: Optional[int] = None) -> ComplexUnitHypergraph:
    """
    Random hypergraph with independent incidences.

    Args:
        n, m: vertex and edge counts
        p: probability that each (v, e) incidence is present
        phase_mode: 'continuous' (uniform on T) or 'roots' (uniform k-th roots of unity)
        k: root order for phase_mode='roots'; k=2 gives oriented hypergraphs
        seed: generator seed; identical seeds give identical hypergraphs

    An edge that comes out empty is redrawn up to EMPTY_EDGE_RESAMPLES times,
    then kept empty with an EmptyEdgeWarning.
    """
    if n < 1 or m < 0:
        raise BadParameter(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    if not 0 < p <= 1:
        raise BadParameter(f"inclusion probability must be in (0, 1], got {p}")
    if phase_mode not in ('continuous', 'roots'):
        raise BadParameter(f"phase_mode must be 'continuous' or 'roots', got {phase_mode!r}")
    if phase_mode == 'roots' and k < 1:
        raise BadParameter(f"root order k must be >= 1, got {k}")

    rng = np.random.default_rng(seed)
    edges = []
    empty_edges = []
    for j in range(m):
        mask = rng.random(n) < p
        tries = 0
        while not mask.any() and tries < config.EMPTY_EDGE_RESAMPLES:
            mask = rng.random(n) < p
            tries += 1
        if not mask.any():
            empty_edges.append(j)
        members = np.flatnonzero(mask)
        if phase_mode == 'continuous':
            phases = [PhaseValue.from_angle(theta) for theta in rng.uniform(0.0, 2.0 * math.pi, members.size)]
        else:
            phases = [PhaseValue.root_of_unity(int(r), k) for r in rng.integers(0, k, members.size)]
        edges.append(tuple(zip((int(v) for v in members), phases)))

    if empty_edges:
        logger.warning(f"gen_random(n={n}, m={m}, p={p}, seed={seed}): edges {empty_edges} left empty")
        warnings.warn(f"edges {empty_edges} left empty after resampling", EmptyEdgeWarning, stacklevel=2)
    return ComplexUnitHypergraph(n, tuple(edges))


def gen_single_edge_all_ones(n: int) -> ComplexUnitHypergraph:
    """One n-edge with every phase 1: the sharp case of rho(A) <= Delta(nabla - 1)"""
    if n < 1:
        raise BadParameter(f"need n >= 1, got {n}")
    one = PhaseValue.one()
    return ComplexUnitHypergraph(n, (tuple((v, one) for v in range(n)),))


FUZZ_PHASE_MODES = (('continuous', 1), ('roots', 2), ('roots', 3), ('roots', 4))


def fuzz_corpus(count: int, seed: int, n_max: int = 10, m_max: int = 10) -> Iterator[ComplexUnitHypergraph]:
    """
    Seeded random hypergraphs cycling through continuous phases and 2nd, 3rd
    and 4th roots of unity, with n <= n_max, m <= m_max and p in [0.3, 0.9].
    """
    if count < 0 or n_max < 1 or m_max < 1:
        raise BadParameter(f"need count >= 0, n_max >= 1, m_max >= 1; got {count}, {n_max}, {m_max}")
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        p = float(rng.uniform(0.3, 0.9))
        mode, k = FUZZ_PHASE_MODES[i % len(FUZZ_PHASE_MODES)]
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', EmptyEdgeWarning)
            yield gen_random(n, m, p, phase_mode=mode, k=k, seed=int(rng.integers(2 ** 31)))


def random_switching(G: ComplexUnitHypergraph, kind: str, rng: np.random.Generator) -> SwitchingFunction:
    size = G.n if kind == 'vertex' else G.m
    angles = rng.uniform(0.0, 2.0 * math.pi, size)
    return SwitchingFunction(kind, tuple(PhaseValue.from_angle(theta) for theta in angles))


# =============================================================================
# INDEPENDENCE
# =============================================================================

def independence_number(G: ComplexUnitHypergraph) -> Tuple[int, Tuple[int, ...]]:
    """
    Brute-force maximum independent set.

    Include-first depth-first search visits candidate sets in lexicographic
    order and only replaces the incumbent on a strictly larger set, so the
    witness is the lexicographically smallest maximum independent set.
    """
    if G.n > config.MAX_BRUTE_FORCE_VERTICES:
        raise TooLarge(f"independence_number is brute force; n={G.n} exceeds {config.MAX_BRUTE_FORCE_VERTICES}")

    conflicts = [0] * G.n
    for edge in G.edges:
        members = 0
        for v, _ in edge:
            members |= 1 << v
        for v, _ in edge:
            conflicts[v] |= members & ~(1 << v)

    best: List[int] = []
    chosen: List[int] = []

    def search(start: int, blocked: int):
        nonlocal best
        remaining = sum(1 for v in range(start, G.n) if not blocked >> v & 1)
        if len(chosen) + remaining <= len(best):
            return
        if remaining == 0:
            best = list(chosen)
            return
        v = next(v for v in range(start, G.n) if not blocked >> v & 1)
        chosen.append(v)
        search(v + 1, blocked | conflicts[v])
        chosen.pop()
        search(v + 1, blocked | (1 << v))

    search(0, 0)
    return len(best), tuple(best)


def volume(G: ComplexUnitHypergraph, S: Iterable[int]) -> int:
    """vol S = sum of degrees over S"""
    degrees = degree_profile(G).degrees
    return sum(degrees[v] for v in set(S))
