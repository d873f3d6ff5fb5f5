"""
Graph states under local Pauli-diagonal noise.

Every single-qubit Pauli acting on a graph state can be traded for a product
of sigma_z operators (I -> {}, Z -> {j}, X -> N(j), Y -> {j} + N(j)), so any
Pauli-diagonal channel becomes a distribution over Z-patterns. Measuring all
qubits but an edge (k, l) in the sigma_z basis leaves a Bell-diagonal pair
whose coefficients only depend on the Z-patterns restricted to {k, l}; they
are obtained by convolving the restricted distributions over Z2 x Z2.
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.linalg import hadamard

from common.calculations import bisect_root
from common.parser import parse_graph
from common.utils import ordered_map

from .entlifeTypes import (
    Graph, LatticeKind, NoiseParameter, PairCoefficients, PauliDiagonalChannel,
    PauliLetter, PauliString, Threshold, ZPattern, ZPatternMap,
)
from .errors import DomainError, ValidationError
from .noise_model import noise_from_p

logger = logging.getLogger(__name__)

# Characters of Z2 x Z2 in the 2a + b ordering; H @ H = 4 I.
_CHARACTERS = hadamard(4).astype(float)

PAIR_P_BRACKET = (1e-6, 1.0 - 1e-12)
PAIR_XTOL = 1e-10

SQRT2_MINUS_1 = math.sqrt(2.0) - 1.0


# ===================================================================
# LATTICES
# ===================================================================

def _check_dims(kind: LatticeKind, dims: Sequence[int], count: int) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != count:
        raise ValidationError(f"{kind.value} lattice needs {count} dimension(s), got {dims}")
    if any(d < 1 for d in dims):
        raise ValidationError(f"Lattice dimensions must be positive, got {dims}")
    return dims


def _row_major(G: nx.Graph, dims: Tuple[int, ...]) -> Graph:
    # grid nodes are coordinate tuples; flatten them with the last axis fastest
    mapping = {node: int(np.ravel_multi_index(node, dims)) for node in G.nodes}
    return Graph.from_networkx(nx.relabel_nodes(G, mapping), n=math.prod(dims))


def make_lattice(kind: LatticeKind, dims) -> Graph:
    """
    Build a lattice graph with row-major vertex indexing.

    dims is (n,) for linear, ring and star, (rows, cols) for grid2d,
    (a, b, c) for grid3d, and an edge list for custom.
    """
    kind = LatticeKind(kind)

    if kind == LatticeKind.Custom:
        edges = [tuple(e) for e in dims]
        if any(len(e) != 2 for e in edges):
            raise ValidationError("Custom lattice needs an edge list of (i, j) pairs")
        if not edges:
            raise ValidationError("Custom edge list is empty")
        canonical = [(min(int(i), int(j)), max(int(i), int(j))) for i, j in edges]
        if any(i < 0 for i, _ in canonical):
            raise ValidationError("Custom edge list contains a negative vertex index")
        if len(set(canonical)) != len(canonical):
            raise ValidationError(f"Duplicate edge in {sorted(canonical)}")
        return Graph.from_networkx(nx.from_edgelist(canonical))

    if kind == LatticeKind.Linear:
        (n,) = _check_dims(kind, dims, 1)
        return Graph.from_networkx(nx.path_graph(n))

    if kind == LatticeKind.Ring:
        (n,) = _check_dims(kind, dims, 1)
        if n < 3:
            raise ValidationError(f"A ring needs at least 3 vertices, got {n}")
        return Graph.from_networkx(nx.cycle_graph(n))

    if kind == LatticeKind.Star:
        (n,) = _check_dims(kind, dims, 1)
        # hub 0, leaves 1..n-1
        return Graph.from_networkx(nx.star_graph(n - 1))

    if kind == LatticeKind.Grid2D:
        rows, cols = _check_dims(kind, dims, 2)
        return _row_major(nx.grid_2d_graph(rows, cols), (rows, cols))

    a, b, c = _check_dims(kind, dims, 3)
    cube = nx.cartesian_product(nx.grid_2d_graph(a, b), nx.path_graph(c))
    cube = nx.relabel_nodes(cube, {((x, y), z): (x, y, z) for (x, y), z in cube.nodes})
    return _row_major(cube, (a, b, c))


def default_pair(g: Graph, kind: LatticeKind, dims) -> Tuple[int, int]:
    """Interior edge used when no pair is requested; custom graphs use the edge of largest degree sum."""
    kind = LatticeKind(kind)
    if kind in (LatticeKind.Linear, LatticeKind.Grid2D, LatticeKind.Grid3D):
        dims = tuple(int(d) for d in dims)
        # centre coordinate on every axis, then step along the last axis
        centre = [(d - 1) // 2 for d in dims]
        v = 0
        for coord, d in zip(centre, dims):
            v = v * d + coord
        if centre[-1] + 1 >= dims[-1]:
            raise DomainError(f"Lattice {dims} has no edge along its last axis")
        return v, v + 1
    if kind in (LatticeKind.Ring, LatticeKind.Star):
        return 0, 1
    if not g.edges:
        raise DomainError("Graph has no edges")
    return max(g.sorted_edges(), key=lambda e: (g.degree(e[0]) + g.degree(e[1]), -e[0], -e[1]))


def load_graph(path) -> Graph:
    """Read a graph from an edge-list file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"Cannot read graph file {path}: {e}") from e
    graph = parse_graph(text)
    logger.info(f"Loaded graph from {path}: n={graph.n}, {len(graph.edges)} edges")
    return graph


# ===================================================================
# STABILIZERS AND Z-PATTERN CALCULUS
# ===================================================================

def correlation_operator(g: Graph, j: int) -> PauliString:
    """K_j = X_j prod_{k in N(j)} Z_k."""
    neighbors = g.neighbors(j)
    letters = ["I"] * g.n
    letters[j] = "X"
    for k in neighbors:
        letters[k] = "Z"
    return PauliString("".join(letters))


def pauli_to_zpattern(g: Graph, j: int, letter) -> ZPattern:
    """Z-pattern equivalent (up to phase) of `letter` acting on vertex j of the graph state."""
    letter = PauliLetter(letter)
    g.check_vertex(j)
    if letter == PauliLetter.I:
        return ZPattern()
    if letter == PauliLetter.Z:
        return ZPattern(frozenset({j}))
    if letter == PauliLetter.X:
        return ZPattern(g.neighbors(j))
    return ZPattern(g.closed_neighborhood(j))


def _zmap(n: int, weighted: Iterable[Tuple[ZPattern, float]]) -> ZPatternMap:
    merged: Dict[ZPattern, float] = {}
    for pattern, weight in weighted:
        if weight == 0.0:
            continue
        merged[pattern] = merged.get(pattern, 0.0) + weight
    return ZPatternMap(n=n, terms=merged)


def depolarizing_zmap(g: Graph, j: int, np_: NoiseParameter) -> ZPatternMap:
    """Depolarizing noise on vertex j as a Z-pattern distribution."""
    noise = (1.0 - np_.p) / 4.0
    return _zmap(g.n, [
        (pauli_to_zpattern(g, j, letter), np_.p + noise if letter == PauliLetter.I else noise)
        for letter in PauliLetter
    ])


def compose_zmaps(a: ZPatternMap, b: ZPatternMap) -> ZPatternMap:
    """XOR-convolution of two Z-pattern distributions."""
    if a.n != b.n:
        raise ValidationError(f"Cannot compose Z-pattern maps on {a.n} and {b.n} vertices")
    return _zmap(a.n, (
        (sa ^ sb, wa * wb)
        for sa, wa in a.terms.items()
        for sb, wb in b.terms.items()
    ))


def channel_to_zmap(g: Graph, chan: PauliDiagonalChannel) -> ZPatternMap:
    """Convert a Pauli-diagonal channel on the graph's qubits into a Z-pattern map."""
    if chan.n != g.n:
        raise ValidationError(f"Channel acts on {chan.n} qubits, graph has {g.n} vertices")
    weighted = []
    for pauli, weight in chan.terms.items():
        pattern = ZPattern()
        for site, letter in enumerate(pauli.letters):
            if letter != "I":
                pattern = pattern ^ pauli_to_zpattern(g, site, letter)
        weighted.append((pattern, weight))
    return _zmap(g.n, weighted)


# ===================================================================
# REDUCED PAIR STATES
# ===================================================================

def _check_edge(g: Graph, k: int, l: int) -> None:
    g.check_vertex(k)
    g.check_vertex(l)
    if not g.has_edge(k, l):
        raise DomainError(f"({k}, {l}) is not an edge of the graph")


def restricted_pair_inputs(g: Graph, np_: NoiseParameter, k: int, l: int) -> List[Tuple[int, np.ndarray]]:
    """
    Restricted Z2 x Z2 distributions (index 2a + b) of the depolarizing maps
    of every vertex in {k, l} + N(k) + N(l), sorted by vertex.
    """
    _check_edge(g, k, l)
    support = sorted(g.closed_neighborhood(k) | g.closed_neighborhood(l))
    inputs = []
    for v in support:
        vec = np.zeros(4)
        for pattern, weight in depolarizing_zmap(g, v, np_).terms.items():
            vec[pattern.pair_index(k, l)] += weight
        inputs.append((v, vec))
    return inputs


def character_transform(vec: np.ndarray) -> np.ndarray:
    return _CHARACTERS @ vec


def inverse_character_transform(vec: np.ndarray) -> np.ndarray:
    return _CHARACTERS @ vec / 4.0


def reduced_pair_state(g: Graph, np_: NoiseParameter, k: int, l: int) -> PairCoefficients:
    """Bell-diagonal coefficients of edge (k, l) after measuring all other qubits in sigma_z."""
    transformed = np.ones(4)
    for _, vec in restricted_pair_inputs(g, np_, k, l):
        transformed *= character_transform(vec)
    return PairCoefficients.from_vector(inverse_character_transform(transformed))


def pair_state_from_zmap(zmap: ZPatternMap, k: int, l: int) -> PairCoefficients:
    """Marginal of an arbitrary Z-pattern map on the membership bits of k and l."""
    for v in (k, l):
        if not 0 <= v < zmap.n:
            raise DomainError(f"Vertex {v} out of range [0, {zmap.n})")
    if k == l:
        raise DomainError("Pair vertices must differ")
    q = np.zeros(4)
    for pattern, weight in zmap.terms.items():
        q[pattern.pair_index(k, l)] += weight
    return PairCoefficients.from_vector(q)


def pair_entangled(q: PairCoefficients) -> bool:
    """Bell-diagonal pair is NPT (hence distillable) iff its largest weight exceeds 1/2."""
    return q.max > 0.5


def pair_threshold(g: Graph, k: int, l: int) -> Threshold:
    """Survival parameter above which edge (k, l) can be distilled into a Bell pair."""
    _check_edge(g, k, l)

    def margin(p: float) -> float:
        return reduced_pair_state(g, noise_from_p(p), k, l).max - 0.5

    p_less = bisect_root(margin, *PAIR_P_BRACKET, xtol=PAIR_XTOL, label=f"pair_threshold({k}, {l})")
    logger.debug(f"pair_threshold ({k}, {l}): p_less={p_less!r}")
    return Threshold(p=p_less, kappa_t=-math.log(p_less))


def graph_threshold(g: Graph, workers: int = 1) -> Tuple[int, int, Threshold]:
    """Worst edge of the graph: the largest pair threshold over all edges."""
    edges = g.sorted_edges()
    if not edges:
        raise DomainError("Graph has no edges")
    thresholds = ordered_map(lambda e: pair_threshold(g, *e), edges, workers)
    (k, l), worst = max(zip(edges, thresholds), key=lambda item: item[1].p)
    logger.info(f"graph_threshold: worst edge ({k}, {l}) with p_less={worst.p!r} over {len(edges)} edges")
    return k, l, worst


def disjoint_pair_coefficient(n_k: int, n_j: int, np_: NoiseParameter) -> float:
    """
    q00 of a pair whose vertices have n_k and n_j further neighbours and no
    common ones: p^2/4 (1 + p^n_k)(1 + p^n_j) + (1 - p^2)/4.
    """
    if n_k < 0 or n_j < 0:
        raise DomainError(f"Neighbour counts must be non-negative, got ({n_k}, {n_j})")
    p = np_.p
    return p * p / 4.0 * (1.0 + p ** n_k) * (1.0 + p ** n_j) + (1.0 - p * p) / 4.0


# ===================================================================
# BOUNDS
# ===================================================================

def degree_bound(d_k: int, d_j: int) -> float:
    """kappa_t below which a pair of degrees (d_k, d_j) is certainly distillable."""
    if d_k < 1 or d_j < 1:
        raise DomainError(f"Degrees must be at least 1, got ({d_k}, {d_j})")
    return math.log(2.0) / ((d_k + d_j - 2) // 2 + 2)


def separability_bound(m: int) -> float:
    """kappa_t beyond which a graph state of vertex degree m is fully separable."""
    if m < 1:
        raise DomainError(f"Vertex degree must be at least 1, got {m}")
    return -2.0 * m * math.log(SQRT2_MINUS_1)


def graph_separability_bound(g: Graph) -> float:
    """separability_bound at the graph's maximum vertex degree."""
    if g.max_degree == 0:
        raise DomainError("Graph has no edges")
    return separability_bound(g.max_degree)
