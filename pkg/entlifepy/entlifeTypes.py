import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np

from .errors import DomainError, ValidationError


# Absolute tolerance used for probability weights everywhere.
WEIGHT_TOL = 1e-12


class ExitCode(Enum):
    Success = 0
    ValidationFailure = 1
    NumericFailure = 2


class PauliLetter(Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


class DephasingAxis(Enum):
    X = "x"
    Y = "y"
    Z = "z"


class LatticeKind(Enum):
    Linear = "linear"
    Ring = "ring"
    Grid2D = "grid2d"
    Grid3D = "grid3d"
    Star = "star"
    Custom = "custom"


class OutputFormat(Enum):
    Csv = "csv"
    Json = "json"
    Plain = "plain"


class SuiteName(Enum):
    Ghz = "ghz"
    Cluster = "cluster"
    Pair = "pair"
    Choi = "choi"


# ===================================================================
# NOISE MODEL
# ===================================================================

@dataclass(frozen=True)
class NoiseParameter:
    """Survival parameter p and dimensionless time kappa_t, p = exp(-kappa_t)."""
    p: float
    kappa_t: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.kappa_t)):
            raise DomainError(f"Noise parameter must be finite, got p={self.p}, kappa_t={self.kappa_t}")
        if not 0.0 < self.p <= 1.0:
            raise DomainError(f"Survival parameter p must lie in (0, 1], got {self.p}")
        if self.kappa_t < 0.0:
            raise DomainError(f"kappa_t must be non-negative, got {self.kappa_t}")
        expected = math.exp(-self.kappa_t)
        # exp(-(-ln p)) loses ~kappa_t ulps, so the relative bound scales with kappa_t
        if abs(self.p - expected) > 1e-14 * max(1.0, self.kappa_t) * expected:
            raise ValidationError(f"Inconsistent noise parameter: p={self.p} but exp(-kappa_t)={expected}")


@dataclass(frozen=True)
class PauliString:
    """Pauli operator without phase; site 0 is the leftmost letter."""
    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ValidationError("Pauli string must act on at least one qubit")
        bad = set(self.letters) - {"I", "X", "Y", "Z"}
        if bad:
            raise ValidationError(f"Invalid Pauli letters {sorted(bad)} in '{self.letters}'")

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @classmethod
    def single(cls, n: int, site: int, letter: PauliLetter) -> "PauliString":
        if not 0 <= site < n:
            raise DomainError(f"Site {site} out of range for {n} qubits")
        chars = ["I"] * n
        chars[site] = letter.value
        return cls("".join(chars))

    def __str__(self) -> str:
        return self.letters


@dataclass(frozen=True)
class PauliDiagonalChannel:
    """Channel rho -> sum_P w_P P rho P with weights summing to one."""
    n: int
    terms: Dict[PauliString, float] = field(hash=False)

    def __post_init__(self):
        if not self.terms:
            raise ValidationError("Channel needs at least one Pauli term")
        for pauli, weight in self.terms.items():
            if pauli.n != self.n:
                raise ValidationError(f"Pauli string '{pauli}' acts on {pauli.n} qubits, channel has {self.n}")
            if weight < 0:
                raise ValidationError(f"Negative weight {weight} for '{pauli}'")
        total = math.fsum(self.terms.values())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"Channel weights sum to {total!r}, expected 1")

    def weight(self, pauli: PauliString) -> float:
        return self.terms.get(pauli, 0.0)


@dataclass(frozen=True)
class DephasingDecomposition:
    """Parameters of the x-, y- and z-dephasing maps whose composition is depolarizing."""
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        for name, value in (("p_x", self.p_x), ("p_y", self.p_y), ("p_z", self.p_z)):
            if not 0.0 < value <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {value}")


# ===================================================================
# GHZ ANALYSIS
# ===================================================================

@dataclass(frozen=True, eq=False)
class GhzSpectrum:
    """
    GHZ-basis coefficients of a depolarized N-qubit GHZ state.

    log_lambda[k] holds ln(lambda_k) for k = 0..N-1 (-inf allowed);
    lambda_0 is split into lambda0_plus / lambda0_minus.
    """
    N: int
    p: float
    log_lambda: np.ndarray
    log_lambda0_plus: float
    log_lambda0_minus: float

    @property
    def lambda0_plus(self) -> float:
        return math.exp(self.log_lambda0_plus)

    @property
    def lambda0_minus(self) -> float:
        return math.exp(self.log_lambda0_minus) if self.log_lambda0_minus > -math.inf else 0.0

    def lambda_k(self, k: int) -> float:
        if not 0 <= k <= self.N:
            raise DomainError(f"GHZ index k={k} out of range 0..{self.N}")
        # lambda_N = lambda_0 by the k <-> N-k symmetry
        return float(np.exp(self.log_lambda[0 if k == self.N else k]))


class Threshold(NamedTuple):
    p: float
    kappa_t: float


@dataclass(frozen=True)
class PartitionSpec:
    """Assignment of each of the N particles to one of M group labels."""
    N: int
    groups: Tuple[int, ...]

    def __post_init__(self):
        if len(self.groups) != self.N:
            raise ValidationError(f"Partition assigns {len(self.groups)} particles, expected {self.N}")
        if self.N < 1:
            raise ValidationError("Partition needs at least one particle")

    @cached_property
    def labels(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.groups)))

    @property
    def M(self) -> int:
        return len(self.labels)

    def members(self, label: int) -> FrozenSet[int]:
        return frozenset(i for i, g in enumerate(self.groups) if g == label)

    @property
    def group_sizes(self) -> Dict[int, int]:
        return {label: len(self.members(label)) for label in self.labels}

    @property
    def min_group_size(self) -> int:
        return min(self.group_sizes.values())


@dataclass(frozen=True)
class MBound:
    """Integer bound on the number of entangled parties; guaranteed=False marks a vacuous bound."""
    value: float
    guaranteed: bool = True


# ===================================================================
# GRAPH CORE
# ===================================================================

@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 0..n-1; edges stored as (i, j) with i < j.

    Adjacency queries go through the networkx view in `nx_graph`.
    """
    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"Graph needs at least one vertex, got n={self.n}")
        for i, j in self.edges:
            if i == j:
                raise ValidationError(f"Self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"Edge ({i}, {j}) outside vertex range [0, {self.n})")
            if i > j:
                raise ValidationError(f"Edge ({i}, {j}) not in canonical order")

    @classmethod
    def from_networkx(cls, G: nx.Graph, n: Optional[int] = None) -> "Graph":
        """Freeze an integer-labelled networkx graph; n defaults to max label + 1."""
        if G.is_directed() or G.is_multigraph():
            raise ValidationError("Only simple undirected graphs are supported")
        if any(not isinstance(v, (int, np.integer)) or v < 0 for v in G.nodes):
            raise ValidationError("Graph vertices must be non-negative integers")
        if nx.number_of_selfloops(G):
            v = next(iter(nx.selfloop_edges(G)))[0]
            raise ValidationError(f"Self-loop at vertex {v}")
        inferred = max((int(v) for v in G.nodes), default=-1) + 1
        return cls(n=inferred if n is None else n,
                   edges=frozenset((min(int(i), int(j)), max(int(i), int(j))) for i, j in G.edges))

    @cached_property
    def nx_graph(self) -> nx.Graph:
        G = nx.empty_graph(self.n)
        G.add_edges_from(self.edges)
        return G

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise DomainError(f"Vertex {v} out of range [0, {self.n})")

    def neighbors(self, v: int) -> FrozenSet[int]:
        self.check_vertex(v)
        return frozenset(self.nx_graph.adj[v])

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return self.nx_graph.degree[v]

    def closed_neighborhood(self, v: int) -> FrozenSet[int]:
        return self.neighbors(v) | {v}

    def has_edge(self, k: int, l: int) -> bool:
        return self.nx_graph.has_edge(k, l)

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    @property
    def max_degree(self) -> int:
        return max((d for _, d in self.nx_graph.degree), default=0)


@dataclass(frozen=True)
class GraphBasisIndex:
    """Label mu of the graph-state basis vector |Psi_mu> = Z^mu |G>, with K_j |Psi_mu> = (-1)^mu_j |Psi_mu>."""
    mu: Tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.mu):
            raise ValidationError(f"Graph-basis label must be a bit string, got {self.mu}")

    @classmethod
    def zero(cls, n: int) -> "GraphBasisIndex":
        return cls((0,) * n)

    def flipped(self, pattern: "ZPattern") -> "GraphBasisIndex":
        if any(not 0 <= v < len(self.mu) for v in pattern.support):
            raise ValidationError(f"Pattern {pattern} outside vertex range [0, {len(self.mu)})")
        return GraphBasisIndex(tuple(b ^ (1 if i in pattern.support else 0) for i, b in enumerate(self.mu)))


@dataclass(frozen=True)
class ZPattern:
    """Product of sigma_z operators on a vertex subset."""
    support: FrozenSet[int] = frozenset()

    def __xor__(self, other: "ZPattern") -> "ZPattern":
        return ZPattern(self.support ^ other.support)

    def pair_index(self, k: int, l: int) -> int:
        """Index 2a + b of the pattern restricted to (k, l)."""
        return 2 * (k in self.support) + (l in self.support)

    def __str__(self) -> str:
        return "{" + ",".join(str(v) for v in sorted(self.support)) + "}"


@dataclass(frozen=True)
class ZPatternMap:
    """Probability distribution over Z-patterns of an n-vertex graph state."""
    n: int
    terms: Dict[ZPattern, float] = field(hash=False)

    def __post_init__(self):
        for pattern, weight in self.terms.items():
            if weight < 0:
                raise ValidationError(f"Negative weight {weight} for pattern {pattern}")
            if any(not 0 <= v < self.n for v in pattern.support):
                raise ValidationError(f"Pattern {pattern} outside vertex range [0, {self.n})")
        total = math.fsum(self.terms.values())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"Z-pattern weights sum to {total!r}, expected 1")

    def weight(self, pattern: ZPattern) -> float:
        return self.terms.get(pattern, 0.0)


@dataclass(frozen=True)
class PairCoefficients:
    """Weights q_ab of (Z^a x Z^b)|Phi> in the reduced two-qubit state."""
    q00: float
    q01: float
    q10: float
    q11: float

    def __post_init__(self):
        values = self.as_tuple()
        if any(q < -WEIGHT_TOL or q > 1.0 + WEIGHT_TOL for q in values):
            raise ValidationError(f"Pair coefficients out of [0, 1]: {values}")
        if abs(math.fsum(values) - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"Pair coefficients sum to {math.fsum(values)!r}, expected 1")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.q00, self.q01, self.q10, self.q11)

    @classmethod
    def from_vector(cls, vec) -> "PairCoefficients":
        q = [float(x) for x in vec]
        # round-off from the transform can leave -1e-17 style entries
        q = [0.0 if abs(x) < 1e-15 else x for x in q]
        return cls(*q)

    @property
    def max(self) -> float:
        return max(self.as_tuple())


# ===================================================================
# ORACLE
# ===================================================================

@dataclass(eq=False)
class DensityMatrix:
    """Dense 2^n x 2^n density operator; qubit 0 is the most significant bit."""
    n: int
    entries: np.ndarray

    def __post_init__(self):
        dim = 2 ** self.n
        if self.entries.shape != (dim, dim):
            raise ValidationError(f"Density matrix shape {self.entries.shape} does not match {self.n} qubits")

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def invariant_violations(self, tol: float = 1e-12, psd_tol: float = 1e-10) -> List[str]:
        problems = []
        herm = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if herm > tol:
            problems.append(f"not Hermitian (deviation {herm:.3e})")
        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > tol:
            problems.append(f"trace {trace} != 1")
        min_eig = float(np.linalg.eigvalsh((self.entries + self.entries.conj().T) / 2).min())
        if min_eig < -psd_tol:
            problems.append(f"negative eigenvalue {min_eig:.3e}")
        return problems


@dataclass(frozen=True)
class BipartitionCut:
    """Qubits whose indices are transposed in a partial transpose."""
    side_b: FrozenSet[int]

    def validate(self, n: int) -> None:
        if not self.side_b:
            raise ValidationError("Cut must transpose at least one qubit")
        if any(not 0 <= q < n for q in self.side_b):
            raise ValidationError(f"Cut {sorted(self.side_b)} outside qubit range [0, {n})")
        if len(self.side_b) >= n:
            raise ValidationError(f"Cut {sorted(self.side_b)} is not a proper subset of {n} qubits")

    def complement(self, n: int) -> "BipartitionCut":
        return BipartitionCut(frozenset(range(n)) - self.side_b)


@dataclass(frozen=True)
class GhzCoefficients:
    """Diagonal of a state in the GHZ basis, keyed by (bits k_1..k_{N-1}, sign)."""
    n: int
    values: Dict[Tuple[str, str], float] = field(hash=False)
    max_offdiag: float = 0.0

    def by_weight(self, k: int, sign: str = "+") -> List[float]:
        return [v for (bits, s), v in self.values.items() if s == sign and bits.count("1") == k]


@dataclass(frozen=True)
class ChoiCrossing:
    """Result of the dephased-CZ Choi-state PT scan."""
    crossing: Optional[float]
    bracket: Optional[Tuple[float, float]]
    grid: Tuple[float, ...]
    min_eigenvalues: Tuple[float, ...]
    expected: float = math.sqrt(2.0) - 1.0

    @property
    def found(self) -> bool:
        return self.crossing is not None

    @property
    def discrepancy(self) -> Optional[float]:
        return None if self.crossing is None else self.crossing - self.expected


# ===================================================================
# CLI / SUITES
# ===================================================================

@dataclass
class ResultTable:
    """Rectangular result set; rows are kept in input order."""
    command: str
    params: Dict[str, Any]
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    timestamp: Optional[str] = None

    def __post_init__(self):
        for row in self.rows:
            self._check_row(row)

    def _check_row(self, row: List[Any]) -> None:
        if len(row) != len(self.columns):
            raise ValidationError(f"Row {row} has {len(row)} cells, table has {len(self.columns)} columns")

    def add_row(self, row: List[Any]) -> None:
        self._check_row(row)
        self.rows.append(list(row))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one oracle-versus-analytic comparison."""
    name: str
    observed: float
    expected: float
    tolerance: float
    passed: bool
