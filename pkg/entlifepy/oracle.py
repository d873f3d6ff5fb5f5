"""
Dense density-matrix engine for cross-checking the analytic modules.

Qubit 0 is the most significant bit: an n-qubit operator is stored as a
2^n x 2^n array whose tensor view has shape [2] * 2n, row axes first.
Local operations contract one or two of those axes, so no operator on the
full register is ever materialized.
"""

import logging
import math
from itertools import combinations, product
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import unitary_group

from . import config
from .entlifeTypes import (
    BipartitionCut, ChoiCrossing, DensityMatrix, DephasingAxis, GhzCoefficients,
    Graph, GraphBasisIndex, NoiseParameter, PairCoefficients, PartitionSpec, PauliDiagonalChannel, PauliString,
)
from .errors import DomainError, ResourceError, ValidationError
from .graph_core import correlation_operator
from .noise_model import noise_from_p

logger = logging.getLogger(__name__)

# Eigenvalues above -SIGN_TOL count as non-negative.
SIGN_TOL = 1e-10

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)

# |Phi> = CZ |+>|+>, the single-edge graph state
_PHI = np.array([1, 1, 1, -1], dtype=complex) / 2.0
_PAIR_FRAME = np.stack([
    np.kron(np.linalg.matrix_power(PAULI_MATRICES["Z"], a), np.linalg.matrix_power(PAULI_MATRICES["Z"], b)) @ _PHI
    for a, b in product((0, 1), repeat=2)
])


def _pure(psi: np.ndarray, n: int) -> DensityMatrix:
    return DensityMatrix(n=n, entries=np.outer(psi, psi.conj()))


def apply_local(entries: np.ndarray, n: int, op: np.ndarray, sites: Sequence[int]) -> np.ndarray:
    """op rho op^dagger for an operator on `sites` (in the listed order)."""
    sites = list(sites)
    k = len(sites)
    if op.shape != (2 ** k, 2 ** k):
        raise ValidationError(f"Operator of shape {op.shape} does not act on {k} qubit(s)")
    op_t = op.reshape([2] * 2 * k)
    t = entries.reshape([2] * 2 * n)
    t = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), sites))
    t = np.moveaxis(t, list(range(k)), sites)
    col_axes = [n + s for s in sites]
    t = np.tensordot(t, op_t.conj(), axes=(col_axes, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), col_axes)
    return t.reshape(2 ** n, 2 ** n)


class DensityMatrixOracle:
    """
    Brute-force reference implementation on at most `max_qubits` qubits.

    Instances hold no state between calls besides the cap; one instance
    should still not be shared between threads.
    """

    def __init__(self, max_qubits: Optional[int] = None):
        cap = config.ORACLE_MAX_QUBITS if max_qubits is None else max_qubits
        self.max_qubits = min(cap, config.ORACLE_HARD_CAP)

    def _check_size(self, n: int) -> None:
        if n > self.max_qubits:
            raise ResourceError(f"Oracle limited to {self.max_qubits} qubits, requested {n}")
        if n < 1:
            raise DomainError(f"Need at least one qubit, got {n}")

    # ---------------------------------------------------------------
    # State construction
    # ---------------------------------------------------------------

    def build_graph_state(self, g: Graph, index: Optional[GraphBasisIndex] = None) -> DensityMatrix:
        """Z^mu prod_{(k,l) in E} CZ_kl |+>^n; K_j has expectation (-1)^mu_j (+1 without an index)."""
        self._check_size(g.n)
        if index is not None and len(index.mu) != g.n:
            raise ValidationError(f"Graph-basis label on {len(index.mu)} vertices, graph has {g.n}")
        dim = 2 ** g.n
        indices = np.arange(dim)
        signs = np.ones(dim)
        for k, l in g.edges:
            both = ((indices >> (g.n - 1 - k)) & 1) & ((indices >> (g.n - 1 - l)) & 1)
            signs = signs * (1 - 2 * both)
        if index is not None:
            for j, bit in enumerate(index.mu):
                if bit:
                    signs = signs * (1 - 2 * ((indices >> (g.n - 1 - j)) & 1))
        psi = signs.astype(complex) / math.sqrt(dim)
        logger.debug(f"Built graph state on {g.n} qubits with {len(g.edges)} edges")
        return _pure(psi, g.n)

    def build_ghz_state(self, n: int) -> DensityMatrix:
        """(|0...0> + |1...1>)/sqrt(2)."""
        self._check_size(n)
        psi = np.zeros(2 ** n, dtype=complex)
        psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
        return _pure(psi, n)

    def random_density_matrix(self, n: int, rng: np.random.Generator) -> DensityMatrix:
        """Full-rank Ginibre state."""
        self._check_size(n)
        dim = 2 ** n
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = g @ g.conj().T
        return DensityMatrix(n=n, entries=rho / np.trace(rho).real)

    # ---------------------------------------------------------------
    # Operations
    # ---------------------------------------------------------------

    def apply_unitary(self, rho: DensityMatrix, U: np.ndarray, sites: Sequence[int]) -> DensityMatrix:
        for s in sites:
            if not 0 <= s < rho.n:
                raise DomainError(f"Site {s} out of range [0, {rho.n})")
        if len(set(sites)) != len(sites):
            raise DomainError(f"Repeated site in {list(sites)}")
        return DensityMatrix(n=rho.n, entries=apply_local(rho.entries, rho.n, np.asarray(U, dtype=complex), sites))

    def apply_pauli(self, rho: DensityMatrix, pauli: PauliString) -> DensityMatrix:
        """P rho P for a Pauli string on all qubits."""
        if pauli.n != rho.n:
            raise ValidationError(f"Pauli string on {pauli.n} qubits, state has {rho.n}")
        entries = rho.entries
        for site, letter in enumerate(pauli.letters):
            if letter != "I":
                entries = apply_local(entries, rho.n, PAULI_MATRICES[letter], [site])
        return DensityMatrix(n=rho.n, entries=entries)

    def expectation(self, rho: DensityMatrix, pauli: PauliString) -> float:
        if pauli.n != rho.n:
            raise ValidationError(f"Pauli string on {pauli.n} qubits, state has {rho.n}")
        t = rho.entries.reshape([2] * 2 * rho.n)
        for site, letter in enumerate(pauli.letters):
            if letter != "I":
                t = np.moveaxis(np.tensordot(PAULI_MATRICES[letter], t, axes=([1], [site])), 0, site)
        return float(np.trace(t.reshape(rho.dim, rho.dim)).real)

    def graph_basis_index(self, rho: DensityMatrix, g: Graph, tol: float = 1e-10) -> GraphBasisIndex:
        """Read mu off the correlation-operator signs; rho must be a graph-basis state of g."""
        if g.n != rho.n:
            raise ValidationError(f"Graph on {g.n} vertices, state has {rho.n} qubits")
        mu = []
        for j in range(g.n):
            value = self.expectation(rho, correlation_operator(g, j))
            if abs(abs(value) - 1.0) > tol:
                raise ValidationError(f"<K_{j}> = {value:.6g}: not a graph-basis state")
            mu.append(0 if value > 0 else 1)
        return GraphBasisIndex(tuple(mu))

    def apply_channel(self, rho: DensityMatrix,
                      chan: Union[PauliDiagonalChannel, NoiseParameter, float]) -> DensityMatrix:
        """
        Apply a Pauli-diagonal channel, or depolarizing noise of strength p
        on every qubit in turn (a NoiseParameter or a bare p).
        """
        if isinstance(chan, PauliDiagonalChannel):
            if chan.n != rho.n:
                raise ValidationError(f"Channel acts on {chan.n} qubits, state has {rho.n}")
            out = np.zeros_like(rho.entries)
            for pauli, weight in chan.terms.items():
                out += weight * self.apply_pauli(rho, pauli).entries
            return DensityMatrix(n=rho.n, entries=out)

        np_ = chan if isinstance(chan, NoiseParameter) else noise_from_p(chan)
        p = np_.p
        entries = rho.entries
        if p == 1.0:
            return DensityMatrix(n=rho.n, entries=entries.copy())
        noise = (1.0 - p) / 4.0
        for site in range(rho.n):
            out = (p + noise) * entries
            for letter in ("X", "Y", "Z"):
                out = out + noise * apply_local(entries, rho.n, PAULI_MATRICES[letter], [site])
            entries = out
        return DensityMatrix(n=rho.n, entries=entries)

    def apply_dephasing(self, rho: DensityMatrix, axis: DephasingAxis, p_j: float, site: int) -> DensityMatrix:
        """rho -> (1 + p_j)/2 rho + (1 - p_j)/2 sigma_j rho sigma_j on one site."""
        if not 0.0 <= p_j <= 1.0:
            raise DomainError(f"Dephasing parameter must lie in [0, 1], got {p_j}")
        if not 0 <= site < rho.n:
            raise DomainError(f"Site {site} out of range [0, {rho.n})")
        sigma = PAULI_MATRICES[DephasingAxis(axis).value.upper()]
        flipped = apply_local(rho.entries, rho.n, sigma, [site])
        return DensityMatrix(n=rho.n, entries=(1.0 + p_j) / 2.0 * rho.entries + (1.0 - p_j) / 2.0 * flipped)

    # ---------------------------------------------------------------
    # Partial transposes
    # ---------------------------------------------------------------

    def partial_transpose(self, rho: DensityMatrix, cut: BipartitionCut) -> np.ndarray:
        cut.validate(rho.n)
        n = rho.n
        perm = list(range(2 * n))
        for q in cut.side_b:
            perm[q], perm[n + q] = perm[n + q], perm[q]
        return rho.entries.reshape([2] * 2 * n).transpose(perm).reshape(rho.dim, rho.dim)

    def min_pt_eigenvalue(self, rho: DensityMatrix, cut: BipartitionCut) -> float:
        pt = self.partial_transpose(rho, cut)
        return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2.0)[0])

    def partition_cuts(self, partition: PartitionSpec) -> List[BipartitionCut]:
        """Every bipartition that is a union of groups, one representative per complementary pair."""
        self._check_size(partition.N)
        first, *rest = partition.labels
        cuts = []
        for size in range(1, len(rest) + 1):
            for chosen in combinations(rest, size):
                side_b = frozenset().union(*(partition.members(label) for label in chosen))
                cuts.append(BipartitionCut(side_b))
        return cuts

    # ---------------------------------------------------------------
    # Measurement reduction
    # ---------------------------------------------------------------

    def branch_states(self, rho: DensityMatrix, keep: Tuple[int, int],
                      graph: Optional[Graph] = None) -> List[Tuple[Tuple[int, ...], float, DensityMatrix]]:
        """
        Measure every qubit outside `keep` in the sigma_z basis.

        Returns (outcome, probability, corrected normalized pair state) for
        every branch of non-zero probability. With a graph, each branch gets
        the sigma_z byproduct correction of its outcome on k and l.
        """
        n = rho.n
        k, l = keep
        if k == l or not (0 <= k < n and 0 <= l < n):
            raise DomainError(f"Invalid pair {keep} for {n} qubits")
        if graph is not None and graph.n != n:
            raise ValidationError(f"Graph has {graph.n} vertices, state has {n} qubits")

        measured = [q for q in range(n) if q not in keep]
        t = rho.entries.reshape([2] * 2 * n)
        z = PAULI_MATRICES["Z"]
        branches = []
        for outcome in product((0, 1), repeat=len(measured)):
            index: List[object] = [slice(None)] * (2 * n)
            for q, s in zip(measured, outcome):
                index[q] = s
                index[n + q] = s
            block = t[tuple(index)]
            # remaining axes are (row, row, col, col) in ascending qubit order
            if k > l:
                block = block.transpose(1, 0, 3, 2)
            block = block.reshape(4, 4)
            prob = float(np.trace(block).real)
            if prob < 1e-15:
                continue
            block = block / prob
            if graph is not None:
                fix_k = sum(s for q, s in zip(measured, outcome) if q in graph.neighbors(k)) % 2
                fix_l = sum(s for q, s in zip(measured, outcome) if q in graph.neighbors(l)) % 2
                corr = np.kron(np.linalg.matrix_power(z, fix_k), np.linalg.matrix_power(z, fix_l))
                block = corr @ block @ corr.conj().T
            branches.append((outcome, prob, DensityMatrix(n=2, entries=block)))
        return branches

    def measure_and_reduce(self, rho: DensityMatrix, keep: Tuple[int, int],
                           graph: Optional[Graph] = None) -> DensityMatrix:
        """Probability-weighted average of the corrected branches."""
        out = np.zeros((4, 4), dtype=complex)
        for _, prob, branch in self.branch_states(rho, keep, graph):
            out += prob * branch.entries
        return DensityMatrix(n=2, entries=out)

    def pair_coefficients(self, rho2: DensityMatrix) -> PairCoefficients:
        """Weights of (Z^a x Z^b)|Phi> in a two-qubit state."""
        if rho2.n != 2:
            raise ValidationError(f"Pair coefficients need a two-qubit state, got {rho2.n} qubits")
        q = np.einsum("ai,ij,aj->a", _PAIR_FRAME.conj(), rho2.entries, _PAIR_FRAME).real
        return PairCoefficients.from_vector(q)

    # ---------------------------------------------------------------
    # GHZ basis
    # ---------------------------------------------------------------

    def ghz_coefficients(self, rho: DensityMatrix) -> GhzCoefficients:
        """Diagonal of rho in the basis (|0 b> +/- |1 ~b>)/sqrt(2)."""
        n = rho.n
        self._check_size(n)
        if n < 2:
            raise DomainError(f"GHZ basis needs at least 2 qubits, got {n}")
        dim = rho.dim
        half = dim // 2
        labels = []
        basis = np.zeros((dim, dim), dtype=complex)
        col = 0
        for bits in range(half):
            for sign, factor in (("+", 1.0), ("-", -1.0)):
                basis[bits, col] = 1.0 / math.sqrt(2.0)
                basis[(dim - 1) ^ bits, col] = factor / math.sqrt(2.0)
                labels.append((format(bits, f"0{n - 1}b"), sign))
                col += 1
        rotated = basis.conj().T @ rho.entries @ basis
        diag = np.diag(rotated).real
        max_offdiag = float(np.max(np.abs(rotated - np.diag(np.diag(rotated)))))
        return GhzCoefficients(n=n, values=dict(zip(labels, (float(v) for v in diag))), max_offdiag=max_offdiag)

    # ---------------------------------------------------------------
    # Channel identities
    # ---------------------------------------------------------------

    def channel_identity_check(self, np_: NoiseParameter, samples: int = 20, seed: int = 0) -> float:
        """
        Largest entrywise deviation between depolarizing at p and the x, y, z
        dephasing composition at sqrt(p) over random single-qubit states.
        """
        rng = np.random.default_rng(seed)
        root = math.sqrt(np_.p)
        worst = 0.0
        for _ in range(samples):
            rho = self.random_density_matrix(1, rng)
            expected = self.apply_channel(rho, np_)
            composed = rho
            for axis in (DephasingAxis.Z, DephasingAxis.Y, DephasingAxis.X):
                composed = self.apply_dephasing(composed, axis, root, 0)
            worst = max(worst, float(np.max(np.abs(expected.entries - composed.entries))))
        logger.debug(f"channel_identity_check p={np_.p!r}: max deviation {worst:.3e}")
        return worst

    def local_unitary_covariance(self, rho: DensityMatrix, np_: NoiseParameter, seed: int = 0) -> float:
        """Deviation between U E(rho) U^dagger and E(U rho U^dagger) for random local U on every qubit."""
        rng = np.random.default_rng(seed)
        rotated = rho
        unitaries = [unitary_group.rvs(2, random_state=rng) for _ in range(rho.n)]
        for site, U in enumerate(unitaries):
            rotated = self.apply_unitary(rotated, U, [site])
        lhs = self.apply_channel(rho, np_)
        for site, U in enumerate(unitaries):
            lhs = self.apply_unitary(lhs, U, [site])
        rhs = self.apply_channel(rotated, np_)
        return float(np.max(np.abs(lhs.entries - rhs.entries)))

    CHOI_CUT = BipartitionCut(frozenset({2, 3}))

    def choi_state(self, p_z: float) -> DensityMatrix:
        """
        Choi state of the z-dephased controlled-phase gate. Qubits are
        ordered (k, k', l, l'); k and l are the outputs.
        """
        if not 0.0 < p_z < 1.0:
            raise DomainError(f"p_z must lie in (0, 1), got {p_z}")
        bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0)
        base = _pure(np.kron(bell, bell), 4)
        cz = np.diag([1, 1, 1, -1]).astype(complex)
        base = self.apply_unitary(base, cz, [0, 2])
        rho = self.apply_dephasing(base, DephasingAxis.Z, p_z, 0)
        return self.apply_dephasing(rho, DephasingAxis.Z, p_z, 2)

    def choi_min_pt_eigenvalue(self, p_z: float) -> float:
        """Minimal eigenvalue of the Choi state transposed on (l, l')."""
        return self.min_pt_eigenvalue(self.choi_state(p_z), self.CHOI_CUT)

    def choi_pt_crossing(self, p_z_grid: Iterable[float]) -> ChoiCrossing:
        """Scan choi_min_pt_eigenvalue over a grid for the first PPT -> NPT step."""
        grid = tuple(sorted(float(p) for p in p_z_grid))
        if not grid:
            raise DomainError("Empty p_z grid")
        if any(not 0.0 < p < 1.0 for p in grid):
            raise DomainError("p_z grid must lie in (0, 1)")

        values = [self.choi_min_pt_eigenvalue(p_z) for p_z in grid]

        crossing, bracket = None, None
        for i in range(1, len(grid)):
            if values[i - 1] >= -SIGN_TOL and values[i] < -SIGN_TOL:
                bracket = (grid[i - 1], grid[i])
                crossing = (grid[i - 1] + grid[i]) / 2.0
                break
        result = ChoiCrossing(crossing=crossing, bracket=bracket, grid=grid, min_eigenvalues=tuple(values))
        if result.found:
            logger.info(f"Choi PT crossing at p_z={crossing!r} (expected {result.expected!r}, "
                        f"discrepancy {result.discrepancy:+.3e})")
        else:
            logger.warning(f"No PPT -> NPT crossing on a grid of {len(grid)} points")
        return result
