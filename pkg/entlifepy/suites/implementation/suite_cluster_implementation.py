"""
Cluster suite
- Graph states are stabilized by their correlation operators
- Pauli conjugation equals conjugation by the Z-pattern product
- Z-patterns flip the graph-basis label on their support
- Star graph PT signs agree with the GHZ analysis for n = 3..ENTLIFE_SUITE_MAX_N
"""

import logging
from typing import List, Optional

import numpy as np

from entlifepy import config
from entlifepy.entlifeTypes import (
    BipartitionCut, CheckResult, Graph, GraphBasisIndex, LatticeKind, PauliLetter, PauliString,
)
from entlifepy.ghz_analysis import ppt_positive
from entlifepy.graph_core import correlation_operator, make_lattice, pauli_to_zpattern
from entlifepy.noise_model import noise_from_p
from entlifepy.oracle import SIGN_TOL, DensityMatrixOracle
from entlifepy.suites.interface.suite_interface import VerificationSuite

logger = logging.getLogger("ClusterSuite")


def zpattern_string(n: int, support) -> PauliString:
    return PauliString("".join("Z" if v in support else "I" for v in range(n)))


class ClusterSuite(VerificationSuite):
    name = "cluster"

    def __init__(self, max_star: Optional[int] = None):
        self.max_star = config.SUITE_MAX_N if max_star is None else max_star

    def run(self, oracle: DensityMatrixOracle) -> List[CheckResult]:
        results = []
        graphs = {
            "linear4": make_lattice(LatticeKind.Linear, (4,)),
            "star4": make_lattice(LatticeKind.Star, (4,)),
            "ring5": make_lattice(LatticeKind.Ring, (5,)),
        }
        for label, g in graphs.items():
            rho = oracle.build_graph_state(g)
            worst = max(abs(oracle.expectation(rho, correlation_operator(g, j)) - 1.0) for j in range(g.n))
            results.append(self.check_close(f"{label}_stabilizers", worst, 0.0, 1e-12))

            purity = float(np.trace(rho.entries @ rho.entries).real)
            results.append(self.check_close(f"{label}_purity", purity, 1.0, 1e-12))

            worst = 0.0
            for j in range(g.n):
                for letter in PauliLetter:
                    direct = oracle.apply_pauli(rho, PauliString.single(g.n, j, letter))
                    pattern = pauli_to_zpattern(g, j, letter)
                    via_z = oracle.apply_pauli(rho, zpattern_string(g.n, pattern.support))
                    worst = max(worst, float(np.max(np.abs(direct.entries - via_z.entries))))
            results.append(self.check_close(f"{label}_zpattern_conjugation", worst, 0.0, 1e-12))
            results.append(self._basis_flips(oracle, label, g))

        single_edge = oracle.build_graph_state(make_lattice(LatticeKind.Linear, (2,)))
        results.append(self.check_close("single_edge_min_pt",
                                        oracle.min_pt_eigenvalue(single_edge, BipartitionCut(frozenset({1}))),
                                        -0.5, 1e-12))

        results.append(self._star_pt_signs(oracle))
        return results

    def _star_pt_signs(self, oracle: DensityMatrixOracle) -> CheckResult:
        mismatches = 0
        for n in range(3, min(self.max_star, oracle.max_qubits) + 1):
            star = oracle.build_graph_state(make_lattice(LatticeKind.Star, (n,)))
            for p in (0.2, 0.5, 0.65, 0.8, 0.95):
                np_ = noise_from_p(p)
                rho = oracle.apply_channel(star, np_)
                expected = ppt_positive(n, np_, 1)
                for vertex in (0, n - 1):
                    dense = oracle.min_pt_eigenvalue(rho, BipartitionCut(frozenset({vertex}))) >= -SIGN_TOL
                    if dense != expected:
                        mismatches += 1
                        logger.warning(f"Star PT sign mismatch: n={n}, p={p}, vertex={vertex}")
        return self.check_close("star_single_vertex_pt_mismatches", mismatches, 0, 0)

    def _basis_flips(self, oracle: DensityMatrixOracle, label: str, g: Graph) -> CheckResult:
        start = GraphBasisIndex(tuple(j % 2 for j in range(g.n)))
        shifted = oracle.build_graph_state(g, start)
        mismatches = 0
        for j in range(g.n):
            for letter in PauliLetter:
                flipped = oracle.apply_pauli(shifted, PauliString.single(g.n, j, letter))
                expected = start.flipped(pauli_to_zpattern(g, j, letter))
                if oracle.graph_basis_index(flipped, g) != expected:
                    mismatches += 1
                    logger.warning(f"{label}: {letter.value} on vertex {j} did not flip {expected.mu}")
        return self.check_close(f"{label}_basis_flips", mismatches, 0, 0)
