"""
Pair suite
- Dense sigma_z measurement reduction against the Z-pattern convolution
- Every corrected measurement branch gives the same pair state
- Disjoint-neighbourhood closed form against the convolution
"""

import logging
from typing import List

import numpy as np

from entlifepy.entlifeTypes import CheckResult, Graph, LatticeKind
from entlifepy.graph_core import disjoint_pair_coefficient, make_lattice, reduced_pair_state
from entlifepy.noise_model import noise_from_p
from entlifepy.oracle import DensityMatrixOracle
from entlifepy.suites.interface.suite_interface import VerificationSuite

logger = logging.getLogger("PairSuite")


class PairSuite(VerificationSuite):
    name = "pair"

    def run(self, oracle: DensityMatrixOracle) -> List[CheckResult]:
        results = []

        linear4 = make_lattice(LatticeKind.Linear, (4,))
        noiseless = oracle.measure_and_reduce(oracle.build_graph_state(linear4), (1, 2), linear4)
        results.append(self.check_close("noiseless_linear4_q00", oracle.pair_coefficients(noiseless).q00, 1.0, 1e-12))

        cases = [
            ("linear6_p0.8", make_lattice(LatticeKind.Linear, (6,)), 0.8, (2, 3)),
            ("triangle_p0.9", make_lattice(LatticeKind.Custom, [(0, 1), (1, 2), (0, 2)]), 0.9, (0, 1)),
            ("ring5_p0.7", make_lattice(LatticeKind.Ring, (5,)), 0.7, (0, 1)),
            ("star5_p0.85", make_lattice(LatticeKind.Star, (5,)), 0.85, (0, 3)),
        ]
        for label, g, p, (k, l) in cases:
            results.extend(self._compare(oracle, label, g, p, k, l))

        np_ = noise_from_p(0.8)
        linear8 = make_lattice(LatticeKind.Linear, (8,))
        results.append(self.check_close("disjoint_closed_form_linear8",
                                        reduced_pair_state(linear8, np_, 3, 4).q00,
                                        disjoint_pair_coefficient(1, 1, np_), 1e-12))
        return results

    def _compare(self, oracle: DensityMatrixOracle, label: str, g: Graph, p: float, k: int, l: int) -> List[CheckResult]:
        np_ = noise_from_p(p)
        rho = oracle.apply_channel(oracle.build_graph_state(g), np_)
        dense = oracle.pair_coefficients(oracle.measure_and_reduce(rho, (k, l), g))
        analytic = reduced_pair_state(g, np_, k, l)
        deviation = float(np.max(np.abs(np.array(dense.as_tuple()) - np.array(analytic.as_tuple()))))

        branches = oracle.branch_states(rho, (k, l), g)
        reference = branches[0][2].entries
        spread = max(float(np.max(np.abs(b.entries - reference))) for _, _, b in branches)
        logger.debug(f"{label}: {len(branches)} branches, deviation {deviation:.3e}, spread {spread:.3e}")

        return [
            self.check_close(f"{label}_reduction", deviation, 0.0, 1e-10),
            self.check_close(f"{label}_branch_invariance", spread, 0.0, 1e-10),
        ]
