"""
GHZ suite
- Depolarized GHZ coefficients against the closed-form spectrum
- Partial-transpose signs against ppt_positive for N = 2..ENTLIFE_SUITE_MAX_N (default 8)
- Depolarizing = x/y/z dephasing composition
"""

import logging
import math
from typing import List, Optional

import numpy as np

from entlifepy import config
from entlifepy.entlifeTypes import BipartitionCut, CheckResult, LatticeKind
from entlifepy.ghz_analysis import ghz_spectrum, group_lifetime, log_lambda, ppt_positive
from entlifepy.graph_core import make_lattice
from entlifepy.noise_model import noise_from_p
from entlifepy.oracle import HADAMARD, SIGN_TOL, DensityMatrixOracle
from entlifepy.suites.interface.suite_interface import VerificationSuite

logger = logging.getLogger("GhzSuite")

# PT signs are not compared this close to the analytic boundary.
BOUNDARY_SKIP = 1e-8


def ghz_from_star(oracle: DensityMatrixOracle, n: int):
    """Star graph state with Hadamards on the leaves (equal to the GHZ state)."""
    rho = oracle.build_graph_state(make_lattice(LatticeKind.Star, (n,)))
    for leaf in range(1, n):
        rho = oracle.apply_unitary(rho, HADAMARD, [leaf])
    return rho


class GhzSuite(VerificationSuite):
    name = "ghz"

    def __init__(self, max_n: Optional[int] = None, grid_points: int = 50):
        self.max_n = config.SUITE_MAX_N if max_n is None else max_n
        self.grid_points = grid_points

    def run(self, oracle: DensityMatrixOracle) -> List[CheckResult]:
        results = []

        star = ghz_from_star(oracle, 3)
        ghz = oracle.build_ghz_state(3)
        results.append(self.check_close("star_with_hadamards_is_ghz",
                                        float(np.max(np.abs(star.entries - ghz.entries))), 0.0, 1e-12))

        np_ = noise_from_p(0.5)
        coeffs = oracle.ghz_coefficients(oracle.apply_channel(ghz, np_))
        spectrum = ghz_spectrum(3, np_)
        results.append(self.check_close("ghz3_lambda1", max(coeffs.by_weight(1, "+") + coeffs.by_weight(1, "-")),
                                        spectrum.lambda_k(1), 1e-12))
        results.append(self.check_close("ghz3_lambda0_plus", coeffs.values[("00", "+")], spectrum.lambda0_plus, 1e-12))
        results.append(self.check_close("ghz3_lambda0_minus", coeffs.values[("00", "-")], spectrum.lambda0_minus, 1e-12))
        results.append(self.check_close("ghz3_offdiagonal", coeffs.max_offdiag, 0.0, 1e-12))
        results.append(self.check_close("ghz3_normalization", math.fsum(coeffs.values.values()), 1.0, 1e-12))

        boundary = group_lifetime(2, 1)
        rho2 = oracle.apply_channel(oracle.build_ghz_state(2), noise_from_p(boundary.p))
        results.append(self.check_close("ghz2_boundary_min_pt",
                                        oracle.min_pt_eigenvalue(rho2, BipartitionCut(frozenset({1}))), 0.0, 1e-10))

        results.append(self._pt_sign_agreement(oracle))
        results.append(self.check_close("depolarizing_equals_dephasing_composition",
                                        oracle.channel_identity_check(noise_from_p(0.37)), 0.0, 1e-12))
        return results

    def _pt_sign_agreement(self, oracle: DensityMatrixOracle) -> CheckResult:
        mismatches = compared = 0
        top = min(self.max_n, oracle.max_qubits)
        for N in range(2, top + 1):
            ghz = oracle.build_ghz_state(N)
            for p in np.linspace(0.02, 0.98, self.grid_points):
                np_ = noise_from_p(float(p))
                rho = oracle.apply_channel(ghz, np_)
                for k in range(1, N // 2 + 1):
                    margin = 2.0 * math.exp(float(log_lambda(N, np_.p, k))) - np_.p ** N
                    if abs(margin) < BOUNDARY_SKIP:
                        continue
                    dense = oracle.min_pt_eigenvalue(rho, BipartitionCut(frozenset(range(k)))) >= -SIGN_TOL
                    compared += 1
                    if dense != ppt_positive(N, np_, k):
                        mismatches += 1
                        logger.warning(f"PT sign mismatch at N={N}, k={k}, p={np_.p!r}")
        logger.info(f"PT sign agreement: {compared - mismatches}/{compared}")
        return self.check_close("ppt_sign_agreement_mismatches", mismatches, 0, 0)
