"""
Choi suite
- PT sign of the z-dephased controlled-phase Choi state on a fine p_z grid
- Crossing reported against sqrt(2) - 1
"""

import logging
from typing import List

import numpy as np

from entlifepy.entlifeTypes import CheckResult
from entlifepy.oracle import SIGN_TOL, DensityMatrixOracle
from entlifepy.suites.interface.suite_interface import VerificationSuite

logger = logging.getLogger("ChoiSuite")


class ChoiSuite(VerificationSuite):
    name = "choi"

    def __init__(self, step: float = 1e-3):
        self.step = step

    def run(self, oracle: DensityMatrixOracle) -> List[CheckResult]:
        grid = np.linspace(self.step, 1.0 - self.step, int(round(1.0 / self.step)) - 1)
        scan = oracle.choi_pt_crossing(grid)
        results = []

        results.append(self.check_at_least("choi_ppt_at_0.1", oracle.choi_min_pt_eigenvalue(0.1), 0.0, SIGN_TOL))
        results.append(self.check_below("choi_npt_near_1", scan.min_eigenvalues[-1], 0.0, SIGN_TOL))

        if not scan.found:
            logger.warning("Choi scan found no crossing")
            results.append(CheckResult(name="choi_crossing", observed=float("nan"), expected=scan.expected,
                                       tolerance=self.step, passed=False))
            return results

        logger.info(f"Choi crossing {scan.crossing!r}, bracket {scan.bracket}, discrepancy {scan.discrepancy:+.3e}")
        results.append(self.check_close("choi_crossing", scan.crossing, scan.expected, self.step))
        results.append(CheckResult(name="choi_crossing_in_window", observed=scan.crossing, expected=0.415,
                                   tolerance=0.015, passed=0.40 <= scan.crossing <= 0.43))
        return results
