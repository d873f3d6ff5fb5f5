from abc import ABC, abstractmethod
from typing import List

from entlifepy.entlifeTypes import CheckResult
from entlifepy.oracle import DensityMatrixOracle


class VerificationSuite(ABC):
    """
    Abstract base class for oracle verification suites.

    The CLI handles: oracle construction, result tables and exit codes.

    Suites only define: which analytic results are recomputed densely and
    the tolerance each comparison gets.
    """

    name: str = "suite"

    @abstractmethod
    def run(self, oracle: DensityMatrixOracle) -> List[CheckResult]:
        """Run every check of the suite. Failed checks are returned, not raised."""
        pass

    @staticmethod
    def check_close(name: str, observed: float, expected: float, tolerance: float) -> CheckResult:
        return CheckResult(name=name, observed=float(observed), expected=float(expected),
                           tolerance=tolerance, passed=abs(observed - expected) <= tolerance)

    @staticmethod
    def check_at_least(name: str, observed: float, bound: float, tolerance: float) -> CheckResult:
        return CheckResult(name=name, observed=float(observed), expected=float(bound),
                           tolerance=tolerance, passed=observed >= bound - tolerance)

    @staticmethod
    def check_below(name: str, observed: float, bound: float, tolerance: float = 0.0) -> CheckResult:
        return CheckResult(name=name, observed=float(observed), expected=float(bound),
                           tolerance=tolerance, passed=observed < bound - tolerance)
