"""
Verification suites run by `entlifepy oracle verify`.

Each suite recomputes analytic results with the dense oracle and returns
CheckResult rows; the CLI turns failed checks into exit code 2.
"""

from typing import Dict, Type

from entlifepy.entlifeTypes import SuiteName
from entlifepy.errors import ValidationError

from .implementation.suite_choi_implementation import ChoiSuite
from .implementation.suite_cluster_implementation import ClusterSuite
from .implementation.suite_ghz_implementation import GhzSuite
from .implementation.suite_pair_implementation import PairSuite
from .interface.suite_interface import VerificationSuite

SUITES: Dict[SuiteName, Type[VerificationSuite]] = {
    SuiteName.Ghz: GhzSuite,
    SuiteName.Cluster: ClusterSuite,
    SuiteName.Pair: PairSuite,
    SuiteName.Choi: ChoiSuite,
}


def get_suite(name) -> VerificationSuite:
    try:
        return SUITES[SuiteName(name)]()
    except ValueError as e:
        raise ValidationError(f"Unknown suite {name!r}; choose from {[s.value for s in SuiteName]}") from e
