"""
Shared validation and scan helpers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def validate_weighted_terms(terms: Sequence[Tuple[object, float]], sizes: Iterable[int]) -> str | None:
    """
    Validates (item, weight) pairs before they are merged into a distribution.

    Returns None if valid, or a formatted error string listing every problem.
    The caller raises with that message.
    """
    validation_errors = []
    sizes = list(sizes)

    if not terms:
        validation_errors.append("no terms given")
    for item, weight in terms:
        if not math.isfinite(weight):
            validation_errors.append(f"non-finite weight {weight!r} for '{item}'")
        elif weight < 0:
            validation_errors.append(f"negative weight {weight!r} for '{item}'")
    if len(set(sizes)) > 1:
        validation_errors.append(f"inconsistent qubit counts {sorted(set(sizes))}")
    if terms and not validation_errors and math.fsum(w for _, w in terms) <= 0:
        validation_errors.append("weights sum to zero")

    if not validation_errors:
        return None

    error_msg = "Invalid weighted terms:\n"
    for err in validation_errors:
        error_msg += f"   • {err}\n"
    return error_msg.rstrip("\n")


def require_finite_nonnegative(name: str, value: float) -> str | None:
    """Returns an error string when value is negative or not finite."""
    if not math.isfinite(value):
        return f"{name} must be finite, got {value!r}"
    if value < 0:
        return f"{name} must be non-negative, got {value!r}"
    return None


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Apply fn to every item, optionally on a thread pool; results keep input order."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
