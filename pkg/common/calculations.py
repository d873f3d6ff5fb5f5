# common/calculations.py
import logging
import math
from typing import Callable

from scipy import optimize

from entlifepy.errors import NumericError

logger = logging.getLogger(__name__)

# Closeness to an integer below which a ratio is treated as that integer.
INTEGER_SNAP_TOL = 1e-9

# Final bracket width after Brent refinement of a bisection root.
POLISH_XTOL = 1e-15


def _opposite(a: float, b: float) -> bool:
    return (a > 0) != (b > 0)


def bisect_root(fn: Callable[[float], float], lo: float, hi: float,
                xtol: float = 1e-12, label: str = "root", polish: bool = True) -> float:
    """
    Bisection for a sign change of fn on [lo, hi]; raises NumericError without one.

    With polish, the xtol-wide bracket left by bisection is refined by Brent's
    method down to POLISH_XTOL, so printed digits are not limited by xtol.
    """
    f_lo, f_hi = fn(lo), fn(hi)
    if math.isnan(f_lo) or math.isnan(f_hi):
        raise NumericError(f"{label}: function undefined at bracket ends", (lo, hi))
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not _opposite(f_lo, f_hi):
        raise NumericError(f"{label}: no sign change ({f_lo:.3e}, {f_hi:.3e})", (lo, hi))
    root = float(optimize.bisect(fn, lo, hi, xtol=xtol, maxiter=200))

    if polish:
        a, b = max(lo, root - 2.0 * xtol), min(hi, root + 2.0 * xtol)
        f_a, f_b = fn(a), fn(b)
        if f_a == 0.0 or f_b == 0.0:
            root = a if f_a == 0.0 else b
        elif _opposite(f_a, f_b):
            root = float(optimize.brentq(fn, a, b, xtol=POLISH_XTOL, maxiter=100))

    logger.debug(f"{label}: root {root!r} in [{lo}, {hi}]")
    return root


def log1mexp(x: float) -> float:
    """ln(1 - e^x) for x <= 0, accurate on both sides of -ln 2."""
    if x > 0:
        raise ValueError(f"log1mexp needs x <= 0, got {x}")
    if x == 0.0:
        return -math.inf
    if x > -math.log(2.0):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


def ceil_snapped(x: float, tol: float = INTEGER_SNAP_TOL) -> int:
    """Smallest integer >= x, treating values within tol of an integer as that integer."""
    nearest = round(x)
    if abs(x - nearest) <= tol:
        return int(nearest)
    return math.ceil(x)


def floor_snapped(x: float, tol: float = INTEGER_SNAP_TOL) -> int:
    """Largest integer <= x, treating values within tol of an integer as that integer."""
    nearest = round(x)
    if abs(x - nearest) <= tol:
        return int(nearest)
    return math.floor(x)


def format_number(value, digits: int = 12) -> str:
    """Render a cell: ints verbatim, floats with `digits` significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, f"#.{digits}g")
    return str(value)


def round_significant(value: float, digits: int = 12) -> float:
    """Float rounded to `digits` significant digits (the value format_number prints)."""
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(format(value, f".{digits}g"))
