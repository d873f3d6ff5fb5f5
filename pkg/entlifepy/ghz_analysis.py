"""
GHZ states under independent depolarizing noise.

A depolarized GHZ state stays diagonal in the GHZ basis with coefficients

    lambda_k = [(1+p)^k (1-p)^(N-k) + (1+p)^(N-k) (1-p)^k] / 2^(N+1),   k != 0
    lambda_0^(+/-) = lambda_0 +/- p^N / 2

and its partial transpose with respect to a group of k particles is positive
iff p^N <= 2 lambda_k. All lambda arithmetic is done in the natural-log
domain so that macroscopic N (10^6 and beyond) neither under- nor overflows.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py

from common.calculations import bisect_root, ceil_snapped, floor_snapped, log1mexp
from common.utils import ordered_map

from .entlifeTypes import GhzSpectrum, MBound, NoiseParameter, PartitionSpec, Threshold
from .errors import DomainError

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

# Every threshold function is monotone in p on this bracket.
P_BRACKET = (1e-6, 1.0 - 1e-12)
P_XTOL = 1e-12

# Equality in p^N <= 2 lambda_k counts as positive; this absorbs log-domain round-off.
PPT_LOG_TOL = 1e-12

# ln(p^N / 2) - ln(lambda_0) closer to zero than this many ulps of (N+1) ln 2 is zero.
SPECTRUM_SNAP_ULPS = 4


def _check_n(N: int) -> None:
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise DomainError(f"GHZ analysis needs N >= 2 particles, got {N!r}")


def log_lambda(N: int, p: float, k):
    """ln lambda_k, vectorized over k; -inf where lambda_k vanishes (p = 1)."""
    k = np.asarray(k, dtype=float)
    log_plus = math.log1p(p)
    first = k * log_plus + xlog1py(N - k, -p)
    second = (N - k) * log_plus + xlog1py(k, -p)
    return np.logaddexp(first, second) - (N + 1) * LN2


def ghz_spectrum(N: int, np_: NoiseParameter) -> GhzSpectrum:
    """GHZ-basis coefficients for N particles at noise np_."""
    _check_n(N)
    p = np_.p
    table = log_lambda(N, p, np.arange(N))
    log_l0 = float(table[0])
    log_half_pn = N * math.log(p) - LN2

    if p == 1.0:
        return GhzSpectrum(N=N, p=p, log_lambda=table,
                           log_lambda0_plus=0.0, log_lambda0_minus=-math.inf)

    log_plus = min(float(np.logaddexp(log_l0, log_half_pn)), 0.0)
    # lambda_0 >= p^N / 2 always; gaps within round-off of the log terms are zero
    gap = log_half_pn - log_l0
    if gap > -SPECTRUM_SNAP_ULPS * (N + 1) * np.finfo(float).eps:
        log_minus = -math.inf
    else:
        log_minus = log_l0 + log1mexp(gap)

    return GhzSpectrum(N=N, p=p, log_lambda=table,
                       log_lambda0_plus=log_plus, log_lambda0_minus=log_minus)


def spectrum_normalization(spectrum: GhzSpectrum) -> float:
    """Log-domain sum of C(N-1,k) * 2 lambda_k with the k = 0 term split into lambda_0^(+/-)."""
    N = spectrum.N
    k = np.arange(N, dtype=float)
    log_binom = gammaln(N) - gammaln(k + 1) - gammaln(N - k)
    terms = log_binom + LN2 + spectrum.log_lambda
    terms[0] = float(np.logaddexp(spectrum.log_lambda0_plus, spectrum.log_lambda0_minus))
    return float(np.expm1(logsumexp(terms)))


def ppt_positive(N: int, np_: NoiseParameter, k: int) -> bool:
    """Whether the partial transpose w.r.t. a group of k particles is positive (p^N <= 2 lambda_k)."""
    _check_n(N)
    if not 1 <= k <= N - 1:
        raise DomainError(f"Group size k={k} outside 1..{N - 1}")
    lhs = N * math.log(np_.p)
    rhs = LN2 + float(log_lambda(N, np_.p, k))
    return lhs - rhs <= PPT_LOG_TOL


def _ppt_margin(N: int, m: int):
    def margin(p: float) -> float:
        return N * math.log(p) - LN2 - float(log_lambda(N, p, m))
    return margin


def group_lifetime(N: int, m: int) -> Threshold:
    """
    Noise level at which the partial transpose w.r.t. a group of m particles
    turns positive. For m = 1 this is the lifetime of genuine N-party
    distillable entanglement.
    """
    _check_n(N)
    if not 1 <= m <= N // 2:
        raise DomainError(f"Smallest group size m={m} outside 1..{N // 2}")
    p_crit = bisect_root(_ppt_margin(N, m), *P_BRACKET, xtol=P_XTOL, label=f"group_lifetime(N={N}, m={m})")
    logger.debug(f"group_lifetime N={N} m={m}: p_crit={p_crit!r}")
    return Threshold(p=p_crit, kappa_t=-math.log(p_crit))


def _tanh_half(np_: NoiseParameter) -> float:
    # (1 - p)/(1 + p) without cancellation near p = 1
    return math.tanh(np_.kappa_t / 2.0)


def _upper_ratio(t: float) -> float:
    return math.log(t) / math.log1p(-t)


def _lower_ratio(t: float) -> float:
    return (LN2 + math.log(t)) / math.log1p(-t)


def upper_bound_M(np_: NoiseParameter):
    """
    Smallest number of (equal-size) groups M >= 2 that certainly no longer
    share M-party entanglement; math.inf for the noiseless state.
    Independent of N.
    """
    if np_.p == 1.0:
        return math.inf
    t = _tanh_half(np_)
    if t >= 1.0:
        return 2
    return max(2, ceil_snapped(_upper_ratio(t)))


def upper_bound_lifetime(M: int) -> float:
    """kappa_tau beyond which M-party entanglement is certainly gone."""
    if M < 2:
        raise DomainError(f"M-party lifetime needs M >= 2, got {M}")

    def excess(p: float) -> float:
        return _upper_ratio((1.0 - p) / (1.0 + p)) - M

    p = bisect_root(excess, *P_BRACKET, xtol=P_XTOL, label=f"upper_bound_lifetime(M={M})")
    return -math.log(p)


def lower_bound_M(np_: NoiseParameter) -> MBound:
    """
    Largest M for which every partial transpose of the equal-size M-partition
    is certainly non-positive (hence M-party distillable). A bound below 2
    carries no guarantee and is reported as MBound(1, guaranteed=False).
    """
    if np_.p == 1.0:
        return MBound(value=math.inf, guaranteed=True)
    t = _tanh_half(np_)
    if 2.0 * t >= 1.0:
        return MBound(value=1, guaranteed=False)
    M = floor_snapped(_lower_ratio(t))
    if M < 2:
        return MBound(value=1, guaranteed=False)
    return MBound(value=M, guaranteed=True)


def lower_bound_lifetime(M: int) -> float:
    """kappa_t below which the equal-size M-partition is certainly M-party distillable."""
    if M < 2:
        raise DomainError(f"M-party lifetime needs M >= 2, got {M}")

    def excess(p: float) -> float:
        return _lower_ratio((1.0 - p) / (1.0 + p)) - M

    p = bisect_root(excess, *P_BRACKET, xtol=P_XTOL, label=f"lower_bound_lifetime(M={M})")
    return -math.log(p)


def asymptotic_M(kappa_t: float) -> float:
    """Small-time asymptote M ~ -2 ln(kappa_t) / kappa_t of the upper bound."""
    if not 0.0 < kappa_t < 1.0:
        raise DomainError(f"Asymptote only valid for 0 < kappa_t < 1, got {kappa_t}")
    return -2.0 * math.log(kappa_t) / kappa_t


def full_separability_time() -> float:
    """kappa_t after which all partial transposes are positive (1/2 ln 5)."""
    return upper_bound_lifetime(2)


def equal_partition(N: int, M: int) -> PartitionSpec:
    """Contiguous partition of N particles into M groups whose sizes differ by at most one."""
    if not 1 <= M <= N:
        raise DomainError(f"Cannot split {N} particles into {M} non-empty groups")
    return PartitionSpec(N=N, groups=tuple(i * M // N for i in range(N)))


def partition_lifetime(partition: PartitionSpec) -> Threshold:
    """Lifetime of M-party distillability for a partition; the smallest group governs."""
    if partition.M < 2:
        raise DomainError("A single group carries no multiparty entanglement")
    m = partition.min_group_size
    return group_lifetime(partition.N, min(m, partition.N - m))


def lifetime_scan(Ms: Sequence[int], workers: int = 1) -> List[Tuple[int, float]]:
    """(M, kappa_tau_M) rows of the upper-bound lifetime curve, in input order."""
    Ms = list(Ms)
    logger.info(f"Scanning M-party lifetime for {len(Ms)} values of M")
    values = ordered_map(upper_bound_lifetime, Ms, workers)
    return list(zip(Ms, values))


def nparty_scan(Ns: Sequence[int], workers: int = 1) -> List[Tuple[int, float, float]]:
    """(N, p_crit, kappa_tau_N) rows for genuine N-party entanglement, in input order."""
    Ns = list(Ns)
    logger.info(f"Scanning N-party lifetime for {len(Ns)} values of N")
    values = ordered_map(lambda N: group_lifetime(N, 1), Ns, workers)
    return [(N, th.p, th.kappa_t) for N, th in zip(Ns, values)]

