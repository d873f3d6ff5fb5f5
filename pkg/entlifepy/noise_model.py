"""
Noise strength, Pauli-diagonal channels and the dephasing decomposition of
the single-qubit depolarizing channel

    E(rho) = p rho + (1 - p)/4 sum_{j=0..3} sigma_j rho sigma_j,   p = exp(-kappa t).
"""

import json
import logging
import math
from typing import Dict, Iterable, List, Tuple

from common.calculations import round_significant
from common.parser import ChannelJsonParser
from common.utils import require_finite_nonnegative, validate_weighted_terms

from .entlifeTypes import (
    WEIGHT_TOL, DephasingAxis, DephasingDecomposition, NoiseParameter,
    PauliDiagonalChannel, PauliLetter, PauliString,
)
from .errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

# (x, z) symplectic bits of each letter; products drop the phase.
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

# Smallest survival parameter accepted from user input (p = 0 is infinite time).
P_FLOOR = 1e-12


def noise_from_time(kappa_t: float) -> NoiseParameter:
    """NoiseParameter for a dimensionless time kappa_t >= 0."""
    error = require_finite_nonnegative("kappa_t", kappa_t)
    if error:
        raise DomainError(error)
    kappa_t = float(kappa_t) + 0.0
    p = math.exp(-kappa_t)
    if p == 0.0:
        raise DomainError(f"kappa_t={kappa_t} underflows the survival parameter to 0")
    return NoiseParameter(p=p, kappa_t=kappa_t)


def noise_from_p(p: float) -> NoiseParameter:
    """NoiseParameter for a survival parameter p in (0, 1]."""
    if not math.isfinite(p) or not 0.0 < p <= 1.0:
        raise DomainError(f"Survival parameter p must lie in (0, 1], got {p!r}")
    return NoiseParameter(p=float(p), kappa_t=max(0.0, -math.log(p)))


def dephasing_decomposition(np_: NoiseParameter) -> DephasingDecomposition:
    """x-, y-, z-dephasing parameters (all sqrt(p)) whose composition is depolarizing at p."""
    root = math.sqrt(np_.p)
    return DephasingDecomposition(p_x=root, p_y=root, p_z=root)


def normalize_channel(raw_terms: Iterable[Tuple[PauliString, float]]) -> PauliDiagonalChannel:
    """Merge duplicate Pauli strings, rescale to unit sum and prune weights below 1e-12."""
    raw_terms = list(raw_terms)
    error = validate_weighted_terms(raw_terms, (pauli.n for pauli, _ in raw_terms))
    if error:
        raise ValidationError(error)

    merged: Dict[PauliString, float] = {}
    for pauli, weight in raw_terms:
        merged[pauli] = merged.get(pauli, 0.0) + float(weight)

    total = math.fsum(merged.values())
    kept = {pauli: w / total for pauli, w in merged.items() if w / total >= WEIGHT_TOL}
    pruned = len(merged) - len(kept)
    if pruned:
        logger.debug(f"normalize_channel: pruned {pruned} terms below {WEIGHT_TOL}")
        total = math.fsum(kept.values())
        kept = {pauli: w / total for pauli, w in kept.items()}

    n = raw_terms[0][0].n
    return PauliDiagonalChannel(n=n, terms=kept)


def depolarizing_channel(np_: NoiseParameter, n: int = 1, site: int = 0) -> PauliDiagonalChannel:
    """Depolarizing noise `np_` acting on `site` of an n-qubit register."""
    noise = (1.0 - np_.p) / 4.0
    return normalize_channel([
        (PauliString.identity(n), np_.p + noise),
        (PauliString.single(n, site, PauliLetter.X), noise),
        (PauliString.single(n, site, PauliLetter.Y), noise),
        (PauliString.single(n, site, PauliLetter.Z), noise),
    ])


def dephasing_channel(axis: DephasingAxis, p_j: float, n: int = 1, site: int = 0) -> PauliDiagonalChannel:
    """rho -> p_j rho + (1 - p_j)/2 [rho + sigma_j rho sigma_j] on `site`."""
    if not 0.0 <= p_j <= 1.0:
        raise DomainError(f"Dephasing parameter must lie in [0, 1], got {p_j}")
    letter = PauliLetter(axis.value.upper())
    return normalize_channel([
        (PauliString.identity(n), (1.0 + p_j) / 2.0),
        (PauliString.single(n, site, letter), (1.0 - p_j) / 2.0),
    ])


def multiply_paulis(a: PauliString, b: PauliString) -> PauliString:
    """Product a*b up to a phase."""
    if a.n != b.n:
        raise ValidationError(f"Cannot multiply Pauli strings on {a.n} and {b.n} qubits")
    letters = []
    for la, lb in zip(a.letters, b.letters):
        xa, za = _LETTER_BITS[la]
        xb, zb = _LETTER_BITS[lb]
        letters.append(_BITS_LETTER[(xa ^ xb, za ^ zb)])
    return PauliString("".join(letters))


def compose_channels(first: PauliDiagonalChannel, second: PauliDiagonalChannel) -> PauliDiagonalChannel:
    """Channel `second` after `first`; Pauli channels compose by convolution over the Pauli group."""
    if first.n != second.n:
        raise ValidationError(f"Cannot compose channels on {first.n} and {second.n} qubits")
    terms: List[Tuple[PauliString, float]] = []
    for pa, wa in first.terms.items():
        for pb, wb in second.terms.items():
            terms.append((multiply_paulis(pa, pb), wa * wb))
    return normalize_channel(terms)


def depolarizing_from_dephasing(decomp: DephasingDecomposition) -> PauliDiagonalChannel:
    """Single-qubit composition E_x(p_x) E_y(p_y) E_z(p_z)."""
    chan = dephasing_channel(DephasingAxis.Z, decomp.p_z)
    chan = compose_channels(chan, dephasing_channel(DephasingAxis.Y, decomp.p_y))
    return compose_channels(chan, dephasing_channel(DephasingAxis.X, decomp.p_x))


def channel_to_json(chan: PauliDiagonalChannel) -> str:
    terms = [
        {"pauli": str(pauli), "w": round_significant(weight)}
        for pauli, weight in sorted(chan.terms.items(), key=lambda kv: kv[0].letters)
    ]
    return json.dumps({"n": chan.n, "terms": terms})


def channel_from_json(text: str) -> PauliDiagonalChannel:
    n, raw_terms = ChannelJsonParser().parse(text)
    if any(pauli.n != n for pauli, _ in raw_terms):
        raise ValidationError(f"channel declares n={n} but contains strings of another length")
    return normalize_channel(raw_terms)


def clamped_noise_from_p(p: float, floor: float = P_FLOOR) -> Tuple[NoiseParameter, bool]:
    """NoiseParameter with p raised to `floor` when smaller; the flag reports the clamp."""
    if math.isfinite(p) and 0.0 <= p < floor:
        logger.warning(f"p={p!r} clamped to {floor!r}")
        return noise_from_p(floor), True
    return noise_from_p(p), False


def clamped_noise_from_time(kappa_t: float, floor: float = P_FLOOR) -> Tuple[NoiseParameter, bool]:
    """As clamped_noise_from_p, for a time request."""
    error = require_finite_nonnegative("kappa_t", kappa_t)
    if error:
        raise DomainError(error)
    if kappa_t > -math.log(floor):
        logger.warning(f"kappa_t={kappa_t!r} clamped to {-math.log(floor)!r} (p >= {floor!r})")
        return noise_from_p(floor), True
    return noise_from_time(kappa_t), False
