import logging
import math
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from idlattice.exceptions import DomainError, MassExceedsOne, NegativeWeight
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)

Weights = Union[Sequence[float], np.ndarray]


class Pmf:
    """
    Probability mass function on {0, 1, ..., truncation}, stored together with an upper bound on the mass that lies
    beyond the truncation. Instances are immutable; the probability array is read-only.
    """
    def __init__(self, probs: Weights, tail_bound: float = 0.0, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
        probs = np.array(probs, dtype=float).ravel()
        if probs.size == 0:
            raise DomainError('A pmf must store at least the mass at 0')
        if not np.all(np.isfinite(probs)):
            raise DomainError('Probabilities must be finite')
        if np.any(probs < -tol.eps_neg):
            i = int(np.argmin(probs))
            raise NegativeWeight(f'Negative mass {probs[i]:.3e} at index {i} (tolerance {tol.eps_neg:.1e})')
        n_dust = int(np.count_nonzero(probs < 0.0))
        if n_dust > 0:
            logger.debug('Clamping %d negative value(s) above -%.1e to zero', n_dust, tol.eps_neg)
            probs[probs < 0.0] = 0.0
        tail_bound = float(tail_bound)
        if not np.isfinite(tail_bound) or tail_bound < -tol.eps_neg:
            raise DomainError(f'Invalid tail bound: {tail_bound}')
        probs.setflags(write=False)
        self._probs = probs
        self._tail_bound = min(max(tail_bound, 0.0), 1.0)

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def truncation(self) -> int:
        return self._probs.size - 1

    @property
    def tail_bound(self) -> float:
        return self._tail_bound

    def stored_mass(self) -> float:
        return math.fsum(self._probs)

    def mass(self, i: int) -> float:
        # Mass at i, zero beyond the stored indices
        return float(self._probs[i]) if 0 <= i <= self.truncation else 0.0

    def is_normalized(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return abs(self.stored_mass() + self._tail_bound - 1.0) <= tol.eps_mass

    def truncated(self, truncation: int) -> 'Pmf':
        # Moves the mass beyond the new truncation into the tail bound
        if truncation >= self.truncation:
            return self
        dropped = math.fsum(self._probs[truncation + 1:])
        return Pmf(self._probs[:truncation + 1], self._tail_bound + dropped)

    def __repr__(self) -> str:
        head = ', '.join(f'{v:.6g}' for v in self._probs[:6])
        more = ', ...' if self._probs.size > 6 else ''
        return f'Pmf(truncation={self.truncation}, probs=[{head}{more}], tail_bound={self._tail_bound:.3e})'


class TotalVariation(NamedTuple):
    distance: float
    slack: float


def pmf_from_weights(weights: Weights, tail_bound: float = 0.0, tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    """
    Creates a pmf from masses at 0, 1, ..., N. Nothing is normalized; the caller supplies a probability vector, and
    tail_bound bounds the mass beyond N.
    """
    p = Pmf(weights, tail_bound, tol)
    total = p.stored_mass() + p.tail_bound
    if total > 1.0 + tol.eps_mass:
        raise MassExceedsOne(f'Total mass {total:.12g} exceeds 1 (tolerance {tol.eps_mass:.1e})')
    return p


def pgf_eval(p: Pmf, s: float) -> Tuple[float, float]:
    """
    Encloses the probability generating function Q(s) = sum_i p_i s^i. The stored masses give the lower end, and the
    tail mass, sitting at indices beyond the truncation, adds at most tail_bound * s^(N+1).
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f'The generating function is evaluated on [0, 1], got s={s}')
    lower = float(np.polynomial.polynomial.polyval(s, p.probs))
    upper = lower + p.tail_bound * s ** (p.truncation + 1)
    return lower, upper


def convolve(p: Pmf, q: Pmf) -> Pmf:
    """
    Law of the sum of independent variables with laws p and q, truncated at the smaller truncation. Computed mass
    landing beyond the truncation is moved into the tail bound. The tails of p and q contribute
    1 - (1 - t_p)(1 - t_q), the probability that at least one of the summands lies beyond its truncation.
    """
    n = min(p.truncation, q.truncation)
    full = np.convolve(p.probs, q.probs)
    discarded = math.fsum(full[n + 1:])
    tail = 1.0 - (1.0 - p.tail_bound) * (1.0 - q.tail_bound) + discarded
    return Pmf(full[:n + 1], tail)


def convolve_power(p: Pmf, n: int) -> Pmf:
    # n-fold self-convolution by repeated squaring
    if n < 1:
        raise DomainError(f'Convolution power must be a positive integer, got {n}')
    result = None
    base = p
    while n > 0:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n > 0:
            base = convolve(base, base)
    return result


def total_variation_distance(p: Pmf, q: Pmf) -> TotalVariation:
    """
    Half the L1 distance between the stored masses. The shorter pmf is padded with zeros. The mass hidden in the
    tails may add up to half the sum of the tail bounds, reported separately as slack.
    """
    size = max(p.probs.size, q.probs.size)
    a = np.zeros(size)
    b = np.zeros(size)
    a[:p.probs.size] = p.probs
    b[:q.probs.size] = q.probs
    distance = 0.5 * math.fsum(np.abs(a - b))
    slack = 0.5 * (p.tail_bound + q.tail_bound)
    return TotalVariation(distance, slack)
