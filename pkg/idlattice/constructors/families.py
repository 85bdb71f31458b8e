import math

import numpy as np
from scipy import stats

from idlattice.exceptions import DomainError
from idlattice.pmfcore.pmf import Pmf, convolve


def _check_probability(p: float):
    if not 0.0 < p < 1.0:
        raise DomainError(f'Success probability must lie in (0, 1), got {p}')


def _check_truncation(truncation: int):
    if truncation < 0:
        raise DomainError(f'Truncation must be non-negative, got {truncation}')


def _with_deficit(probs: np.ndarray) -> Pmf:
    return Pmf(probs, max(0.0, 1.0 - math.fsum(probs)))


def poisson(lam: float, truncation: int) -> Pmf:
    """
    Masses by the running product p_m = p_(m-1) lam / m, relative error O(m eps). Where exp(-lam) underflows the
    masses come from scipy.
    """
    if not lam > 0.0:
        raise DomainError(f'Poisson rate must be positive, got {lam}')
    _check_truncation(truncation)
    origin = math.exp(-lam)
    if origin == 0.0:
        return _with_deficit(stats.poisson.pmf(np.arange(truncation + 1), lam))
    probs = np.empty(truncation + 1)
    probs[0] = origin
    for m in range(1, truncation + 1):
        probs[m] = probs[m - 1] * lam / m
    return _with_deficit(probs)


def geometric(p: float, start: int, truncation: int) -> Pmf:
    """
    Geometric law with success probability p on {start, start + 1, ...}, start being 0 or 1.
    Masses p q^(m - start), tail bound q^(N + 1 - start).
    """
    _check_probability(p)
    _check_truncation(truncation)
    if start not in (0, 1):
        raise DomainError(f'Geometric law starts at 0 or 1, got {start}')
    q = 1.0 - p
    probs = np.zeros(truncation + 1)
    m = np.arange(start, truncation + 1)
    probs[start:] = p * q ** (m - start)
    return Pmf(probs, q ** (truncation + 1 - start))


def negbin_lattice(p: float, k: int, t: float, truncation: int) -> Pmf:
    """
    Law with generating function (p / (1 - q s^k))^t: the negative binomial number of summands, each equal to k.
    Only multiples of k carry mass.

    :param p: success probability in (0, 1)
    :param k: lattice step, k >= 1
    :param t: shape, t > 0; need not be an integer
    :param truncation: largest index stored
    """
    _check_probability(p)
    _check_truncation(truncation)
    if k < 1:
        raise DomainError(f'Lattice step must be a positive integer, got {k}')
    if not t > 0.0:
        raise DomainError(f'Shape must be positive, got {t}')
    q = 1.0 - p
    n_max = truncation // k
    # Generalized binomial coefficient C(t + n - 1, n) as a running product
    coeffs = np.empty(n_max + 1)
    coeffs[0] = p ** t
    for n in range(1, n_max + 1):
        coeffs[n] = coeffs[n - 1] * q * (t + n - 1) / n
    probs = np.zeros(truncation + 1)
    probs[::k] = coeffs
    return Pmf(probs, float(stats.nbinom.sf(n_max, t, p)))


def shifted_negbin_lattice(p: float, k: int, t: float, truncation: int) -> Pmf:
    # Generating function s (p / (1 - q s^k))^t
    if k < 2:
        raise DomainError(f'Shifted lattice law needs a step k > 1, got {k}')
    return convolve(degenerate(1, truncation), negbin_lattice(p, k, t, truncation))


def lattice_embed(p: Pmf, k: int) -> Pmf:
    """ Law of k X for X with law p; generating function Q(s^k) """
    if k < 1:
        raise DomainError(f'Lattice step must be a positive integer, got {k}')
    probs = np.zeros(k * p.truncation + 1)
    probs[::k] = p.probs
    return Pmf(probs, p.tail_bound)


def binomial(n: int, p: float) -> Pmf:
    if n < 1:
        raise DomainError(f'Number of trials must be a positive integer, got {n}')
    _check_probability(p)
    return Pmf(stats.binom.pmf(np.arange(n + 1), n, p), 0.0)


def logarithmic(p: float, truncation: int) -> Pmf:
    """
    Logarithmic law w_m = q^m / (m (-log p)) on {1, 2, ...}. It is the jump law of the geometric law on {0, 1, ...},
    whose rate is -log p.
    """
    _check_probability(p)
    _check_truncation(truncation)
    q = 1.0 - p
    probs = np.zeros(truncation + 1)
    m = np.arange(1, truncation + 1)
    probs[1:] = q ** m / (m * -math.log(p))
    return _with_deficit(probs)


def degenerate(at: int, truncation: int) -> Pmf:
    if not 0 <= at <= truncation:
        raise DomainError(f'Point mass at {at} does not fit in truncation {truncation}')
    probs = np.zeros(truncation + 1)
    probs[at] = 1.0
    return Pmf(probs, 0.0)
