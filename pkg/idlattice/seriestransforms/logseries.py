import logging
import math
from typing import Optional

import numpy as np

from idlattice.exceptions import DomainError, ZeroAtOrigin
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)

EPS_MACHINE = float(np.finfo(float).eps)


class LogSeries:
    """
    Coefficients l_0, ..., l_N of L(s) = log Q(s), where Q is the generating function of a pmf with an atom at 0.
    For a compound Poisson law with rate lam and jump law w, L(s) = -lam + lam * w(s), so l_0 = -lam and
    l_m = lam * w_m. Non-negative coefficients at m >= 1 characterize laws that are infinitely divisible with
    integer-valued components. Coefficients are never clamped: negative values are the information.

    :param sensitivity: first-order change of each l_m when the masses carry their rounding errors. Known for series
        computed by log_pgf, zero otherwise
    :param rounding: first-order bound on the rounding error of the recursion that computed each l_m. Known for
        series computed by log_pgf, zero otherwise
    """
    def __init__(self, coeffs: np.ndarray, source_tail_bound: float = 0.0, origin_mass: Optional[float] = None,
                 sensitivity: Optional[np.ndarray] = None, rounding: Optional[np.ndarray] = None):
        coeffs = np.array(coeffs, dtype=float).ravel()
        if coeffs.size == 0:
            raise DomainError('A log series must store at least l_0')
        coeffs.setflags(write=False)
        self._coeffs = coeffs
        self._sensitivity = self._error_array(sensitivity, coeffs.size)
        self._rounding = self._error_array(rounding, coeffs.size)
        self._source_tail_bound = float(source_tail_bound)
        self._origin_mass = math.exp(coeffs[0]) if origin_mass is None else float(origin_mass)

    @staticmethod
    def _error_array(values: Optional[np.ndarray], size: int) -> np.ndarray:
        if values is None:
            values = np.zeros(size)
        values = np.array(values, dtype=float).ravel()[:size]
        values.setflags(write=False)
        return values

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def sensitivity(self) -> np.ndarray:
        return self._sensitivity

    @property
    def rounding(self) -> np.ndarray:
        return self._rounding

    @property
    def truncation(self) -> int:
        return self._coeffs.size - 1

    @property
    def source_tail_bound(self) -> float:
        return self._source_tail_bound

    @property
    def origin_mass(self) -> float:
        """ Mass at 0 of the pmf the series was computed from. Recursion errors are amplified by its inverse """
        return self._origin_mass

    def error_estimate(self, m: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
        """
        Error of l_m: the rounding bound of the recursion plus the sensitivity of l_m to the rounding of the masses,
        scaled by error_safety.
        """
        m = np.asarray(m)
        return tol.error_safety * (self._rounding[m] + self._sensitivity[m])

    def scaled(self, factor: float) -> 'LogSeries':
        return LogSeries(factor * self._coeffs, self._source_tail_bound, self._origin_mass,
                         abs(factor) * self._sensitivity, abs(factor) * self._rounding)

    def truncated(self, truncation: int) -> 'LogSeries':
        if truncation >= self.truncation:
            return self
        n = truncation + 1
        return LogSeries(self._coeffs[:n], self._source_tail_bound, self._origin_mass, self._sensitivity[:n],
                         self._rounding[:n])

    def __add__(self, other: 'LogSeries') -> 'LogSeries':
        n = min(self.truncation, other.truncation) + 1
        return LogSeries(self._coeffs[:n] + other.coeffs[:n],
                         self._source_tail_bound + other.source_tail_bound,
                         self._origin_mass * other.origin_mass,
                         self._sensitivity[:n] + other.sensitivity[:n],
                         self._rounding[:n] + other.rounding[:n])

    def __repr__(self) -> str:
        head = ', '.join(f'{v:.6g}' for v in self._coeffs[:6])
        more = ', ...' if self._coeffs.size > 6 else ''
        return f'LogSeries(truncation={self.truncation}, coeffs=[{head}{more}])'


def log_pgf(p: Pmf, tol: Tolerances = DEFAULT_TOLERANCES) -> LogSeries:
    """
    Power-series logarithm of the generating function of p. Differentiating Q = exp(L) gives Q' = L' Q, which for
    the coefficients reads

        m l_m = (m p_m - sum_{j=1}^{m-1} j l_j p_{m-j}) / p_0,    l_0 = log p_0.

    A residual r_m left by step m moves the computed L' by r / Q, so the rounding bound of l_m is (|r| * |1/Q|)_m / m,
    with 1/Q expanded by the same kind of recursion. A relative change d_k of the masses moves L by (d p) / Q. Masses
    produced by recursions carry relative errors growing linearly in the index, so the sensitivity is taken as
    eps_machine * ((k + 1) p_k * |1/Q|)_m.

    :param p: pmf with an atom at 0
    :return: LogSeries with the same truncation as p
    :raises ZeroAtOrigin: if p_0 <= eps_neg. The law may still be a translate of a law with an atom at 0
    """
    a = p.probs
    p0 = float(a[0])
    if p0 <= tol.eps_neg:
        raise ZeroAtOrigin(f'Mass at 0 is {p0:.3e}; the generating function vanishes at 0 and has no logarithm')
    if p0 < tol.amplification_floor:
        logger.warning('Mass at 0 is %.3e; log-series coefficients carry errors amplified by %.1e', p0, 1.0 / p0)
    n = p.truncation
    index = np.arange(n + 1)
    jl = np.zeros(n + 1)  # j * l_j
    residual = np.zeros(n + 1)
    inverse = np.zeros(n + 1)  # coefficients of 1 / Q
    inverse[0] = 1.0 / p0
    # Coefficients of laws that are not ID may grow geometrically and overflow far beyond the first witness
    with np.errstate(over='ignore', invalid='ignore'):
        for m in range(1, n + 1):
            acc = np.dot(jl[1:m], a[m - 1:0:-1])
            jl[m] = (m * a[m] - acc) / p0
            # Dot product of m terms, then the division by p_0
            residual[m] = m * EPS_MACHINE * (m * a[m] + np.dot(np.abs(jl[1:m]), a[m - 1:0:-1])) \
                + EPS_MACHINE * p0 * abs(jl[m])
            inverse[m] = -np.dot(a[1:m + 1], inverse[m - 1::-1]) / p0
        magnitude = np.abs(inverse)
        sensitivity = EPS_MACHINE * np.convolve((index + 1) * a, magnitude)[:n + 1]
        coeffs = np.empty(n + 1)
        coeffs[0] = math.log(p0)
        coeffs[1:] = jl[1:] / index[1:]
        rounding = np.convolve(residual, magnitude)[:n + 1] / np.maximum(index, 1) + EPS_MACHINE * np.abs(coeffs)
    sensitivity[np.isnan(sensitivity)] = np.inf
    rounding[np.isnan(rounding)] = np.inf
    return LogSeries(coeffs, p.tail_bound, p0, sensitivity, rounding)


def _exp_recursion(c: np.ndarray) -> np.ndarray:
    n = c.size - 1
    jl = c * np.arange(n + 1)
    probs = np.zeros(n + 1)
    probs[0] = math.exp(c[0])
    with np.errstate(over='ignore', invalid='ignore'):
        for m in range(1, n + 1):
            probs[m] = np.dot(jl[1:m + 1], probs[m - 1::-1]) / m
    return probs


def exp_coefficients(l: LogSeries) -> np.ndarray:
    """
    Coefficients of exp(L(s)):

        p_0 = exp(l_0),    m p_m = sum_{j=1}^{m} j l_j p_{m-j}.

    Nothing is checked; for a series that is not the logarithm of a generating function the coefficients may be
    negative.
    """
    return _exp_recursion(l.coeffs)


def exp_series(l: LogSeries, tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    """
    Power-series exponential, the inverse of log_pgf.

    Where the coefficients l_m change sign, the recursion cancels terms as large as the coefficients of
    exp(l_0 + sum |l_m| s^m). Its rounding error at m is bounded by error_safety * m * eps_machine times that
    magnitude. The result is cut before the first index where this bound exceeds eps_neg, so a series with
    non-negative coefficients keeps its full truncation. The tail bound is the deficit 1 - sum p_m; it includes the
    mass of the indices cut off, and for roots and round trips of divisible laws it never exceeds
    l.source_tail_bound.
    """
    probs = exp_coefficients(l)
    n = l.truncation
    magnitude_coeffs = np.abs(l.coeffs)
    magnitude_coeffs[0] = l.coeffs[0]
    with np.errstate(over='ignore', invalid='ignore'):
        error = tol.error_safety * np.arange(n + 1) * EPS_MACHINE * _exp_recursion(magnitude_coeffs)
        unreliable = np.flatnonzero(~np.isfinite(probs) | ~(error <= tol.eps_neg))
    if unreliable.size > 0:
        cut = int(unreliable[0])
        logger.debug('Exponential recursion loses accuracy at index %d; truncating there', cut)
        probs = probs[:cut]
    deficit = 1.0 - math.fsum(probs)
    return Pmf(probs, max(deficit, 0.0), tol)
