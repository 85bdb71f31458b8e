import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from idlattice.exceptions import AllMassInTail, DomainError, NotFactorizable, NotNormalized
from idlattice.idanalysis.verdict import (
    CompoundPoissonForm, Degenerate, IdIntegerComponents, IdShifted, IdVerdict, Inconclusive, InconclusiveReason,
    NotId,
)
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES
from idlattice.seriestransforms.logseries import LogSeries, exp_coefficients, exp_series, log_pgf


logger = logging.getLogger(__name__)

# Laws known to have finite support and stored with fewer indices are searched for a witness up to this horizon
FINITE_SUPPORT_HORIZON = 64


def detect_shift(p: Pmf, tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[int, Pmf]:
    """
    Splits p into a translation and a law with an atom at 0.

    :return: (shift, shifted) where shift is the first index with mass above eps_neg and shifted is p moved down by
        shift indices
    :raises AllMassInTail: if no stored mass exceeds eps_neg
    """
    above = np.flatnonzero(p.probs > tol.eps_neg)
    if above.size == 0:
        raise AllMassInTail(f'No stored mass exceeds {tol.eps_neg:.1e} (tail bound {p.tail_bound:.3e})')
    shift = int(above[0])
    if shift == 0:
        return 0, p
    return shift, Pmf(p.probs[shift:], p.tail_bound, tol)


def _witness_search_pmf(p: Pmf) -> Pmf:
    if p.tail_bound > 0.0 or p.truncation >= FINITE_SUPPORT_HORIZON:
        return p
    horizon = max(4 * (p.truncation + 1), FINITE_SUPPORT_HORIZON)
    padded = np.zeros(horizon + 1)
    padded[:p.probs.size] = p.probs
    return Pmf(padded, 0.0)


def _form_from_series(series: LogSeries, tol: Tolerances) -> CompoundPoissonForm:
    lam = -float(series.coeffs[0])
    if lam <= 0.0:
        raise NotFactorizable(f'Log series has l_0 = {-lam:.3e}; no positive Poisson rate')
    jump = series.coeffs / lam
    jump[0] = 0.0
    # Negative values here lie inside the error band; they carry no mass
    jump[jump < 0.0] = 0.0
    deficit = 1.0 - math.fsum(jump)
    return CompoundPoissonForm(lam, Pmf(jump, max(deficit, 0.0), tol), tol)


def _series_verdict(q: Pmf, shift: int, tol: Tolerances) -> Union[CompoundPoissonForm, NotId, Inconclusive]:
    # q has its first atom at 0
    series = log_pgf(_witness_search_pmf(q), tol)
    c = series.coeffs
    err = series.error_estimate(np.arange(c.size), tol)
    # Jump masses are l_m / lam; negativity bounds them from below
    floor = tol.negativity * -float(c[0])
    threshold = np.maximum(floor, err)
    witnesses = np.flatnonzero(c[1:] < -threshold[1:]) + 1
    if witnesses.size > 0:
        w = int(witnesses[0])
        logger.debug('First negative log-series coefficient l_%d = %.6g (threshold %.3e)', w, c[w], threshold[w])
        return NotId(w, float(c[w]), shift)
    if series.origin_mass < tol.amplification_floor:
        return Inconclusive(InconclusiveReason.ErrorAmplification,
                            f'mass at 0 is {series.origin_mass:.3e}, below {tol.amplification_floor:.1e}')
    ambiguous = np.flatnonzero(c[1:] < -floor) + 1
    if ambiguous.size > 0:
        a = int(ambiguous[0])
        return Inconclusive(InconclusiveReason.ErrorAmplification,
                            f'l_{a} = {c[a]:.3e} lies inside the error band {err[a]:.3e}')
    negative = np.flatnonzero(c[1:] < -err[1:]) + 1
    if negative.size > 0:
        b = int(negative[0])
        return Inconclusive(InconclusiveReason.BelowResolution,
                            f'l_{b} = {c[b]:.3e} is negative, but the jump mass {c[b] / -c[0]:.3e} lies above '
                            f'-{tol.negativity:.1e}')
    try:
        return _form_from_series(series.truncated(q.truncation), tol)
    except DomainError as e:
        # Clamping coefficients inside the error band can leave jump masses summing above 1
        return Inconclusive(InconclusiveReason.ErrorAmplification, str(e))


def test_id(p: Pmf, tol: Tolerances = DEFAULT_TOLERANCES) -> IdVerdict:
    """
    Decides whether p is infinitely divisible with integer-valued components. The law is, exactly when the
    coefficients l_m, m >= 1, of log Q(s) are all non-negative; then Q(s) = exp(-lam + lam * w(s)) with lam = -l_0 and
    jump law w_m = l_m / lam.

    Checks run in this order: the mass check, a heavy tail (Inconclusive), a point mass (Degenerate), a translate
    (analysed once after moving down to its first atom), too few indices left to decide, and finally the signs of
    the log-series coefficients. A coefficient is a witness against divisibility when it lies below both
    -negativity * lam and -LogSeries.error_estimate(m). A coefficient below only the first is inside the error band
    (Inconclusive, error-amplification); one below only the second is certainly negative, but its jump mass is too
    small to count against the law (Inconclusive, below-resolution).

    :raises NotNormalized: if the stored masses and the tail bound do not sum to 1 within eps_mass
    """
    if not p.is_normalized(tol):
        raise NotNormalized(f'Masses and tail bound sum to {p.stored_mass() + p.tail_bound:.12g} '
                            f'(tolerance {tol.eps_mass:.1e})')
    if p.tail_bound > tol.heavy_tail:
        return Inconclusive(InconclusiveReason.TailTooHeavy,
                            f'tail bound {p.tail_bound:.3e} exceeds {tol.heavy_tail:.1e}')
    atoms = np.flatnonzero(p.probs > tol.support)
    if atoms.size == 1 and p.probs[atoms[0]] >= 1.0 - tol.eps_mass:
        return Degenerate(int(atoms[0]))

    shift, q = detect_shift(p, tol)
    if shift > 0:
        logger.debug('No atom at 0; analysing the law moved down by %d', shift)
    if q.truncation < 2 and q.tail_bound > 0.0:
        return Inconclusive(InconclusiveReason.TruncationTooShort,
                            f'{q.truncation + 1} stored index(es) after a shift of {shift}')

    outcome = _series_verdict(q, shift, tol)
    if not isinstance(outcome, CompoundPoissonForm):
        return outcome
    if shift > 0:
        return IdShifted(shift, outcome)
    return IdIntegerComponents(outcome)


def factorize(p: Pmf, tol: Tolerances = DEFAULT_TOLERANCES) -> CompoundPoissonForm:
    """
    Canonical compound Poisson form (lam, w) of p: lam = -log p_0, w_m = l_m / lam.

    :raises NotFactorizable: unless test_id(p) is IdIntegerComponents. The verdict is attached to the error
    """
    verdict = test_id(p, tol)
    if isinstance(verdict, IdIntegerComponents):
        return verdict.form
    raise NotFactorizable(f'Law has no compound Poisson form with integer jumps: {verdict}', verdict)


def compose(form: CompoundPoissonForm, truncation: int, tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    # Aggregate-claims recursion m p_m = lam sum_j j w_j p_{m-j}, p_0 = exp(-lam)
    return exp_series(form.log_series(truncation), tol)


def convolution_root(p: Pmf, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> Pmf:
    """
    The law q with n-fold self-convolution p, computed as exp(log Q(s) / n). It is the compound Poisson law with rate
    lam / n and the jump law of p.

    :raises DomainError: if n < 1
    :raises NotFactorizable: unless test_id(p) is IdIntegerComponents
    """
    if n < 1:
        raise DomainError(f'Root order must be a positive integer, got {n}')
    verdict = test_id(p, tol)
    if not isinstance(verdict, IdIntegerComponents):
        raise NotFactorizable(f'No convolution root with integer-valued components: {verdict}', verdict)
    if n == 1:
        return p
    return exp_series(log_pgf(p, tol).scaled(1.0 / n), tol)


def candidate_root(p: Pmf, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> Optional[Pmf]:
    """
    exp(log Q(s) / n) without requiring p to be infinitely divisible.

    :return: the candidate n-th root, truncated like p, or None if p has no atom at 0 or the candidate has a
        coefficient below -negativity
    """
    if n < 1:
        raise DomainError(f'Root order must be a positive integer, got {n}')
    if p.probs[0] <= tol.eps_neg:
        return None
    series = log_pgf(_witness_search_pmf(p), tol).scaled(1.0 / n)
    probs = exp_coefficients(series)
    if not np.all(np.isfinite(probs)) or np.any(probs < -tol.negativity):
        return None
    probs[probs < 0.0] = 0.0
    deficit = 1.0 - math.fsum(probs)
    return Pmf(probs, max(deficit, 0.0), tol).truncated(p.truncation)
