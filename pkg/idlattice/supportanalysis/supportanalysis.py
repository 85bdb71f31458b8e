import dataclasses
import logging
import math
from enum import Enum
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np
from scipy.special import gammaln

from idlattice.exceptions import DomainError, VerdictMismatch
from idlattice.idanalysis.verdict import CompoundPoissonForm, IdVerdict, VerdictKind
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)


@dataclasses.dataclass
class SupportReport:
    """
    Support structure of a pmf within the examined horizon.

    :param atoms: indices with mass above the support threshold, ascending
    :param min_point: smallest atom, None if no stored mass exceeds the threshold
    :param gaps: maximal runs (first, last) of non-atoms strictly between consecutive atoms
    :param lattice_gcd: gcd of the offsets of the atoms from min_point, 0 for a single atom
    :param gap_free: every integer in [0, horizon] is an atom
    :param horizon: largest index examined
    :param faint_atoms: atoms with mass at or below the faint threshold
    """
    atoms: List[int]
    min_point: Optional[int]
    gaps: List[Tuple[int, int]]
    lattice_gcd: int
    gap_free: bool
    horizon: int
    faint_atoms: List[int]

    @property
    def has_gaps(self) -> bool:
        return len(self.gaps) > 0


def support_report(p: Pmf, horizon: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES) -> SupportReport:
    """
    :param horizon: largest index to examine. Defaults to the largest atom; indices beyond the truncation are never
        examined
    """
    probs = p.probs if horizon is None else p.probs[:max(horizon, 0) + 1]
    atoms = np.flatnonzero(probs > tol.support)
    if horizon is None:
        horizon = int(atoms[-1]) if atoms.size > 0 else p.truncation
    horizon = min(horizon, p.truncation)
    if atoms.size == 0:
        return SupportReport([], None, [], 0, False, horizon, [])

    min_point = int(atoms[0])
    steps = np.diff(atoms)
    gaps = [(int(a) + 1, int(b) - 1) for a, b, d in zip(atoms[:-1], atoms[1:], steps) if d > 1]
    lattice_gcd = int(np.gcd.reduce(atoms - min_point)) if atoms.size > 1 else 0
    gap_free = atoms.size == horizon + 1
    faint = [int(i) for i in atoms if probs[i] <= tol.faint]
    return SupportReport(
        atoms=[int(i) for i in atoms],
        min_point=min_point,
        gaps=gaps,
        lattice_gcd=lattice_gcd,
        gap_free=gap_free,
        horizon=horizon,
        faint_atoms=faint,
    )


def semigroup_closure(jump_support: Iterable[int], horizon: int) -> Set[int]:
    """
    {0} together with every finite sum of elements of jump_support, within [0, horizon]. This is the support of a
    compound Poisson law whose jump law has support jump_support.
    """
    support = sorted(set(int(j) for j in jump_support))
    if len(support) == 0 or support[0] < 1:
        raise DomainError(f'Jump support must be a non-empty set of positive integers, got {support}')
    reached = np.zeros(horizon + 1, dtype=bool)
    reached[0] = True
    for x in range(1, horizon + 1):
        reached[x] = any(reached[x - j] for j in support if j <= x)
    return set(int(i) for i in np.flatnonzero(reached))


def visibility_horizon(form: CompoundPoissonForm, truncation: int, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """
    Largest index h such that every point of the support of the compound Poisson law up to h carries a certified
    mass above visibility_safety * support. Beyond h an atom of the abstract law may be too faint to be told apart
    from numerical dust in a computed pmf.

    The certificate for a point x is the probability of its most likely ordered jump path,
    exp(-lam) lam^k / k! * w_{j_1} ... w_{j_k}, with j_1 + ... + j_k = x, maximised over k and the path.
    """
    threshold = tol.visibility_safety * tol.support
    atoms = form.jump_atoms(tol)
    weights = form.jump.probs[atoms]
    lam = form.rate

    lower = np.zeros(truncation + 1)
    lower[0] = math.exp(-lam)
    best = np.zeros(truncation + 1)
    best[0] = 1.0
    log_weight = -lam
    for k in range(1, truncation + 1):
        log_weight += math.log(lam) - math.log(k)
        step = np.zeros(truncation + 1)
        for j, w in zip(atoms, weights):
            if j <= truncation:
                np.maximum(step[j:], best[:truncation + 1 - j] * w, out=step[j:])
        best = step
        top = best.max()
        if top == 0.0:
            break
        np.maximum(lower, math.exp(log_weight) * best, out=lower)
        # Past the Poisson mode the weight only decreases, and so does the best path product
        if k >= lam and math.exp(log_weight) * top <= threshold:
            break

    closure = sorted(semigroup_closure(atoms, truncation))
    for x in closure:
        if lower[x] <= threshold:
            logger.debug('Support point %d has certified mass %.3e; visibility horizon %d', x, lower[x], x - 1)
            return x - 1
    return truncation


def multiple_mass_lower_bound(form: CompoundPoissonForm, m: int, j: int) -> float:
    """
    Lower bound on log P{X = j m} from the path of j jumps of size m:

        log P{X = j m} >= -lam + j log(lam w_m) - log j!

    Finite for every j when w_m > 0, so the support of X has no largest element.
    """
    if j < 0:
        raise DomainError(f'Multiple must be non-negative, got {j}')
    w = form.jump.mass(m)
    if w <= 0.0:
        raise DomainError(f'Jump law has no atom at {m}')
    return -form.rate + j * math.log(form.rate * w) - float(gammaln(j + 1))


class GapCheckStatus(Enum):
    Consistent = 'consistent'
    Violation = 'violation'
    NotApplicable = 'not-applicable'


@dataclasses.dataclass
class GapCheckResult:
    status: GapCheckStatus
    p1_positive: bool
    gap_free: bool
    # Gaps strictly between atoms, as in SupportReport; a point mass at 0 has none but is not gap-free
    has_gaps: bool
    horizon: int
    detail: str = ''


def check_gap_theorem(p: Pmf, verdict: IdVerdict, horizon: Optional[int] = None,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> GapCheckResult:
    """
    For a law that is ID with integer-valued components, the support has no gaps if and only if P{X=1} > 0. Checks
    this equivalence on p up to the smaller of horizon (default: the truncation) and the visibility horizon of the
    canonical form.

    Translates (IdShifted) and point masses do not satisfy the hypothesis P{X=0} > 0 of the equivalence; for them the
    result is NotApplicable and only reports P{X=1} > 0 and the gaps.

    :raises VerdictMismatch: if the verdict is NotId or Inconclusive
    """
    if verdict.kind in (VerdictKind.NotId, VerdictKind.Inconclusive):
        raise VerdictMismatch(f'Gap criterion needs an infinitely divisible law, got {verdict}')
    horizon = p.truncation if horizon is None else min(horizon, p.truncation)
    form = verdict.canonical_form()
    if form is not None:
        visible = visibility_horizon(form, p.truncation, tol)
        if verdict.kind == VerdictKind.IdShifted:
            # The form describes the law moved down by the shift
            visible += verdict.shift
        horizon = min(horizon, visible)
    report = support_report(p, horizon, tol)
    p1_positive = p.mass(1) > tol.support
    atom_set = set(report.atoms)
    first_missing = next((i for i in range(horizon + 1) if i not in atom_set), None)

    if verdict.kind != VerdictKind.IdIntegerComponents:
        return GapCheckResult(GapCheckStatus.NotApplicable, p1_positive, report.gap_free, report.has_gaps, horizon,
                              'P{X=0} > 0 does not hold')
    if p1_positive == report.gap_free:
        return GapCheckResult(GapCheckStatus.Consistent, p1_positive, report.gap_free, report.has_gaps, horizon)
    if p1_positive:
        detail = f'P{{X=1}} > 0 but {first_missing} is not an atom'
    else:
        detail = f'P{{X=1}} = 0 but every integer up to {horizon} is an atom'
    return GapCheckResult(GapCheckStatus.Violation, p1_positive, report.gap_free, report.has_gaps, horizon, detail)
