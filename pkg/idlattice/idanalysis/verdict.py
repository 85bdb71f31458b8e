import dataclasses
import math
from enum import Enum
from typing import ClassVar, List, Optional

import numpy as np

from idlattice.exceptions import DomainError
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES
from idlattice.seriestransforms.logseries import LogSeries


class VerdictKind(Enum):
    IdIntegerComponents = 'id_integer_components'
    IdShifted = 'id_shifted'
    NotId = 'not_id'
    Degenerate = 'degenerate'
    Inconclusive = 'inconclusive'


class InconclusiveReason(Enum):
    TruncationTooShort = 'truncation-too-short'
    ErrorAmplification = 'error-amplification'
    TailTooHeavy = 'tail-too-heavy'
    BelowResolution = 'below-resolution'


class CompoundPoissonForm:
    """
    Poisson(rate) number of independent jumps with law `jump` on {1, 2, ...}. The generating function is
    exp(-rate * (1 - w(s))), w being the generating function of the jump law.
    """
    def __init__(self, rate: float, jump: Pmf, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
        if not (np.isfinite(rate) and rate > 0.0):
            raise DomainError(f'Compound Poisson rate must be positive, got {rate}')
        if jump.probs[0] != 0.0:
            raise DomainError(f'Jump law must have no mass at 0, got {jump.probs[0]:.3e}')
        stored = jump.stored_mass()
        if stored > 1.0 + tol.eps_mass or stored + jump.tail_bound < 1.0 - tol.eps_mass:
            raise DomainError(f'Jump law is not normalized: stored mass {stored:.12g}, tail bound '
                              f'{jump.tail_bound:.3e}')
        self._rate = float(rate)
        self._jump = jump

    @property
    def rate(self) -> float:
        return self._rate

    @property
    def jump(self) -> Pmf:
        return self._jump

    def jump_atoms(self, tol: Tolerances = DEFAULT_TOLERANCES) -> List[int]:
        return [int(i) for i in np.flatnonzero(self._jump.probs > tol.support)]

    def divided(self, n: int) -> 'CompoundPoissonForm':
        # Law of each of n i.i.d. components summing to this law
        return CompoundPoissonForm(self._rate / n, self._jump)

    def log_series(self, truncation: int) -> LogSeries:
        # The series (-rate, rate * w_1, rate * w_2, ...) of log Q, zero-padded or cut to the truncation
        coeffs = np.zeros(truncation + 1)
        n = min(truncation, self._jump.truncation)
        coeffs[1:n + 1] = self._rate * self._jump.probs[1:n + 1]
        coeffs[0] = -self._rate
        return LogSeries(coeffs, self._jump.tail_bound, math.exp(-self._rate))

    def __repr__(self) -> str:
        return f'CompoundPoissonForm(rate={self._rate:.10g}, jump={self._jump!r})'


@dataclasses.dataclass(frozen=True)
class IdVerdict:
    kind: ClassVar[VerdictKind]

    @property
    def is_infinitely_divisible(self) -> bool:
        return self.kind in (VerdictKind.IdIntegerComponents, VerdictKind.IdShifted, VerdictKind.Degenerate)

    def canonical_form(self) -> Optional[CompoundPoissonForm]:
        return None


@dataclasses.dataclass(frozen=True)
class IdIntegerComponents(IdVerdict):
    kind: ClassVar[VerdictKind] = VerdictKind.IdIntegerComponents
    form: CompoundPoissonForm

    def canonical_form(self) -> Optional[CompoundPoissonForm]:
        return self.form


@dataclasses.dataclass(frozen=True)
class IdShifted(IdVerdict):
    """ Translate by `shift` of a law that is ID with integer-valued components. Its own components are not """
    kind: ClassVar[VerdictKind] = VerdictKind.IdShifted
    shift: int
    inner: CompoundPoissonForm

    def canonical_form(self) -> Optional[CompoundPoissonForm]:
        return self.inner


@dataclasses.dataclass(frozen=True)
class NotId(IdVerdict):
    """ witness_value = l_m < -threshold at m = witness_index, in the series of the law moved down by `shift` """
    kind: ClassVar[VerdictKind] = VerdictKind.NotId
    witness_index: int
    witness_value: float
    shift: int = 0


@dataclasses.dataclass(frozen=True)
class Degenerate(IdVerdict):
    kind: ClassVar[VerdictKind] = VerdictKind.Degenerate
    at: int


@dataclasses.dataclass(frozen=True)
class Inconclusive(IdVerdict):
    kind: ClassVar[VerdictKind] = VerdictKind.Inconclusive
    reason: InconclusiveReason
    detail: str = ''
