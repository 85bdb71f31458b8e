"""
Randomized and constructed checks of the structural results on laws that are infinitely divisible with
integer-valued components: the atom at 0, unbounded support, support of the components, the gap criterion, the
negative binomial lattice counterexamples and the translation behaviour.

Every suite returns a SuiteResult; failing instances are described in at most MAX_FAILURES messages.
"""
import dataclasses
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from idlattice.auxiliary.progress import progress
from idlattice.constructors import families
from idlattice.exceptions import IdLatticeError
from idlattice.idanalysis import idanalysis
from idlattice.idanalysis.verdict import CompoundPoissonForm, IdIntegerComponents, IdShifted, NotId
from idlattice.pmfcore.pmf import Pmf, convolve, convolve_power, total_variation_distance
from idlattice.pmfcore.tolerances import Tolerances
from idlattice.seriestransforms.logseries import exp_series, log_pgf
from idlattice.settings import Settings
from idlattice.supportanalysis.supportanalysis import (
    GapCheckStatus, check_gap_theorem, multiple_mass_lower_bound, semigroup_closure, support_report,
    visibility_horizon,
)


logger = logging.getLogger(__name__)

MAX_FAILURES = 5

# Laws with rate up to 5 and jumps up to 20 put less than 1e-10 beyond this truncation
SWEEP_TRUNCATION = 512
SWEEP_MAX_RATE = 5.0
SWEEP_MAX_JUMP = 20

ROUNDTRIP_TRUNCATION = 128
ROUNDTRIP_MAX_RATE = 3.0
ROUNDTRIP_MAX_JUMP = 8

ROOT_ORDERS = (2, 3, 5)
LATTICE_TRIPLES = ((0.5, 2, 1.0), (0.4, 3, 2.0), (0.7, 5, 0.5))


@dataclasses.dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: List[str]


class _Tally:
    def __init__(self, name: str):
        self._name = name
        self._checked = 0
        self._n_failed = 0
        self._failures: List[str] = []

    def record(self, ok: bool, description: str = ''):
        self._checked += 1
        if not ok:
            self._n_failed += 1
            if len(self._failures) < MAX_FAILURES:
                self._failures.append(description)

    def result(self) -> SuiteResult:
        if self._n_failed > 0:
            logger.warning('Suite %s: %d of %d instances failed', self._name, self._n_failed, self._checked)
        return SuiteResult(self._name, self._n_failed == 0, self._checked, list(self._failures))


def random_jump(rng: np.random.Generator, max_jump: int, lattice: int = 1, unit_floor: float = 0.0) -> Pmf:
    """
    Jump law on up to five atoms drawn from the multiples of lattice in [1, max_jump], with weights drawn from
    U(0.05, 1) and normalized. A positive unit_floor mixes in that much mass at 1.
    """
    candidates = np.arange(lattice, max_jump + 1, lattice)
    size = int(rng.integers(1, min(5, candidates.size) + 1))
    atoms = rng.choice(candidates, size=size, replace=False)
    weights = rng.uniform(0.05, 1.0, size)
    probs = np.zeros(max_jump + 1)
    probs[atoms] = weights / weights.sum()
    if unit_floor > 0.0:
        probs *= 1.0 - unit_floor
        probs[1] += unit_floor
    return Pmf(probs, 0.0)


def random_form(rng: np.random.Generator, max_rate: float = SWEEP_MAX_RATE, max_jump: int = SWEEP_MAX_JUMP,
                lattice: int = 1, unit_floor: float = 0.0) -> CompoundPoissonForm:
    return CompoundPoissonForm(rng.uniform(0.01, max_rate), random_jump(rng, max_jump, lattice, unit_floor))


def random_finite_law(rng: np.random.Generator, max_atoms: int = 6, max_point: int = 12) -> Pmf:
    # Between 2 and max_atoms atoms in [0, max_point], 0 always among them
    size = int(rng.integers(2, max_atoms + 1))
    others = rng.choice(np.arange(1, max_point + 1), size=size - 1, replace=False)
    atoms = np.concatenate([[0], others])
    weights = rng.uniform(0.05, 1.0, size)
    probs = np.zeros(int(atoms.max()) + 1)
    probs[atoms] = weights / weights.sum()
    return Pmf(probs, 0.0)


def _describe(form: CompoundPoissonForm, tol: Tolerances) -> str:
    return f'rate={form.rate:.6g}, jump atoms={form.jump_atoms(tol)}'


def _atoms_within(p: Pmf, horizon: int, tol: Tolerances) -> List[int]:
    return support_report(p, horizon, tol).atoms


def theorem1(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # P{X=0} = exp(-rate) > 0, and the verdict recovers the form
    tol = settings.tolerances
    tally = _Tally('theorem1')
    for _ in progress(range(size), show_progress, desc='theorem1'):
        form = random_form(rng)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        verdict = idanalysis.test_id(p, tol)
        ok = p.probs[0] == math.exp(-form.rate) and p.probs[0] > 0.0 and isinstance(verdict, IdIntegerComponents)
        if ok:
            found = verdict.form
            ok = (abs(found.rate - form.rate) <= 1e-9 * form.rate
                  and total_variation_distance(found.jump, form.jump).distance <= 1e-10)
        tally.record(ok, f'{_describe(form, tol)}: p_0={p.probs[0]:.6g}, verdict {verdict}')
    return tally.result()


def theorem2(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Every multiple j m of a jump atom m is in the support; no largest support point
    tol = settings.tolerances
    tally = _Tally('theorem2')
    smallest_log = math.log(1e-250)
    for _ in progress(range(size), show_progress, desc='theorem2'):
        form = random_form(rng)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        m = int(rng.choice(form.jump_atoms(tol)))
        j_max = SWEEP_TRUNCATION // m
        bounds = np.array([multiple_mass_lower_bound(form, m, j) for j in range(j_max + 1)])
        representable = np.flatnonzero(bounds > smallest_log)
        largest = int(representable[-1])
        masses = p.probs[::m][:j_max + 1]
        ok = (np.all(np.isfinite(bounds))
              and masses[largest] > 0.0
              and np.all(masses[representable] >= np.exp(bounds[representable]) * (1.0 - 1e-9)))
        tally.record(ok, f'{_describe(form, tol)}: jump {m}, largest certified multiple {largest * m}')
    return tally.result()


def theorem3(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Support of the n-th root equals the support of the law, and the n-th power of the root is the law
    tol = settings.tolerances
    tally = _Tally('theorem3')
    for _ in progress(range(size), show_progress, desc='theorem3'):
        form = random_form(rng)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        visible = visibility_horizon(form, SWEEP_TRUNCATION, tol)
        messages = []
        for n in ROOT_ORDERS:
            try:
                root = idanalysis.convolution_root(p, n, tol)
            except IdLatticeError as e:
                messages.append(f'no root of order {n}: {e}')
                continue
            horizon = min(visible, visibility_horizon(form.divided(n), SWEEP_TRUNCATION, tol))
            if _atoms_within(root, horizon, tol) != _atoms_within(p, horizon, tol):
                messages.append(f'support of root {n} differs up to {horizon}')
            distance = total_variation_distance(convolve_power(root, n), p).distance
            if distance > 1e-10:
                messages.append(f'power {n} of the root is {distance:.3e} away')
        tally.record(not messages, f'{_describe(form, tol)}: {"; ".join(messages)}')
    return tally.result()


def theorem4(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    """
    ID with integer-valued components if and only if P{X=0} > 0 and n-th roots exist. Composed laws must have roots
    of orders 2, 3 and 5 whose powers give back the law; finite-support laws must lack a root of one of these orders.
    """
    tol = settings.tolerances
    tally = _Tally('theorem4')
    for _ in progress(range(size), show_progress, desc='theorem4'):
        form = random_form(rng)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        ok = p.probs[0] > 0.0 and isinstance(idanalysis.test_id(p, tol), IdIntegerComponents)
        for n in ROOT_ORDERS:
            root = idanalysis.candidate_root(p, n, tol)
            ok = ok and root is not None and total_variation_distance(convolve_power(root, n), p).distance <= 1e-10
        tally.record(ok, f'{_describe(form, tol)}: a root of order {ROOT_ORDERS} is missing or inexact')

        q = random_finite_law(rng)
        verdict = idanalysis.test_id(q, tol)
        roots = [idanalysis.candidate_root(q, n, tol) for n in ROOT_ORDERS]
        ok = not isinstance(verdict, IdIntegerComponents) and any(r is None for r in roots)
        tally.record(ok, f'finite law {q}: verdict {verdict}, roots exist for all orders {ROOT_ORDERS}')
    return tally.result()


def theorem5(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Gap-free support exactly when P{X=1} > 0, checked both ways
    tol = settings.tolerances
    tally = _Tally('theorem5')
    for _ in progress(range(size), show_progress, desc='theorem5'):
        form = random_form(rng, unit_floor=0.05)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        result = check_gap_theorem(p, idanalysis.test_id(p, tol), tol=tol)
        ok = result.status == GapCheckStatus.Consistent and result.gap_free
        tally.record(ok, f'{_describe(form, tol)}: {result}')

        g = int(rng.integers(2, 6))
        form = random_form(rng, lattice=g)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        result = check_gap_theorem(p, idanalysis.test_id(p, tol), tol=tol)
        ok = result.status == GapCheckStatus.Consistent and result.has_gaps and not result.p1_positive
        tally.record(ok, f'{_describe(form, tol)}: {result}')
    return tally.result()


def corollary3(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Non-degenerate laws of bounded support with an atom at 0 are not ID
    tol = settings.tolerances
    tally = _Tally('corollary3')
    for n in range(1, 11):
        for k in range(1, 10):
            verdict = idanalysis.test_id(families.binomial(n, k / 10), tol)
            tally.record(isinstance(verdict, NotId), f'binomial({n}, {k / 10}): {verdict}')
    verdict = idanalysis.test_id(families.binomial(2, 0.5), tol)
    ok = isinstance(verdict, NotId) and verdict.witness_index == 2 and abs(verdict.witness_value + 1.0) <= 1e-12
    tally.record(ok, f'binomial(2, 0.5): expected witness l_2 = -1, got {verdict}')
    for _ in progress(range(size), show_progress, desc='corollary3'):
        q = random_finite_law(rng)
        verdict = idanalysis.test_id(q, tol)
        tally.record(isinstance(verdict, NotId), f'{q}: {verdict}')
    return tally.result()


def remark1(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # The support is the additive closure of the jump support
    tol = settings.tolerances
    tally = _Tally('remark1')
    for _ in progress(range(size), show_progress, desc='remark1'):
        form = random_form(rng)
        p = idanalysis.compose(form, SWEEP_TRUNCATION, tol)
        horizon = visibility_horizon(form, SWEEP_TRUNCATION, tol)
        closure = sorted(semigroup_closure(form.jump_atoms(tol), horizon))
        atoms = _atoms_within(p, horizon, tol)
        missing = sorted(set(closure) - set(atoms))[:5]
        extra = sorted(set(atoms) - set(closure))[:5]
        tally.record(atoms == closure, f'{_describe(form, tol)}: horizon {horizon}, missing {missing}, extra {extra}')
    return tally.result()


def example1(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # (p / (1 - q s^k))^t is ID with P{X=1} = 0, and its support has gaps
    tol = settings.tolerances
    tally = _Tally('example1')
    for p_, k, t in LATTICE_TRIPLES:
        p = families.negbin_lattice(p_, k, t, settings.truncation)
        verdict = idanalysis.test_id(p, tol)
        report = support_report(p, tol=tol)
        ok = (isinstance(verdict, IdIntegerComponents)
              and report.atoms == list(range(0, report.horizon + 1, k))
              and report.lattice_gcd == k
              and p.probs[1] == 0.0)
        if ok:
            result = check_gap_theorem(p, verdict, tol=tol)
            ok = result.status == GapCheckStatus.Consistent and result.has_gaps and not result.p1_positive
        tally.record(ok, f'negbin_lattice({p_}, {k}, {t}): verdict {verdict}, report {report}')
    return tally.result()


def example2(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # s (p / (1 - q s^k))^t has P{X=0} = 0, P{X=1} = p^t > 0 and gaps, and is a translate of an ID law
    tol = settings.tolerances
    tally = _Tally('example2')
    for p_, k, t in LATTICE_TRIPLES:
        p = families.shifted_negbin_lattice(p_, k, t, settings.truncation)
        verdict = idanalysis.test_id(p, tol)
        ok = (p.probs[0] == 0.0
              and abs(p.probs[1] - p_ ** t) <= 1e-15
              and isinstance(verdict, IdShifted) and verdict.shift == 1)
        if ok:
            result = check_gap_theorem(p, verdict, tol=tol)
            ok = result.status == GapCheckStatus.NotApplicable and result.p1_positive and result.has_gaps
        tally.record(ok, f'shifted_negbin_lattice({p_}, {k}, {t}): verdict {verdict}')
    return tally.result()


def geometric(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Geometric law on {0, 1, ...} is compound Poisson with logarithmic jumps; on {1, 2, ...} it is a translate
    tol = settings.tolerances
    tally = _Tally('geometric')
    n = settings.truncation
    reference = families.logarithmic(0.5, n)
    for start in (0, 1):
        verdict = idanalysis.test_id(families.geometric(0.5, start, n), tol)
        form = verdict.canonical_form()
        expected_kind = IdIntegerComponents if start == 0 else IdShifted
        ok = (isinstance(verdict, expected_kind) and form is not None
              and abs(form.rate - math.log(2.0)) <= 1e-12
              and total_variation_distance(form.jump, reference).distance <= 1e-12)
        if start == 1:
            ok = ok and verdict.shift == 1
        tally.record(ok, f'geometric(0.5, start={start}): {verdict}')
    return tally.result()


def roundtrip(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # compose after factorize, exp after log, and power after root give back the law
    tol = settings.tolerances
    tally = _Tally('roundtrip')
    n = ROUNDTRIP_TRUNCATION
    for _ in progress(range(size), show_progress, desc='roundtrip'):
        form = random_form(rng, ROUNDTRIP_MAX_RATE, ROUNDTRIP_MAX_JUMP)
        p = idanalysis.compose(form, n, tol)
        order = int(rng.choice(ROOT_ORDERS))
        try:
            distances = {
                'compose(factorize)': total_variation_distance(
                    idanalysis.compose(idanalysis.factorize(p, tol), n, tol), p).distance,
                'exp_series(log_pgf)': total_variation_distance(exp_series(log_pgf(p, tol), tol), p).distance,
                f'power {order} of root': total_variation_distance(
                    convolve_power(idanalysis.convolution_root(p, order, tol), order), p).distance,
            }
        except IdLatticeError as e:
            tally.record(False, f'{_describe(form, tol)}: {e}')
            continue
        bad = {k: v for k, v in distances.items() if v > 1e-10}
        tally.record(not bad, f'{_describe(form, tol)}: {bad}')
    return tally.result()


def property1(rng: np.random.Generator, size: int, settings: Settings, show_progress: bool) -> SuiteResult:
    # Translates of ID laws are recognized as such, and the support moves with the shift
    tol = settings.tolerances
    tally = _Tally('property1')
    n = ROUNDTRIP_TRUNCATION
    for _ in progress(range(size), show_progress, desc='property1'):
        form = random_form(rng, ROUNDTRIP_MAX_RATE, ROUNDTRIP_MAX_JUMP)
        shift = int(rng.integers(1, 11))
        p = convolve(families.degenerate(shift, n), idanalysis.compose(form, n, tol))
        verdict = idanalysis.test_id(p, tol)
        found, moved = idanalysis.detect_shift(p, tol)
        ok = (isinstance(verdict, IdShifted) and verdict.shift == shift and found == shift
              and abs(verdict.inner.rate - form.rate) <= 1e-9 * form.rate
              and support_report(moved, tol=tol).atoms == [a - shift for a in support_report(p, tol=tol).atoms])
        tally.record(ok, f'{_describe(form, tol)}, shift {shift}: {verdict}')
    return tally.result()


Suite = Callable[[np.random.Generator, int, Settings, bool], SuiteResult]

SUITES: Dict[str, Suite] = {
    'theorem1': theorem1,
    'theorem2': theorem2,
    'theorem3': theorem3,
    'theorem4': theorem4,
    'theorem5': theorem5,
    'corollary3': corollary3,
    'remark1': remark1,
    'example1': example1,
    'example2': example2,
    'geometric': geometric,
    'roundtrip': roundtrip,
    'property1': property1,
}


def run_suites(names: Sequence[str], settings: Optional[Settings] = None, show_progress: bool = False
               ) -> List[SuiteResult]:
    """
    Runs the named suites, or every suite for the name "all". Each suite draws from its own random stream derived
    from settings.seed, so its instances do not depend on which other suites run.

    :raises IdLatticeError: on unknown suite names
    """
    settings = settings or Settings()
    if 'all' in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise IdLatticeError(f'Unknown suite(s) {", ".join(unknown)}. Known suites: {", ".join(SUITES)}, all')
    streams = dict(zip(SUITES, np.random.SeedSequence(settings.seed).spawn(len(SUITES))))
    results = []
    for name in names:
        rng = np.random.default_rng(streams[name])
        size = settings.sweep_sizes.get(name, 0)
        logger.debug('Running suite %s with %d random instances', name, size)
        results.append(SUITES[name](rng, size, settings, show_progress))
    return results
