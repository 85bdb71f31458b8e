import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from idlattice.constructors import families
from idlattice.exceptions import AllMassInTail, DomainError, NotFactorizable, NotNormalized
from idlattice.idanalysis import idanalysis
from idlattice.idanalysis.verdict import (
    CompoundPoissonForm, Degenerate, IdIntegerComponents, IdShifted, Inconclusive, InconclusiveReason, NotId,
    VerdictKind,
)
from idlattice.pmfcore.pmf import Pmf, convolve, convolve_power, total_variation_distance
from idlattice.pmfcore.tolerances import Tolerances
from idlattice.seriestransforms.logseries import exp_series
from tests.strategies import compound_poisson_forms


class TestVerdicts:
    def test_poisson(self, poisson2):
        verdict = idanalysis.test_id(poisson2)
        assert isinstance(verdict, IdIntegerComponents)
        assert verdict.form.rate == pytest.approx(2.0, rel=1e-12)
        assert verdict.form.jump_atoms() == [1]
        assert verdict.form.jump.probs[1] == pytest.approx(1.0, abs=1e-12)
        assert verdict.is_infinitely_divisible

    def test_binomial_witness(self):
        verdict = idanalysis.test_id(families.binomial(2, 0.5))
        assert verdict == NotId(witness_index=2, witness_value=pytest.approx(-1.0, abs=1e-12), shift=0)
        assert not verdict.is_infinitely_divisible

    @pytest.mark.parametrize('p', [0.1, 0.5, 0.9])
    def test_bernoulli(self, p):
        verdict = idanalysis.test_id(families.binomial(1, p))
        assert isinstance(verdict, NotId)
        assert verdict.witness_index == 2
        assert verdict.witness_value == pytest.approx(-0.5 * (p / (1.0 - p)) ** 2, rel=1e-9)

    @pytest.mark.parametrize('q', [1e-8, 3e-5, 1e-6])
    def test_bernoulli_with_small_atom(self, q):
        verdict = idanalysis.test_id(Pmf([1.0 - q, q]))
        assert isinstance(verdict, NotId)
        assert verdict.witness_index == 2
        assert verdict.witness_value == pytest.approx(-0.5 * (q / (1.0 - q)) ** 2, rel=1e-6)

    def test_negative_coefficient_below_resolution(self):
        # l_2 = -5e-23 is far outside the rounding error, but the jump mass l_2 / lam = -5e-12 is above -negativity
        verdict = idanalysis.test_id(Pmf([1.0 - 1e-11, 1e-11]))
        assert isinstance(verdict, Inconclusive)
        assert verdict.reason == InconclusiveReason.BelowResolution
        assert not verdict.is_infinitely_divisible

    def test_loose_negativity_threshold(self):
        verdict = idanalysis.test_id(families.binomial(2, 0.5), Tolerances(negativity=10.0))
        assert verdict == Inconclusive(InconclusiveReason.BelowResolution, verdict.detail)

    def test_geometric_on_positive_integers(self):
        verdict = idanalysis.test_id(families.geometric(0.5, 1, 256))
        assert isinstance(verdict, IdShifted)
        assert verdict.shift == 1
        assert verdict.inner.rate == pytest.approx(math.log(2.0), abs=1e-12)
        reference = families.logarithmic(0.5, verdict.inner.jump.truncation)
        assert total_variation_distance(verdict.inner.jump, reference).distance <= 1e-12
        assert verdict.canonical_form() is verdict.inner

    def test_lattice_law_has_even_jumps(self, example1_pmf):
        verdict = idanalysis.test_id(example1_pmf)
        assert isinstance(verdict, IdIntegerComponents)
        atoms = verdict.form.jump_atoms()
        assert atoms[0] == 2
        assert all(a % 2 == 0 for a in atoms)

    def test_lattice_embedding_keeps_divisibility(self):
        verdict = idanalysis.test_id(families.lattice_embed(families.poisson(1.5, 100), 3))
        assert isinstance(verdict, IdIntegerComponents)
        assert verdict.form.jump_atoms() == [3]

    def test_point_mass(self):
        assert idanalysis.test_id(families.degenerate(4, 10)) == Degenerate(4)
        assert idanalysis.test_id(families.degenerate(0, 10)).is_infinitely_divisible

    def test_heavy_tail(self):
        verdict = idanalysis.test_id(families.poisson(5.0, 10))
        assert isinstance(verdict, Inconclusive)
        assert verdict.reason == InconclusiveReason.TailTooHeavy

    def test_truncation_too_short(self):
        verdict = idanalysis.test_id(Pmf([0.0, 0.5, 0.5 - 1e-7], 1e-7))
        assert verdict.kind == VerdictKind.Inconclusive
        assert verdict.reason == InconclusiveReason.TruncationTooShort

    def test_tiny_atom_at_zero(self):
        verdict = idanalysis.test_id(families.poisson(20.0, 256))
        assert isinstance(verdict, Inconclusive)
        assert verdict.reason == InconclusiveReason.ErrorAmplification

    def test_large_witness_survives_tiny_atom_at_zero(self):
        # P{X=0} = 1e-10, l_2 = -405
        verdict = idanalysis.test_id(families.binomial(10, 0.9))
        assert isinstance(verdict, NotId)
        assert verdict.witness_index == 2

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            idanalysis.test_id(Pmf([0.5, 0.3]))

    def test_finite_support_witness_beyond_truncation(self):
        # Law on {0, 3}: the first negative coefficient is l_6
        verdict = idanalysis.test_id(Pmf([0.5, 0.0, 0.0, 0.5]))
        assert isinstance(verdict, NotId)
        assert verdict.witness_index == 6

    def test_shifted_finite_law(self):
        verdict = idanalysis.test_id(Pmf([0.0, 0.0, 0.25, 0.5, 0.25]))
        assert isinstance(verdict, NotId)
        assert verdict.shift == 2
        assert verdict.witness_index == 2

    @given(compound_poisson_forms())
    def test_composed_laws_are_recognized(self, form):
        p = idanalysis.compose(form, 128)
        verdict = idanalysis.test_id(p)
        assert isinstance(verdict, IdIntegerComponents)
        assert verdict.form.rate == pytest.approx(form.rate, rel=1e-9)
        assert total_variation_distance(verdict.form.jump, form.jump).distance <= 1e-10


class TestFactorize:
    def test_poisson(self):
        form = idanalysis.factorize(families.poisson(3.0, 256))
        assert form.rate == pytest.approx(3.0, rel=1e-12)
        assert form.jump_atoms() == [1]

    def test_geometric(self):
        form = idanalysis.factorize(families.geometric(0.5, 0, 256))
        assert form.rate == pytest.approx(0.6931471805599453, abs=1e-12)
        assert form.jump.stored_mass() + form.jump.tail_bound == pytest.approx(1.0, abs=1e-12)
        m = np.arange(1, 257)
        np.testing.assert_allclose(form.jump.probs[1:], 0.5 ** m / (m * math.log(2.0)), rtol=1e-10, atol=1e-16)

    def test_point_mass_has_no_form(self):
        with pytest.raises(NotFactorizable) as e:
            idanalysis.factorize(families.degenerate(0, 10))
        assert e.value.verdict == Degenerate(0)

    def test_binomial_carries_witness(self):
        with pytest.raises(NotFactorizable) as e:
            idanalysis.factorize(families.binomial(2, 0.5))
        assert isinstance(e.value.verdict, NotId)

    @given(compound_poisson_forms())
    def test_compose_inverts_factorize(self, form):
        p = idanalysis.compose(form, 128)
        assert total_variation_distance(idanalysis.compose(idanalysis.factorize(p), 128), p).distance <= 1e-12


class TestCompose:
    def test_poisson(self):
        p = idanalysis.compose(CompoundPoissonForm(2.0, families.degenerate(1, 40)), 40)
        np.testing.assert_allclose(p.probs, stats.poisson.pmf(np.arange(41), 2.0), atol=1e-14)
        assert p.probs[0] == math.exp(-2.0)

    def test_logarithmic_jumps_give_geometric(self):
        form = CompoundPoissonForm(math.log(2.0), families.logarithmic(0.5, 60))
        p = idanalysis.compose(form, 60)
        np.testing.assert_allclose(p.probs, families.geometric(0.5, 0, 60).probs, atol=1e-12)

    def test_tail_is_the_deficit(self):
        p = idanalysis.compose(CompoundPoissonForm(2.0, families.degenerate(1, 10)), 10)
        assert p.tail_bound == pytest.approx(stats.poisson.sf(10, 2.0), rel=1e-9)

    @given(compound_poisson_forms())
    def test_agrees_with_exp_series(self, form):
        p = idanalysis.compose(form, 64)
        q = exp_series(form.log_series(64))
        np.testing.assert_allclose(p.probs, q.probs, atol=1e-14)


class TestCompoundPoissonForm:
    def test_rate_must_be_positive(self):
        with pytest.raises(DomainError):
            CompoundPoissonForm(0.0, families.degenerate(1, 5))

    def test_jump_law_has_no_mass_at_zero(self):
        with pytest.raises(DomainError, match='no mass at 0'):
            CompoundPoissonForm(1.0, Pmf([0.5, 0.5]))

    def test_jump_law_is_normalized(self):
        with pytest.raises(DomainError, match='not normalized'):
            CompoundPoissonForm(1.0, Pmf([0.0, 0.5]))

    def test_divided(self):
        form = CompoundPoissonForm(3.0, families.degenerate(2, 5)).divided(3)
        assert form.rate == pytest.approx(1.0)
        assert form.jump_atoms() == [2]

    def test_log_series(self):
        series = CompoundPoissonForm(2.0, Pmf([0.0, 0.25, 0.75])).log_series(4)
        np.testing.assert_array_equal(series.coeffs, [-2.0, 0.5, 1.5, 0.0, 0.0])


class TestConvolutionRoot:
    def test_first_root(self, poisson2):
        assert idanalysis.convolution_root(poisson2, 1) is poisson2

    def test_poisson(self):
        root = idanalysis.convolution_root(families.poisson(6.0, 256), 3)
        np.testing.assert_allclose(root.probs[:41], stats.poisson.pmf(np.arange(41), 2.0), atol=1e-12)

    def test_negative_binomial_cube_root(self):
        root = idanalysis.convolution_root(families.negbin_lattice(0.5, 1, 3.0, 256), 3)
        assert total_variation_distance(root, families.geometric(0.5, 0, 256)).distance <= 1e-12

    def test_order_must_be_positive(self, poisson2):
        with pytest.raises(DomainError):
            idanalysis.convolution_root(poisson2, 0)

    def test_binomial_has_no_root(self):
        with pytest.raises(NotFactorizable):
            idanalysis.convolution_root(families.binomial(3, 0.5), 2)

    @given(compound_poisson_forms(), st.sampled_from([2, 3, 5]))
    def test_power_of_root(self, form, n):
        p = idanalysis.compose(form, 128)
        root = idanalysis.convolution_root(p, n)
        assert total_variation_distance(convolve_power(root, n), p).distance <= 1e-10


class TestCandidateRoot:
    def test_exists_for_compound_poisson(self, poisson2):
        root = idanalysis.candidate_root(poisson2, 2)
        np.testing.assert_allclose(root.probs[:30], stats.poisson.pmf(np.arange(30), 1.0), atol=1e-12)

    def test_binomial_has_a_square_root_only(self):
        p = families.binomial(2, 0.5)
        root = idanalysis.candidate_root(p, 2)
        np.testing.assert_allclose(root.probs, [0.5, 0.5, 0.0], atol=1e-12)
        assert idanalysis.candidate_root(p, 3) is None

    def test_no_atom_at_zero(self):
        assert idanalysis.candidate_root(families.geometric(0.5, 1, 20), 2) is None


class TestDetectShift:
    def test_atom_at_zero(self):
        p = families.geometric(0.5, 0, 20)
        shift, shifted = idanalysis.detect_shift(p)
        assert shift == 0
        assert shifted is p

    def test_point_mass(self):
        shift, shifted = idanalysis.detect_shift(families.degenerate(5, 10))
        assert shift == 5
        np.testing.assert_array_equal(shifted.probs, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])

    def test_shifted_lattice_law(self, example1_pmf, example2_pmf):
        shift, shifted = idanalysis.detect_shift(example2_pmf)
        assert shift == 1
        np.testing.assert_array_equal(shifted.probs, example1_pmf.probs[:-1])

    def test_all_mass_in_tail(self):
        with pytest.raises(AllMassInTail):
            idanalysis.detect_shift(Pmf([0.0, 0.0], 1.0))

    @given(compound_poisson_forms(), st.integers(1, 10))
    def test_translates_are_recognized(self, form, shift):
        p = convolve(families.degenerate(shift, 128), idanalysis.compose(form, 128))
        verdict = idanalysis.test_id(p)
        assert isinstance(verdict, IdShifted)
        assert verdict.shift == shift
        assert verdict.inner.rate == pytest.approx(form.rate, rel=1e-9)
