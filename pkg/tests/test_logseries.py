import logging
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from idlattice.constructors import families
from idlattice.exceptions import ZeroAtOrigin
from idlattice.pmfcore.pmf import Pmf, convolve, convolve_power, total_variation_distance
from idlattice.seriestransforms.logseries import LogSeries, exp_series, log_pgf
from tests.strategies import pmfs


class TestLogPgf:
    def test_point_mass_at_zero(self):
        np.testing.assert_array_equal(log_pgf(families.degenerate(0, 8)).coeffs, np.zeros(9))

    def test_poisson(self):
        c = log_pgf(families.poisson(2.0, 40)).coeffs
        assert c[0] == pytest.approx(-2.0, abs=1e-14)
        assert c[1] == pytest.approx(2.0, abs=1e-13)
        np.testing.assert_allclose(c[2:], 0.0, atol=1e-13)

    def test_geometric(self):
        c = log_pgf(families.geometric(0.5, 0, 60)).coeffs
        m = np.arange(1, 61)
        assert c[0] == pytest.approx(math.log(0.5), abs=1e-15)
        np.testing.assert_allclose(c[1:], 0.5 ** m / m, rtol=1e-12, atol=1e-16)

    def test_binomial_hand_recursion(self):
        c = log_pgf(Pmf([0.25, 0.5, 0.25])).coeffs
        assert c[1] == pytest.approx(2.0, abs=1e-12)
        assert c[2] == pytest.approx(-1.0, abs=1e-12)

    def test_no_atom_at_zero_raises(self):
        with pytest.raises(ZeroAtOrigin):
            log_pgf(families.geometric(0.5, 1, 20))

    def test_small_atom_at_zero_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            log_pgf(Pmf([1e-9, 1.0 - 1e-9]))
        assert 'amplified' in caplog.text

    def test_keeps_tail_bound_and_origin_mass(self):
        p = families.poisson(1.0, 20)
        series = log_pgf(p)
        assert series.source_tail_bound == p.tail_bound
        assert series.origin_mass == p.probs[0]
        assert series.truncation == 20

    def test_error_estimate_of_moderate_rate(self):
        series = log_pgf(families.poisson(3.0, 100))
        err = series.error_estimate(np.arange(101))
        assert np.all(np.isfinite(err))
        assert err[1] > 0.0
        assert np.max(err) < 1e-9

    def test_error_estimate_scales_with_coefficients(self):
        # l_2 = -5e-17 is tiny in absolute terms but far outside its rounding error
        series = log_pgf(Pmf([1.0 - 1e-8, 1e-8]))
        assert series.coeffs[2] == pytest.approx(-5e-17, rel=1e-6)
        assert series.error_estimate(np.array([2]))[0] < 1e-6 * abs(series.coeffs[2])

    def test_error_estimate_of_large_rate_exceeds_threshold(self):
        # Rounding of the masses moves the coefficients by about eps * exp(2 * rate)
        series = log_pgf(families.poisson(20.0, 256))
        assert np.max(series.error_estimate(np.arange(257))) > 1.0

    def test_overflow_is_an_infinite_error(self):
        # Zero of the generating function at -1/99, coefficients grow like 99^m
        series = log_pgf(Pmf(np.concatenate([[0.01, 0.99], np.zeros(198)])))
        assert np.isinf(series.error_estimate(np.array([199]))[0])

    @given(pmfs(min_origin=0.6), pmfs(min_origin=0.6))
    def test_additive_under_convolution(self, p, q):
        both = log_pgf(convolve(p, q)).coeffs
        n = both.size
        np.testing.assert_allclose(both, (log_pgf(p).coeffs[:n] + log_pgf(q).coeffs[:n]), atol=1e-10)

    @given(pmfs(max_truncation=32, min_origin=0.6), st.integers(1, 5))
    def test_scales_under_powers(self, p, n):
        np.testing.assert_allclose(log_pgf(convolve_power(p, n)).coeffs, n * log_pgf(p).coeffs, atol=1e-10)


class TestLogSeries:
    def test_add_keeps_shorter_truncation(self):
        total = LogSeries([-1.0, 1.0, 0.0]) + LogSeries([-2.0, 2.0])
        np.testing.assert_array_equal(total.coeffs, [-3.0, 3.0])
        assert total.origin_mass == pytest.approx(math.exp(-3.0))

    def test_scaled(self):
        half = LogSeries([-2.0, 2.0]).scaled(0.5)
        np.testing.assert_array_equal(half.coeffs, [-1.0, 1.0])
        assert half.origin_mass == pytest.approx(math.exp(-2.0))

    def test_coefficients_are_read_only(self):
        with pytest.raises(ValueError):
            LogSeries([0.0, 1.0]).coeffs[1] = 2.0


class TestExpSeries:
    def test_zero_series(self):
        p = exp_series(LogSeries(np.zeros(6)))
        np.testing.assert_array_equal(p.probs, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
        assert p.tail_bound == 0.0

    def test_poisson(self):
        coeffs = np.zeros(41)
        coeffs[:2] = [-2.0, 2.0]
        p = exp_series(LogSeries(coeffs))
        np.testing.assert_allclose(p.probs, stats.poisson.pmf(np.arange(41), 2.0), atol=1e-14)
        assert p.is_normalized()

    @given(pmfs(max_truncation=128, min_origin=0.6))
    def test_inverts_log(self, p):
        assert total_variation_distance(exp_series(log_pgf(p)), p).distance <= 1e-12

    @given(pmfs(max_truncation=128, min_origin=0.01))
    def test_inverts_log_on_shared_indices(self, p):
        q = exp_series(log_pgf(p))
        assert q.truncation <= p.truncation
        np.testing.assert_allclose(q.probs, p.probs[:q.truncation + 1], atol=1e-9)

    @pytest.mark.parametrize('head', [[0.45, 0.55], [0.3, 0.7], [0.01, 0.99]])
    def test_alternating_series_is_cut(self, head):
        # Zero of the generating function inside the unit disc: l_m alternates and grows geometrically
        p = Pmf(np.concatenate([head, np.zeros(126)]))
        q = exp_series(log_pgf(p))
        assert 2 <= q.truncation < 128
        np.testing.assert_allclose(q.probs[:2], head, rtol=1e-12)
        np.testing.assert_allclose(q.probs[2:], 0.0, atol=1e-9)
        assert q.tail_bound < 1e-9

    def test_inverts_log_of_compound_poisson(self):
        p = families.negbin_lattice(0.3, 3, 2.5, 128)
        assert total_variation_distance(exp_series(log_pgf(p)), p).distance <= 1e-12
