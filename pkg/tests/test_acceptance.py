"""
Full-size verification sweeps with the default instance counts. Run with `pytest -m slow`.
"""
import pytest

from idlattice.settings import Settings
from idlattice.verification.theorems import SUITES, run_suites


pytestmark = pytest.mark.slow


@pytest.fixture(scope='module')
def full_settings() -> Settings:
    return Settings(seed=1)


@pytest.mark.parametrize('name', list(SUITES))
def test_sweep(name, full_settings):
    result, = run_suites([name], full_settings)
    assert result.passed, result.failures
    assert result.checked >= full_settings.sweep_sizes.get(name, 0)
