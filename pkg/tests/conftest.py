import pytest
from hypothesis import HealthCheck, settings

from idlattice.constructors import families
from idlattice.settings import Settings


settings.register_profile('idlattice', deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('idlattice')


@pytest.fixture
def small_settings() -> Settings:
    # Few random instances per suite, fixed seed
    return Settings(seed=20240611, sweep_sizes={name: 12 for name in (
        'theorem1', 'theorem2', 'theorem3', 'theorem4', 'theorem5', 'corollary3', 'remark1', 'roundtrip', 'property1',
    )})


@pytest.fixture
def poisson2():
    return families.poisson(2.0, 256)


@pytest.fixture
def example1_pmf():
    return families.negbin_lattice(0.5, 2, 1.0, 256)


@pytest.fixture
def example2_pmf():
    return families.shifted_negbin_lattice(0.5, 2, 1.0, 256)
