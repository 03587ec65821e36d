from functools import lru_cache

import pytest
from hypothesis import settings

from cmcstab import core, spectrum

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def profile(kappa, H, n=2001):
    return core.generate_profile(kappa, H, n)


@lru_cache(maxsize=None)
def spec(kappa, H, n=2001, m_max=8):
    return spectrum.assemble_spectrum(profile(kappa, H, n), m_max=m_max)


@pytest.fixture
def get_profile():
    return profile


@pytest.fixture
def get_spectrum():
    return spec


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
