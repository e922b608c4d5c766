import numpy as np
import pytest

from aitgibbs.spectrum import LengthSpectrum

# (criterion, passed, detail) rows filled by test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def random_spectrum(rng, m_min=1, m_max=10, lo=0.1, hi=100.0, mults=False):
    m = int(rng.integers(m_min, m_max + 1))
    while True:
        lengths = rng.uniform(lo, hi, size=m)
        if np.unique(lengths).size == m:
            break
    mult = rng.uniform(1.0, 5.0, size=m) if mults else np.ones(m)
    return LengthSpectrum.from_entries(lengths, mult)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def two():
    return LengthSpectrum.from_entries([1, 2])


@pytest.fixture
def three():
    return LengthSpectrum.from_entries([1, 2, 3])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
