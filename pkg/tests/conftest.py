import numpy as np
import pytest

from ssabank.signalgen import GenSpec, generate

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def two_sines(seed, n=1024, sigma=1.0):
    """2 sin(2 pi 0.1 n) + 4 sin(2 pi 0.4 n) + white noise."""
    spec = GenSpec("sinemix", n=n, amplitudes=(2, 4), frequencies=(0.1, 0.4), sigma=sigma, seed=seed)
    return generate(spec)


@pytest.fixture
def two_sine_signal():
    return two_sines(seed=0)
