import numpy as np
import pytest

from ucceval.data import from_arrays

# hand-checked four-record fixture; critical scales {1, 2, 1, 0}
T1 = dict(y=[1.0, 2.0, -0.5, 0.0], y_hat=[0.0, 0.0, 0.0, 0.0],
          z_lower=[1.0, 1.0, 0.5, 2.0], z_upper=[1.0, 1.0, 0.5, 2.0])


@pytest.fixture
def t1():
    return from_arrays(**T1, name="t1")


def random_dataset(rng, n, symmetric=False, zero_error_frac=0.0):
    y_hat = rng.normal(size=n)
    y = y_hat + rng.normal(scale=rng.uniform(0.2, 2.0), size=n)
    if zero_error_frac:
        y = np.where(rng.random(n) < zero_error_frac, y_hat, y)
    zl = rng.uniform(0.05, 2.0, n)
    zu = zl.copy() if symmetric else rng.uniform(0.05, 2.0, n)
    return from_arrays(y, y_hat, zl, zu)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
