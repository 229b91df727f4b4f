import numpy as np
import pytest

from lqdepth import DataCloud

# (label, passed, detail) triples filled in by tests/test_acceptance.py
ACCEPTANCE = []


def random_cloud(seed, n=30, d=2, skew=True):
    """Gaussian cloud pushed through a random linear map so it is not isotropic."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, d))
    if skew:
        pts = pts @ rng.standard_normal((d, d)) + rng.standard_normal(d)
    return DataCloud(pts)


@pytest.fixture
def line3():
    return DataCloud([[0.0], [1.0], [2.0]])


@pytest.fixture
def line2():
    return DataCloud([[0.0], [1.0]])


@pytest.fixture
def acceptance():
    def record(label, passed, detail=""):
        ACCEPTANCE.append((label, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status} {label}  {detail}".rstrip())


@pytest.fixture
def make_cloud():
    return random_cloud
