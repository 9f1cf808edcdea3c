import numpy as np
import pytest
from hypothesis import settings

from markovpade import catalog, measures

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def polar():
    return catalog.polar_positive()


@pytest.fixture
def line_measure():
    """Lebesgue measure on [0, 1] along the first axis of the plane."""
    return catalog.segment_lebesgue()


@pytest.fixture
def zero2():
    return measures.DiscreteMeasure(2, 1.0, np.zeros((0, 2)), np.zeros(0))


def random_discrete(rng, d=2, max_atoms=5, R=1.0, signed=False):
    k = int(rng.integers(1, max_atoms + 1))
    raw = rng.normal(size=(k, d))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    pts = raw * (R * rng.uniform(0.0, 1.0, k) ** (1.0 / d))[:, None]
    w = rng.uniform(-1.0, 1.0, k) if signed else rng.uniform(0.1, 1.0, k)
    return measures.DiscreteMeasure(d, R, pts, w)


def random_unit(rng, d):
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
