import numpy as np
import pytest

from thrustjet.events import Event, GeneratorConfig, generate_dijet_event

# one line per acceptance criterion, filled in by tests/test_acceptance.py
# and echoed after the run so the gate is visible without -s
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def toy_events(n_events, n_min, n_max, smear=0.6, seed=0):
    cfg = GeneratorConfig(n_min=n_min, n_max=n_max, transverse_smear=smear, rng_seed=seed)
    return [generate_dijet_event(cfg, i) for i in range(n_events)]


def back_to_back(p=5.0):
    return Event(0, np.array([[0.0, 0.0, p], [0.0, 0.0, -p]]))


def threefold_planar(p=3.0):
    angles = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
    return Event(
        1, np.stack([p * np.cos(angles), p * np.sin(angles), np.zeros(3)], axis=1)
    )


def fourfold_planar(p=2.0):
    return Event(
        2, np.array([[p, 0, 0], [-p, 0, 0], [0, p, 0], [0, -p, 0]], dtype=float)
    )


@pytest.fixture(scope="session")
def small_events():
    return toy_events(30, 4, 14, seed=101)


@pytest.fixture(scope="session")
def medium_events():
    return toy_events(10, 15, 30, seed=202)
