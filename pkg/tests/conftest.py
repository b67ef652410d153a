import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from seedsens.automata import BINARY, TERNARY
from seedsens.probmodel import ProbTransducer, bernoulli, markov

settings.register_profile("seedsens", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("seedsens")


def random_transducer(alphabet, num_states, rng, density=0.6):
    """Stochastic, generally nondeterministic transducer with random weights."""
    k = len(alphabet)
    trans = []
    for q in range(num_states):
        w = rng.random((k, num_states)) * (rng.random((k, num_states)) < density)
        w[rng.integers(k), rng.integers(num_states)] += 0.05
        w /= w.sum()
        for a in range(k):
            for d in range(num_states):
                if w[a, d] > 0:
                    trans.append((q, a, d, float(w[a, d])))
    return ProbTransducer(alphabet, num_states, 0, tuple(trans))


def two_state_nondet(alphabet):
    """Two-state transducer with several paths per word."""
    k = len(alphabet)
    base = np.linspace(2.0, 1.0, k)
    trans = []
    for q, tilt in ((0, 0.6), (1, 0.35)):
        weights = base / base.sum()
        for a in range(k):
            trans.append((q, a, 0, float(weights[a] * tilt)))
            trans.append((q, a, 1, float(weights[a] * (1 - tilt))))
    return ProbTransducer(alphabet, 2, 0, tuple(trans))


def markov1(alphabet):
    k = len(alphabet)
    table = {(): [0.7] + [0.3 / (k - 1)] * (k - 1)}
    for i, s in enumerate(alphabet.symbols):
        p_match = 0.8 if i == alphabet.match_index else 0.5
        table[(s,)] = [p_match] + [(1 - p_match) / (k - 1)] * (k - 1)
    return markov(alphabet, 1, table)


@pytest.fixture
def b07():
    return bernoulli(BINARY, {"1": 0.7, "0": 0.3})


@pytest.fixture
def b721():
    return bernoulli(TERNARY, {"1": 0.7, "h": 0.2, "0": 0.1})


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
