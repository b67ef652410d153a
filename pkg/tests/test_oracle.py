import numpy as np
import pytest

from seedsens.automata import BINARY
from seedsens.errors import InputError, ResourceLimitError
from seedsens.oracle import brute_force_probabilities, brute_force_sensitivity, hit_mask, hits
from seedsens.seeds import DNA_SUBSET, SPACED, parse_seed

from conftest import two_state_nondet


def test_hits():
    assert hits(parse_seed("#_#", SPACED), "0101")
    assert not hits(parse_seed("##", SPACED), "1010")
    assert hits(parse_seed("#@#"), "1h1")
    assert not hits(parse_seed("#@#"), "101")
    assert not hits(parse_seed("###", SPACED), "11")


def test_hit_mask_agrees_with_hits():
    seed = parse_seed("#@_#")
    rng = np.random.default_rng(0)
    words = rng.integers(0, 3, size=(300, 9))
    mask = hit_mask(seed, words)
    assert mask.tolist() == [hits(seed, w.tolist()) for w in words]


@pytest.mark.parametrize("text,n,expected", [("#", 2, 0.91), ("##", 3, 0.637), ("#_#", 4, 0.7399)])
def test_brute_force_examples(b07, text, n, expected):
    assert brute_force_sensitivity(parse_seed(text, SPACED), n, b07) == pytest.approx(expected, abs=1e-14)


def test_denominator_is_one():
    g = two_state_nondet(BINARY)
    _, den = brute_force_probabilities(parse_seed("#_#", SPACED), 12, g)
    assert den == pytest.approx(1.0, abs=1e-9)


def test_cap_and_errors(b07, b721):
    with pytest.raises(ResourceLimitError):
        brute_force_sensitivity(parse_seed("##", SPACED), 30, b07)
    with pytest.raises(InputError):
        brute_force_sensitivity(parse_seed("##", SPACED), 4, b721)
    with pytest.raises(InputError):
        brute_force_sensitivity(parse_seed("##", SPACED), 0, b07)
