import itertools
import math

import numpy as np
import pytest

from seedsens.automata import BINARY, TERNARY, AlignmentAlphabet
from seedsens.errors import InputError
from seedsens.probmodel import (
    ProbTransducer,
    all_words,
    bernoulli,
    dumps,
    hmm,
    language_probability,
    load,
    loads,
    markov,
    parse_model,
    symbol_marginals,
    validate,
    word_probability,
)

from conftest import markov1, random_transducer, two_state_nondet


def test_bernoulli(b07):
    assert validate(b07) == []
    assert b07.num_states == 1 and len(b07.transitions) == 2
    assert b07.deterministic


def test_bernoulli_drops_zero_symbols():
    g = bernoulli(BINARY, {"1": 1.0})
    assert len(g.transitions) == 1
    assert word_probability(g, "111") == 1.0
    assert word_probability(g, "101") == 0.0


def test_bernoulli_ternary(b721):
    assert len(b721.transitions) == 3


def test_bernoulli_bad_sum():
    with pytest.raises(InputError):
        bernoulli(BINARY, [0.7, 0.2])
    with pytest.raises(InputError):
        bernoulli(BINARY, [1.2, -0.2])


def test_validate_reports_row_sum():
    g = ProbTransducer(BINARY, 1, 0, ((0, 0, 0, 0.6), (0, 1, 0, 0.3)))
    assert validate(g) == ["state 0 sums to 0.9"]


def test_validate_tolerance_boundary():
    g = ProbTransducer(BINARY, 1, 0, ((0, 0, 0, 0.7), (0, 1, 0, 0.2999999995)))
    assert validate(g) == []


def test_validate_duplicate_triple():
    g = ProbTransducer(BINARY, 1, 0, ((0, 0, 0, 0.5), (0, 0, 0, 0.2), (0, 1, 0, 0.3)))
    assert any("duplicate" in p for p in validate(g))


def test_transducer_rejects_bad_probabilities():
    with pytest.raises(InputError):
        ProbTransducer(BINARY, 1, 0, ((0, 0, 0, 0.0),))
    with pytest.raises(InputError):
        ProbTransducer(BINARY, 1, 0, ((0, 0, 1, 1.0),))


def test_markov_order_zero_is_bernoulli():
    m = markov(BINARY, 0, {"": [0.7, 0.3]})
    b = bernoulli(BINARY, [0.7, 0.3])
    assert m.transitions == b.transitions


def test_markov_binary_order_one():
    g = markov(BINARY, 1, {"": {"1": 0.7, "0": 0.3}, "1": {"1": 0.8, "0": 0.2}, "0": {"1": 0.5, "0": 0.5}})
    assert g.deterministic
    assert word_probability(g, "11") == pytest.approx(0.56, abs=1e-15)
    assert word_probability(g, "101") == pytest.approx(0.7 * 0.2 * 0.5)


def test_markov_ternary_state_count():
    assert markov1(TERNARY).num_states <= 4


def test_markov_missing_context():
    with pytest.raises(InputError, match="'0'"):
        markov(BINARY, 1, {"": [0.5, 0.5], "1": [0.5, 0.5]})


def test_nondeterministic_paths_add_up():
    # two paths labelled 10: 0 -1-> 0 -0-> 0 (0.2 * 0.3) and 0 -1-> 1 -0-> 1 (0.5 * 0.08)
    g = ProbTransducer(
        BINARY, 2, 0,
        ((0, 0, 0, 0.2), (0, 0, 1, 0.5), (0, 1, 0, 0.3), (1, 1, 1, 0.08), (1, 0, 1, 0.92)),
    )
    assert validate(g) == []
    assert not g.deterministic
    assert word_probability(g, "10") == pytest.approx(0.10, abs=1e-15)


def test_empty_word_has_probability_one(b07):
    assert word_probability(b07, "") == 1.0


def test_language_probability(b07):
    assert language_probability(b07, all_words(BINARY, 2)) == pytest.approx(1.0, abs=1e-15)
    assert language_probability(b07, ["11", "10"]) == pytest.approx(0.70)
    assert language_probability(b07, ["111", "110", "011"]) == pytest.approx(0.637, abs=1e-15)


@pytest.mark.parametrize("n", range(11))
def test_stochastic_closure(n):
    rng = np.random.default_rng(n)
    for g in (bernoulli(BINARY, [0.6, 0.4]), markov1(BINARY), two_state_nondet(BINARY), random_transducer(BINARY, 3, rng)):
        assert abs(language_probability(g, all_words(BINARY, n)) - 1.0) <= 1e-9


def test_word_probability_matches_path_enumeration():
    rng = np.random.default_rng(7)
    g = random_transducer(TERNARY, 4, rng)
    out = {}
    for s, a, d, p in g.transitions:
        out.setdefault((s, a), []).append((d, p))
    for n in range(5):
        for w in itertools.product(range(3), repeat=n):
            paths = [(g.initial, 1.0)]
            for a in w:
                paths = [(d, p * q) for s, p in paths for d, q in out.get((s, a), [])]
            assert word_probability(g, w) == pytest.approx(math.fsum(p for _, p in paths), abs=1e-15)


def test_hmm_builder():
    g = hmm(BINARY, [0.5, 0.5], [[0.9, 0.1], [0.2, 0.8]], [[0.8, 0.2], [0.4, 0.6]])
    assert g.num_states == 3 and not g.deterministic
    assert word_probability(g, "1") == pytest.approx(0.5 * 0.8 + 0.5 * 0.4)


def test_file_format_roundtrip_is_bit_exact(tmp_path):
    g = random_transducer(TERNARY, 3, np.random.default_rng(3))
    text = dumps(g)
    assert text.splitlines()[:4] == ["alphabet 1 h 0", "match 1", "states 3", "initial 0"]
    again = loads(text)
    assert again.transitions == g.transitions
    path = tmp_path / "m.txt"
    path.write_text("# comment line\n" + text.replace("initial 0", "initial 0  # start"))
    assert load(path).transitions == g.transitions


def test_loader_rejects_bad_files():
    with pytest.raises(InputError, match="sums to"):
        loads("alphabet 1 0\nstates 1\ninitial 0\ntrans 0 1 0 0.5\n")
    with pytest.raises(InputError, match="unknown symbol"):
        loads("alphabet 1 0\nstates 1\ninitial 0\ntrans 0 h 0 1.0\n")
    with pytest.raises(InputError, match="initial"):
        loads("alphabet 1 0\nstates 1\ntrans 0 1 0 1.0\n")
    with pytest.raises(InputError):
        loads("alphabet 1 0\nstates x\n")


def test_parse_model_shorthand(tmp_path):
    assert parse_model("bernoulli:0.7,0.3").alphabet == BINARY
    assert parse_model("bernoulli:0.7,0.2,0.1").alphabet == TERNARY
    with pytest.raises(InputError):
        parse_model("bernoulli:0.7,x")
    with pytest.raises(InputError):
        parse_model(str(tmp_path / "missing.txt"))


def test_symbol_marginals(b721):
    m = symbol_marginals(b721, 3)
    assert np.allclose(m, [[0.7, 0.2, 0.1]] * 3)


def test_custom_alphabet_names():
    a = AlignmentAlphabet(("1", "ts", "tv"))
    g = bernoulli(a, {"1": 0.7, "ts": 0.2, "tv": 0.1})
    assert word_probability(g, "1 ts") == pytest.approx(0.14)
    assert loads(dumps(g)).alphabet == a
