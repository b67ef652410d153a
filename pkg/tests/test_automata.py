import itertools

import numpy as np
import pytest

from seedsens.automata import (
    BINARY,
    TERNARY,
    AlignmentAlphabet,
    Dfa,
    aho_corasick_hit_dfa,
    dump_dfa,
    equivalent,
    load_dfa,
    longest_accepted_length,
    minimize,
    product_intersection,
    trim_unreachable,
)
from seedsens.errors import InputError
from seedsens.seeds import SPACED, build_spi_automaton, parse_seed
from seedsens.sensitivity import target_all_words


def words(alphabet, n):
    return [w for w in itertools.product(range(len(alphabet)), repeat=n)]


def sigma_star(alphabet):
    return Dfa(alphabet, np.zeros((1, len(alphabet)), dtype=np.int64), 0, {0})


def contains_11():
    # 0: no trailing 1, 1: trailing 1, 2: seen 11
    return Dfa(BINARY, [[1, 0], [2, 0], [2, 2]], 0, {2})


def test_alphabet_validation():
    with pytest.raises(InputError):
        AlignmentAlphabet(("0", "h"))
    with pytest.raises(InputError):
        AlignmentAlphabet(("1", "1"))
    with pytest.raises(InputError):
        AlignmentAlphabet(("1", "0"), match_index=1)
    assert TERNARY.match_index == 0
    assert TERNARY.encode("1h0") == (0, 1, 2)
    assert TERNARY.decode((2, 1, 0)) == "0h1"


def test_multichar_symbols_are_whitespace_split():
    a = AlignmentAlphabet(("1", "ts", "tv"))
    assert a.encode("1 tv ts") == (0, 2, 1)
    assert a.decode((0, 2)) == "1 tv"


def test_dfa_rejects_incomplete_tables():
    with pytest.raises(InputError):
        Dfa(BINARY, [[0]], 0, set())
    with pytest.raises(InputError):
        Dfa(BINARY, [[0, 2]], 0, set())
    with pytest.raises(InputError):
        Dfa(BINARY, [[0, 0]], 1, set())


def test_product_with_sigma_star_is_identity():
    t = target_all_words(BINARY, 2)
    p = product_intersection(t, sigma_star(BINARY))
    accepted = {w for n in range(5) for w in words(BINARY, n) if p.accepts(w)}
    assert accepted == set(words(BINARY, 2))
    assert p.num_states == t.num_states


def test_product_with_empty_language_has_no_finals():
    empty = Dfa(BINARY, [[0, 0]], 0, set())
    p = product_intersection(target_all_words(BINARY, 3), empty)
    assert not p.finals


def test_product_target_and_seed():
    p = product_intersection(target_all_words(BINARY, 3), build_spi_automaton(parse_seed("##", SPACED)))
    accepted = {BINARY.decode(w) for w in words(BINARY, 3) if p.accepts(w)}
    assert accepted == {"111", "110", "011"}
    assert p.num_states <= 5 * 3


def test_product_alphabet_mismatch():
    with pytest.raises(InputError):
        product_intersection(sigma_star(BINARY), sigma_star(TERNARY))


def test_minimize_contains_11():
    redundant = Dfa(BINARY, [[1, 2], [3, 0], [1, 2], [4, 4], [3, 3], [0, 0]], 0, {3, 4})
    m = minimize(redundant)
    assert m.num_states == 3
    assert equivalent(m, contains_11())
    assert minimize(contains_11()).num_states == 3


def test_minimize_is_idempotent_and_canonical():
    d = build_spi_automaton(parse_seed("#_##_#", SPACED))
    m = minimize(d)
    mm = minimize(m)
    assert mm.num_states == m.num_states
    assert np.array_equal(mm.delta, m.delta) and mm.finals == m.finals
    assert equivalent(d, m)


def test_trim_unreachable():
    d = Dfa(BINARY, [[0, 0], [1, 0]], 0, {1})
    t = trim_unreachable(d)
    assert t.num_states == 1 and not t.finals


def test_equivalent():
    d = contains_11()
    assert equivalent(d, d)
    assert not equivalent(target_all_words(BINARY, 2), target_all_words(BINARY, 3))


def test_aho_corasick_two_patterns():
    d = aho_corasick_hit_dfa(["111", "101"], BINARY)
    assert d.num_states == 5
    assert equivalent(d, build_spi_automaton(parse_seed("#_#", SPACED)))
    for n in range(7):
        for w in words(BINARY, n):
            s = BINARY.decode(w)
            assert d.accepts(w) == ("111" in s or "101" in s)


def test_aho_corasick_single_symbol():
    d = aho_corasick_hit_dfa(["1"], BINARY)
    assert d.num_states == 2
    assert d.accepts("001") and not d.accepts("000")


def test_aho_corasick_pattern_containing_another():
    # 11 is a factor of 111, so the longer pattern adds nothing
    d = aho_corasick_hit_dfa(["11", "111"], BINARY)
    assert d.num_states == 3
    assert equivalent(d, contains_11())


def test_aho_corasick_errors():
    with pytest.raises(InputError):
        aho_corasick_hit_dfa([], BINARY)
    with pytest.raises(InputError):
        aho_corasick_hit_dfa([""], BINARY)


def test_longest_accepted_length():
    assert longest_accepted_length(target_all_words(TERNARY, 7)) == 7
    with pytest.raises(InputError):
        longest_accepted_length(contains_11())


def test_dump_format_is_golden():
    d = build_spi_automaton(parse_seed("##", SPACED))
    assert dump_dfa(d) == (
        "states 3\n"
        "initial 0\n"
        "finals 2\n"
        "0 1 1\n0 0 0\n"
        "1 1 2\n1 0 0\n"
        "2 1 2\n2 0 2\n"
    )
    back = load_dfa(dump_dfa(d), BINARY)
    assert np.array_equal(back.delta, d.delta) and back.finals == d.finals
