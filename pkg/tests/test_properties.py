import itertools

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from seedsens.automata import BINARY, TERNARY, Dfa, aho_corasick_hit_dfa, equivalent, minimize, product_intersection
from seedsens.oracle import hits
from seedsens.probmodel import all_words, language_probability
from seedsens.seeds import DNA_SUBSET, SPACED, build_spi_automaton, matched_fragments, parse_seed
from seedsens.sensitivity import path_weight_trace, pw_product, sensitivity, target_all_words

from conftest import random_transducer

WORDS_UP_TO_8 = [w for n in range(9) for w in itertools.product(range(2), repeat=n)]


@st.composite
def dfas(draw, alphabet=BINARY, max_states=5):
    n = draw(st.integers(1, max_states))
    delta = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=len(alphabet), max_size=len(alphabet)), min_size=n, max_size=n))
    finals = draw(st.sets(st.integers(0, n - 1)))
    return Dfa(alphabet, np.array(delta), 0, finals)


def seeds(letters="#@_", max_span=6):
    sa = SPACED if letters == "#_" else DNA_SUBSET
    text = st.text(alphabet=letters, min_size=1, max_size=max_span)
    return text.map(lambda t: parse_seed(t, sa))


@given(dfas(), dfas())
def test_product_is_intersection(a, b):
    p = product_intersection(a, b)
    assert p.num_states <= a.num_states * b.num_states
    for w in WORDS_UP_TO_8:
        assert p.accepts(w) == (a.accepts(w) and b.accepts(w))


@given(dfas(max_states=7))
def test_minimize_preserves_language(d):
    m = minimize(d)
    assert m.num_states <= d.num_states
    assert equivalent(d, m)
    assert minimize(m).num_states == m.num_states
    for w in WORDS_UP_TO_8[:200]:
        assert m.accepts(w) == d.accepts(w)


@given(seeds())
def test_spi_equals_aho_corasick_and_bounds(seed):
    spi = build_spi_automaton(seed)
    ac = aho_corasick_hit_dfa(matched_fragments(seed), seed.alphabet)
    assert equivalent(spi, ac)
    assert minimize(spi).num_states <= spi.num_states <= ac.num_states
    assert spi.num_states <= (seed.w_count + 1) * 2**seed.r
    assert spi.accepts((seed.alphabet.match_index,) * seed.span)


@given(seeds("#_", 5))
def test_spi_agrees_with_sliding_window(seed):
    spi = build_spi_automaton(seed)
    for w in WORDS_UP_TO_8:
        assert spi.accepts(w) == hits(seed, w)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 6))
def test_language_of_all_words_has_probability_one(seed, states, n):
    g = random_transducer(TERNARY, states, np.random.default_rng(seed))
    assert abs(language_probability(g, all_words(TERNARY, n)) - 1.0) <= 1e-9


@given(st.integers(0, 2**32 - 1), seeds(max_span=5), st.integers(1, 20))
def test_mass_is_conserved(rng_seed, seed, n):
    g = random_transducer(TERNARY, 3, np.random.default_rng(rng_seed))
    k = product_intersection(target_all_words(TERNARY, n), build_spi_automaton(seed))
    assert path_weight_trace(pw_product(k, g), n).conservation_error <= 1e-9


@given(st.integers(0, 2**32 - 1), seeds(max_span=5), st.integers(1, 12))
def test_sensitivity_grows_with_length(rng_seed, seed, n):
    g = random_transducer(TERNARY, 2, np.random.default_rng(rng_seed))
    assert sensitivity(seed, n + 1, g) >= sensitivity(seed, n, g) - 1e-12


WIDER = {"#": "@", "@": "_"}


@given(st.integers(0, 2**32 - 1), seeds(max_span=5), st.data())
def test_wider_letter_never_hurts(rng_seed, seed, data):
    positions = [i for i, c in enumerate(seed.glyphs) if c in WIDER]
    if not positions:
        return
    i = data.draw(st.sampled_from(positions))
    wider = parse_seed(seed.glyphs[:i] + WIDER[seed.glyphs[i]] + seed.glyphs[i + 1 :], DNA_SUBSET)
    g = random_transducer(TERNARY, 2, np.random.default_rng(rng_seed))
    assert sensitivity(wider, 10, g) >= sensitivity(seed, 10, g) - 1e-12
