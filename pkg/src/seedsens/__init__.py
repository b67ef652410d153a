"""Sensitivity of spaced and subset seeds via automata products."""

from .automata import (
    BINARY,
    TERNARY,
    AlignmentAlphabet,
    Dfa,
    aho_corasick_hit_dfa,
    dump_dfa,
    equivalent,
    load_dfa,
    minimize,
    product_intersection,
)
from .design import EnumSpec, SeedScore, StatsRow, automaton_stats, best_seed, count_seeds, enumerate_seeds
from .errors import InputError, InvariantError, ResourceLimitError, SeedSensError
from .oracle import brute_force_sensitivity, hits
from .probmodel import (
    ProbTransducer,
    bernoulli,
    hmm,
    language_probability,
    markov,
    parse_model,
    validate,
    word_probability,
)
from .seeds import (
    DNA_SUBSET,
    SPACED,
    Seed,
    SeedAlphabet,
    SeedLetter,
    build_spi_automaton,
    matched_fragments,
    parse_seed,
    parse_seed_alphabet,
)
from .sensitivity import (
    PwAutomaton,
    SensitivityResult,
    compute_sensitivity,
    path_weight_dp,
    pw_product,
    sensitivity,
    target_all_words,
)

__version__ = "0.1.0"
