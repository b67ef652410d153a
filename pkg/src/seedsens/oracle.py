"""Brute-force reference for seed sensitivity.

Enumerates every alignment of length ``n``, tests for a hit by sliding the
seed over the word, and weights each word by its transducer probability.
Nothing here goes through the automata of :mod:`seedsens.automata`.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import InputError, ResourceLimitError
from .probmodel import ProbTransducer
from .seeds import Seed

DEFAULT_WORD_CAP = 2**24
_BLOCK = 2**16


def hits(seed: Seed, word) -> bool:
    """Whether some length-``span`` factor of ``word`` is matched letter by letter."""
    w = seed.alphabet.encode(word)
    m = seed.span
    subsets = [l.subset for l in seed.letters]
    for i in range(len(w) - m + 1):
        if all(w[i + j] in subsets[j] for j in range(m)):
            return True
    return False


def hit_mask(seed: Seed, words: np.ndarray) -> np.ndarray:
    """Vectorized :func:`hits` over the rows of an integer word matrix."""
    words = np.asarray(words)
    n = words.shape[1]
    m = seed.span
    allowed = np.zeros((m, len(seed.alphabet)), dtype=bool)
    for j, letter in enumerate(seed.letters):
        allowed[j, list(letter.subset)] = True
    out = np.zeros(len(words), dtype=bool)
    for i in range(n - m + 1):
        ok = np.ones(len(words), dtype=bool)
        for j in range(m):
            ok &= allowed[j, words[:, i + j]]
        out |= ok
    return out


def _suffix_block(k: int, length: int) -> np.ndarray:
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(k), repeat=length)), dtype=np.int64)


def brute_force_sensitivity(
    seed: Seed, n: int, g: ProbTransducer, cap: int = DEFAULT_WORD_CAP
) -> float:
    """Hit probability over all ``|A|**n`` words, normalized by their total."""
    num, den = brute_force_probabilities(seed, n, g, cap)
    if den <= 0:
        raise InputError("target language has zero probability")
    return num / den


def brute_force_probabilities(
    seed: Seed, n: int, g: ProbTransducer, cap: int = DEFAULT_WORD_CAP
) -> tuple[float, float]:
    """``(P(hit words of length n), P(all words of length n))``."""
    if seed.alphabet != g.alphabet:
        raise InputError("seed and model use different alphabets")
    if n < 1:
        raise InputError("n must be >= 1")
    k = len(g.alphabet)
    if k**n > cap:
        raise ResourceLimitError(f"{k}**{n} words exceed the enumeration cap {cap}")
    suffix_len = min(n, max(1, int(np.log(_BLOCK) / np.log(k))))
    prefix_len = n - suffix_len
    suffix = _suffix_block(k, suffix_len)
    P = g.matrices
    num = den = 0.0
    for prefix in itertools.product(range(k), repeat=prefix_len):
        v = np.zeros(g.num_states)
        v[g.initial] = 1.0
        for a in prefix:
            v = v @ P[a]
        # forward vectors of every extension, in lexicographic word order
        V = v[None, :]
        for _ in range(suffix_len):
            V = np.einsum("ig,agh->iah", V, P).reshape(-1, g.num_states)
        prob = V.sum(axis=1)
        words = np.hstack([np.broadcast_to(np.array(prefix, dtype=np.int64), (len(suffix), prefix_len)), suffix])
        mask = hit_mask(seed, words)
        num += float(prob[mask].sum())
        den += float(prob.sum())
    return num, den
