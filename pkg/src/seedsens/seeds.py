"""Subset seeds and their automata.

A seed is a word over a seed alphabet; each seed letter stands for a set of
alignment symbols that always includes the match ``1``.  A seed of span
``m`` hits an alignment when some length-``m`` factor has, at every
position, a symbol belonging to the corresponding letter.

``build_spi_automaton`` builds the compact hit automaton whose states are
pairs ``<X, t>``: ``t`` is the length of the current run of matches and
``X`` collects the seed positions ``x`` such that the prefix of the seed of
length ``x`` matches the alignment up to the symbol just before that run.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .automata import BINARY, TERNARY, AlignmentAlphabet, Dfa
from .errors import InputError, InvariantError, ResourceLimitError

DEFAULT_FRAGMENT_CAP = 2**20

_GLYPH_WEIGHTS = {"#": 1.0, "@": 0.5, "_": 0.0}


@dataclass(frozen=True)
class SeedLetter:
    glyph: str
    subset: frozenset[int]
    weight: float

    def __post_init__(self):
        if len(self.glyph) != 1 or self.glyph.isspace():
            raise InputError(f"seed glyph must be one printable character, got {self.glyph!r}")
        if not self.subset:
            raise InputError(f"seed letter {self.glyph!r} has an empty symbol set")


@dataclass(frozen=True)
class SeedAlphabet:
    alphabet: AlignmentAlphabet
    letters: tuple[SeedLetter, ...]

    def __post_init__(self):
        glyphs = [l.glyph for l in self.letters]
        if len(set(glyphs)) != len(glyphs):
            raise InputError(f"duplicate seed glyphs in {''.join(glyphs)!r}")
        match = self.alphabet.match_index
        for letter in self.letters:
            if match not in letter.subset:
                raise InputError(f"seed letter {letter.glyph!r} does not contain the match symbol")
            if any(not 0 <= a < len(self.alphabet) for a in letter.subset):
                raise InputError(f"seed letter {letter.glyph!r} uses unknown symbols")
        sharp = self.get("#")
        if sharp is None or sharp.subset != frozenset([match]):
            raise InputError("seed alphabet needs a letter '#' matching exactly {1}")

    def get(self, glyph: str) -> SeedLetter | None:
        for letter in self.letters:
            if letter.glyph == glyph:
                return letter
        return None

    @property
    def glyphs(self) -> str:
        return "".join(l.glyph for l in self.letters)

    def describe(self) -> str:
        """Round-trippable specification string, e.g. ``#=1;@=1h;_=1h0``."""
        syms = self.alphabet.symbols
        sep = "" if all(len(s) == 1 for s in syms) else ","
        items = []
        for letter in self.letters:
            body = sep.join(syms[a] for a in sorted(letter.subset))
            item = f"{letter.glyph}={body}"
            if letter.weight != _default_weight(letter.glyph, letter.subset, self.alphabet):
                item += f":{letter.weight:g}"
            items.append(item)
        return ";".join(items)


def _default_weight(glyph: str, subset: frozenset[int], alphabet: AlignmentAlphabet) -> float:
    if glyph in _GLYPH_WEIGHTS:
        return _GLYPH_WEIGHTS[glyph]
    if len(subset) == 1:
        return 1.0
    if len(subset) == len(alphabet):
        return 0.0
    return 0.5


def _split_symbols(body: str, known: list[str] | None) -> list[str]:
    if "," in body:
        return [s.strip() for s in body.split(",") if s.strip()]
    if known is not None and any(len(s) > 1 for s in known):
        if body in known:
            return [body]
        raise InputError(f"ambiguous symbol list {body!r}; separate symbols with commas")
    return list(body)


def parse_seed_alphabet(text: str, alphabet: AlignmentAlphabet | None = None) -> SeedAlphabet:
    """Parse ``glyph=symbols`` items separated by ``;`` or a preset name.

    Presets: ``spaced`` (``#=1;_=10``) and ``dna-subset``
    (``#=1;@=1h;_=1h0``).  An item may carry an explicit design weight as
    ``glyph=symbols:weight``.  Without ``alphabet``, the alignment alphabet
    is made of the symbols in order of first appearance.
    """
    text = text.strip()
    if text in PRESETS:
        preset = PRESETS[text]
        if alphabet is not None and alphabet != preset.alphabet:
            raise InputError(f"preset {text!r} is defined over {preset.alphabet.symbols}")
        return preset
    known = list(alphabet.symbols) if alphabet is not None else None
    items = []
    for raw in text.split(";"):
        raw = raw.strip()
        if not raw:
            continue
        glyph, eq, body = raw.partition("=")
        if not eq or len(glyph.strip()) != 1:
            raise InputError(f"bad seed-alphabet item {raw!r}; expected glyph=symbols")
        body, _, weight = body.partition(":")
        symbols = _split_symbols(body.strip(), known)
        if not symbols:
            raise InputError(f"seed letter {glyph!r} has no symbols")
        items.append((glyph.strip(), symbols, weight.strip()))
    if not items:
        raise InputError("empty seed-alphabet specification")
    if alphabet is None:
        order: list[str] = []
        for _, symbols, _ in items:
            for s in symbols:
                if s not in order:
                    order.append(s)
        alphabet = AlignmentAlphabet(tuple(order))
    letters = []
    for glyph, symbols, weight in items:
        subset = frozenset(alphabet.index(s) for s in symbols)
        if weight:
            try:
                w = float(weight)
            except ValueError:
                raise InputError(f"bad weight {weight!r} for letter {glyph!r}") from None
        else:
            w = _default_weight(glyph, subset, alphabet)
        letters.append(SeedLetter(glyph, subset, w))
    return SeedAlphabet(alphabet, tuple(letters))


PRESETS = {
    "spaced": SeedAlphabet(
        BINARY,
        (SeedLetter("#", frozenset([0]), 1.0), SeedLetter("_", frozenset([0, 1]), 0.0)),
    ),
    "dna-subset": SeedAlphabet(
        TERNARY,
        (
            SeedLetter("#", frozenset([0]), 1.0),
            SeedLetter("@", frozenset([0, 1]), 0.5),
            SeedLetter("_", frozenset([0, 1, 2]), 0.0),
        ),
    ),
}
SPACED = PRESETS["spaced"]
DNA_SUBSET = PRESETS["dna-subset"]


def preset_for(alphabet: AlignmentAlphabet) -> SeedAlphabet:
    """The preset seed alphabet over ``alphabet``."""
    for preset in PRESETS.values():
        if preset.alphabet == alphabet:
            return preset
    raise InputError(
        f"no preset seed alphabet over symbols {' '.join(alphabet.symbols)}; give one explicitly"
    )


@dataclass(frozen=True)
class Seed:
    letters: tuple[SeedLetter, ...]
    seed_alphabet: SeedAlphabet

    def __post_init__(self):
        if not self.letters:
            raise InputError("seed must have at least one letter")

    def __str__(self):
        return self.glyphs

    def __len__(self):
        return len(self.letters)

    @property
    def alphabet(self) -> AlignmentAlphabet:
        return self.seed_alphabet.alphabet

    @cached_property
    def glyphs(self) -> str:
        return "".join(l.glyph for l in self.letters)

    @property
    def span(self) -> int:
        return len(self.letters)

    @cached_property
    def hash_positions(self) -> tuple[int, ...]:
        """1-based positions whose letter accepts more than the match."""
        match = frozenset([self.alphabet.match_index])
        return tuple(i for i, l in enumerate(self.letters, 1) if l.subset != match)

    @property
    def r(self) -> int:
        return len(self.hash_positions)

    @property
    def w_count(self) -> int:
        """Number of must-match positions."""
        return self.span - self.r

    @property
    def design_weight(self) -> float:
        return sum(l.weight for l in self.letters)

    @cached_property
    def accept_masks(self) -> tuple[int, ...]:
        """Per alignment symbol, bitmask of positions (bit x-1) accepting it."""
        masks = []
        for a in range(len(self.alphabet)):
            mask = 0
            for i, letter in enumerate(self.letters):
                if a in letter.subset:
                    mask |= 1 << i
            masks.append(mask)
        return tuple(masks)


def parse_seed(text: str, seed_alphabet: SeedAlphabet = DNA_SUBSET) -> Seed:
    if not text:
        raise InputError("empty seed")
    letters = []
    for pos, c in enumerate(text, 1):
        letter = seed_alphabet.get(c)
        if letter is None:
            raise InputError(
                f"unknown seed glyph {c!r} at position {pos} "
                f"(alphabet {seed_alphabet.glyphs!r})"
            )
        letters.append(letter)
    return Seed(tuple(letters), seed_alphabet)


def fragment_count(seed: Seed) -> int:
    return math.prod(len(l.subset) for l in seed.letters)


def matched_fragments(seed: Seed, cap: int = DEFAULT_FRAGMENT_CAP) -> set[tuple[int, ...]]:
    """All alignment words of length ``span`` hit by the seed."""
    count = fragment_count(seed)
    if count > cap:
        raise ResourceLimitError(f"seed {seed} matches {count} fragments (cap {cap})")
    return set(itertools.product(*(sorted(l.subset) for l in seed.letters)))


def _spi_table(seed: Seed):
    """Breadth-first construction of the ``<X, t>`` automaton.

    ``X`` is a bitmask over seed positions (bit ``x-1`` for position ``x``),
    so the non-match rule is a shift of ``X`` by ``t+1`` united with the
    positions ``1..t+1``, both filtered by the letters accepting the symbol.
    Returns ``(rows, keys, final_id)``; ``keys[i]`` is ``(X, t)`` or None
    for the merged final state.
    """
    m = seed.span
    k = len(seed.alphabet)
    match = seed.alphabet.match_index
    accept = seed.accept_masks
    top = 1 << (m - 1)

    FINAL = None
    index: dict = {(0, 0): 0}
    keys: list = [(0, 0)]
    rows: list[list[int]] = []
    i = 0
    while i < len(keys):
        key = keys[i]
        if key is FINAL:
            rows.append([i] * k)
            i += 1
            continue
        X, t = key
        row = []
        for a in range(k):
            if a == match:
                if X.bit_length() + t + 1 >= m:
                    nxt = FINAL
                else:
                    nxt = (X, t + 1)
            else:
                Y = ((X << (t + 1)) | ((1 << (t + 1)) - 1)) & accept[a]
                nxt = FINAL if Y & top else (Y, 0)
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(keys)
                keys.append(nxt)
            row.append(j)
        rows.append(row)
        i += 1
    final_id = index.get(FINAL)
    return rows, keys, final_id


def build_spi_automaton(seed: Seed) -> Dfa:
    """Hit automaton of a subset seed with states ``<X, t>``.

    States are numbered in breadth-first discovery order from ``<{}, 0>``;
    all final states are merged into one absorbing state.
    """
    rows, keys, final_id = _spi_table(seed)
    if final_id is None:
        raise InvariantError(f"seed {seed} produced no final state")
    bound = (seed.w_count + 1) * 2**seed.r
    if len(rows) > bound:
        raise InvariantError(f"seed {seed}: {len(rows)} states exceeds bound {bound}")
    return Dfa(seed.alphabet, np.array(rows, dtype=np.int64), 0, frozenset([final_id]))


def spi_state_labels(seed: Seed) -> list[tuple[frozenset[int], int] | None]:
    """Human-readable ``(X, t)`` per state, None for the merged final."""
    _, keys, _ = _spi_table(seed)
    out = []
    for key in keys:
        if key is None:
            out.append(None)
        else:
            X, t = key
            out.append((frozenset(i + 1 for i in range(X.bit_length()) if X >> i & 1), t))
    return out


def fragment_automaton(seed: Seed) -> Dfa:
    """Aho-Corasick hit automaton of the seed's matched fragments.

    Produces exactly the table of
    ``aho_corasick_hit_dfa(matched_fragments(seed), seed.alphabet)`` without
    enumerating fragments.  Every fragment has length ``span`` so the trie
    is layered: level ``l`` holds all ``prod(|letter_i|, i < l)`` prefixes in
    mixed-radix order, and failure links are resolved one level at a time.
    """
    m = seed.span
    k = len(seed.alphabet)
    sizes = [len(l.subset) for l in seed.letters]
    level_size = [1]
    for s in sizes[:-1]:
        level_size.append(level_size[-1] * s)
    offsets = np.concatenate([[0], np.cumsum(level_size)])
    final = int(offsets[-1])
    n = final + 1
    delta = np.empty((n, k), dtype=np.int64)
    fail = np.zeros(n, dtype=np.int64)
    delta[final] = final

    # rank[l][a]: index of symbol a inside letter l, or -1
    rank = np.full((m, k), -1, dtype=np.int64)
    for l, letter in enumerate(seed.letters):
        for j, a in enumerate(sorted(letter.subset)):
            rank[l, a] = j

    for l in range(m):
        lo, size = int(offsets[l]), level_size[l]
        nodes = np.arange(lo, lo + size)
        local = np.arange(size)
        f = fail[nodes]
        for a in range(k):
            if rank[l, a] >= 0:
                if l + 1 < m:
                    child = int(offsets[l + 1]) + local * sizes[l] + rank[l, a]
                    fail[child] = delta[f, a] if l > 0 else 0
                else:
                    child = np.full(size, final)
                delta[nodes, a] = child
            else:
                delta[nodes, a] = delta[f, a] if l > 0 else 0
    return Dfa(seed.alphabet, delta, 0, frozenset([final]))
