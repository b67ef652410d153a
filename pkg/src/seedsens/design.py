"""Seed enumeration, best-seed search and automaton size statistics."""

from __future__ import annotations

import itertools
import logging
from math import comb
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import glyph_size_batch
from .automata import minimize
from .errors import InputError, InvariantError
from .probmodel import ProbTransducer, check
from .seeds import DNA_SUBSET, SPACED, Seed, SeedAlphabet, build_spi_automaton, fragment_automaton, parse_seed, preset_for
from .sensitivity import MASS_TOLERANCE, all_words_hit_probability

log = logging.getLogger(__name__)


ENDS = ("#", "solid", "any")


@dataclass(frozen=True)
class EnumSpec:
    """Which seeds to enumerate.

    ``weight`` is the design weight (1 per ``#``, 0.5 per ``@``).  In subset
    mode exactly ``at_count`` letters are ``@``.  ``ends`` constrains the
    first and last letters: ``"#"`` (both ``#``), ``"solid"`` (both not
    ``_``) or ``"any"``.
    """

    mode: str
    weight: float
    max_span: int
    at_count: int = 2
    ends: str = "#"
    min_span: int = 1

    def __post_init__(self):
        if self.mode not in ("spaced", "subset"):
            raise InputError(f"mode must be 'spaced' or 'subset', got {self.mode!r}")
        if self.weight < 1:
            raise InputError(f"weight must be >= 1, got {self.weight}")
        if self.at_count < 0:
            raise InputError("at_count must be >= 0")
        if self.ends not in ENDS:
            raise InputError(f"ends must be one of {', '.join(ENDS)}, got {self.ends!r}")

    @property
    def anchored(self) -> bool:
        return self.ends != "any"

    @property
    def n_at(self) -> int:
        return self.at_count if self.mode == "subset" else 0

    @property
    def n_sharp(self) -> int | None:
        """Number of ``#`` letters, or None when the weight is unreachable."""
        sharp = self.weight - 0.5 * self.n_at
        if sharp < 0 or sharp != int(sharp):
            return None
        return int(sharp)

    def default_alphabet(self) -> SeedAlphabet:
        return SPACED if self.mode == "spaced" else DNA_SUBSET

    def infeasibility(self) -> str | None:
        """Why the spec admits no seed, or None."""
        sharp = self.n_sharp
        if sharp is None:
            return f"weight {self.weight} is not reachable with {self.n_at} '@' letters"
        solid = sharp + self.n_at
        if solid == 0:
            return "seed would contain only '_' letters"
        if self.ends == "#" and (sharp == 0 or (sharp == 1 and solid > 1)):
            return "seeds need '#' at both ends"
        if solid > self.max_span:
            return f"minimal span {solid} exceeds max span {self.max_span}"
        return None


def _glyph_strings(spec: EnumSpec):
    """Unordered stream of the glyph strings of ``spec``."""
    sharp, at = spec.n_sharp, spec.n_at
    solid = sharp + at
    for span in range(max(solid, spec.min_span, 1), spec.max_span + 1):
        ends = sorted({0, span - 1}) if spec.anchored else []
        if len(ends) > solid:
            continue
        inner = [i for i in range(span) if i not in ends]
        for extra in itertools.combinations(inner, solid - len(ends)):
            pos = ends + list(extra)
            at_choices = extra if spec.ends == "#" else pos
            for at_pos in itertools.combinations(at_choices, at):
                g = ["_"] * span
                for p in pos:
                    g[p] = "#"
                for p in at_pos:
                    g[p] = "@"
                yield "".join(g)


def enumerate_seeds(spec: EnumSpec, seed_alphabet: SeedAlphabet | None = None) -> list[Seed]:
    """All seeds meeting ``spec``, sorted by glyph string."""
    seed_alphabet = seed_alphabet or spec.default_alphabet()
    needed = "#_" if spec.mode == "spaced" else "#@_"
    missing = [c for c in needed if seed_alphabet.get(c) is None]
    if missing:
        raise InputError(f"seed alphabet lacks letters {''.join(missing)!r}")
    reason = spec.infeasibility()
    if reason:
        log.warning("empty enumeration: %s", reason)
        return []
    return [parse_seed(g, seed_alphabet) for g in sorted(_glyph_strings(spec))]


def count_seeds(spec: EnumSpec) -> int:
    """Closed-form size of the enumeration, independent of the generator."""
    if spec.infeasibility():
        return 0
    sharp, at = spec.n_sharp, spec.n_at
    solid = sharp + at
    total = 0
    for span in range(max(solid, spec.min_span, 1), spec.max_span + 1):
        if spec.ends == "any":
            total += comb(span, solid) * comb(solid, at)
        elif span == 1:
            total += 1 if solid == 1 and (spec.ends == "solid" or at == 0) else 0
        elif solid < 2:
            continue
        elif spec.ends == "solid":
            total += comb(span - 2, solid - 2) * comb(solid, at)
        else:
            total += comb(span - 2, solid - 2) * comb(solid - 2, at)
    return total


@dataclass(frozen=True)
class SeedScore:
    seed: str
    sensitivity: float
    model: str = ""
    length: int = 0


TIE_DECIMALS = 12


def _rank_key(score: SeedScore):
    # mirror-image seeds tie up to rounding noise; let the glyph string decide
    return (-round(score.sensitivity, TIE_DECIMALS), score.seed)


def _score_chunk(args) -> list[tuple[str, float]]:
    glyphs, seed_alphabet, g, n = args
    out = []
    for text in glyphs:
        hit, total = all_words_hit_probability(build_spi_automaton(parse_seed(text, seed_alphabet)), g, n)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise InvariantError(f"seed {text}: total mass {total!r} differs from 1")
        out.append((text, hit / total))
    return out


def _chunks(items: list, size: int):
    for i in range(0, len(items), size):
        yield items[i : i + size]


def score_seeds(
    seeds: list[Seed], g: ProbTransducer, n: int, *, model_id: str = "", jobs: int = 1
) -> list[SeedScore]:
    """Sensitivity of every seed, ranked best first (ties by glyph string)."""
    check(g)
    if not seeds:
        return []
    seed_alphabet = seeds[0].seed_alphabet
    glyphs = [s.glyphs for s in seeds]
    if jobs > 1:
        size = max(1, len(glyphs) // (4 * jobs))
        tasks = [(chunk, seed_alphabet, g, n) for chunk in _chunks(glyphs, size)]
        with ProcessPoolExecutor(jobs) as pool:
            pairs = [p for part in pool.map(_score_chunk, tasks) for p in part]
    else:
        pairs = _score_chunk((glyphs, seed_alphabet, g, n))
    scores = [SeedScore(text, s, model_id, n) for text, s in pairs]
    return sorted(scores, key=_rank_key)


def best_seed(
    spec: EnumSpec,
    g: ProbTransducer,
    n: int,
    *,
    top: int = 1,
    seed_alphabet: SeedAlphabet | None = None,
    model_id: str = "",
    jobs: int = 1,
) -> tuple[SeedScore, list[SeedScore]]:
    """Most sensitive seed of the enumeration, plus the ``top`` best.

    Without ``seed_alphabet`` the preset over the model's alphabet is used,
    so spaced seeds can be scored under a ternary model.
    """
    seeds = enumerate_seeds(spec, seed_alphabet or preset_for(g.alphabet))
    if not seeds:
        raise InputError(f"no seed satisfies {spec}: {spec.infeasibility() or 'empty'}")
    ranking = score_seeds(seeds, g, n, model_id=model_id, jobs=jobs)
    return ranking[0], ranking[:top]


@dataclass(frozen=True)
class StatsRow:
    weight: float
    seeds: int
    ac_avg: float
    spi_avg: float
    min_avg: float

    @property
    def ac_ratio(self) -> float:
        return self.ac_avg / self.min_avg

    @property
    def spi_ratio(self) -> float:
        return self.spi_avg / self.min_avg


def automaton_sizes(seed: Seed) -> tuple[int, int, int]:
    """State counts ``(Aho-Corasick, S_pi, minimal)`` for one seed."""
    ac = fragment_automaton(seed).num_states
    spi = build_spi_automaton(seed)
    smallest = minimize(spi).num_states
    if not smallest <= spi.num_states <= ac:
        raise InvariantError(f"seed {seed}: size order violated ({smallest}, {spi.num_states}, {ac})")
    return ac, spi.num_states, smallest


def _sizes_totals(args) -> tuple[int, int, int, int]:
    glyphs, seed_alphabet = args
    sizes = glyph_size_batch(glyphs, seed_alphabet)
    ac, spi, smallest = sizes.T
    bad = np.flatnonzero((smallest > spi) | (spi > ac))
    if bad.size:
        i = int(bad[0])
        raise InvariantError(f"seed {glyphs[i]}: size order violated {tuple(sizes[i])}")
    return len(glyphs), int(ac.sum()), int(spi.sum()), int(smallest.sum())


def _batches(stream, size: int):
    while True:
        chunk = list(itertools.islice(stream, size))
        if not chunk:
            return
        yield chunk


def automaton_stats(
    spec: EnumSpec,
    seed_alphabet: SeedAlphabet | None = None,
    *,
    jobs: int = 1,
    batch: int = 20000,
) -> StatsRow:
    """Average automaton sizes over the enumerated seeds.

    Seeds are streamed in batches through the compiled size kernels and
    only integer totals are kept, so the result does not depend on
    ``jobs`` or ``batch``.
    """
    seed_alphabet = seed_alphabet or spec.default_alphabet()
    needed = "#_" if spec.mode == "spaced" else "#@_"
    missing = [c for c in needed if seed_alphabet.get(c) is None]
    if missing:
        raise InputError(f"seed alphabet lacks letters {''.join(missing)!r}")
    reason = spec.infeasibility()
    if reason:
        raise InputError(f"no seed satisfies {spec}: {reason}")
    tasks = ((chunk, seed_alphabet) for chunk in _batches(_glyph_strings(spec), batch))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_sizes_totals, tasks))
    else:
        parts = [_sizes_totals(t) for t in tasks]
    count, ac, spi, smallest = (sum(col) for col in zip(*parts))
    if count == 0:
        raise InputError(f"no seed satisfies {spec}")
    return StatsRow(spec.weight, count, ac / count, spi / count, smallest / count)
