"""Probability transducers: finite automata whose transitions emit a symbol
with a probability, the outgoing probabilities of every state summing to 1.

A word's probability is the total probability of the paths from the initial
state that spell it.  Bernoulli and order-k Markov sources are deterministic
transducers; hidden Markov models give nondeterministic ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .automata import BINARY, TERNARY, AlignmentAlphabet
from .errors import InputError

ROW_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class ProbTransducer:
    alphabet: AlignmentAlphabet
    num_states: int
    initial: int
    transitions: tuple[tuple[int, int, int, float], ...]

    def __post_init__(self):
        trans = tuple((int(s), int(a), int(d), float(p)) for s, a, d, p in self.transitions)
        object.__setattr__(self, "transitions", trans)
        if self.num_states < 1:
            raise InputError("transducer needs at least one state")
        if not 0 <= self.initial < self.num_states:
            raise InputError(f"initial state {self.initial} out of range")
        k = len(self.alphabet)
        for s, a, d, p in trans:
            if not (0 <= s < self.num_states and 0 <= d < self.num_states):
                raise InputError(f"transition {s} -> {d} references a missing state")
            if not 0 <= a < k:
                raise InputError(f"transition {s} -> {d} has symbol index {a} out of range")
            if not 0.0 < p <= 1.0 or math.isnan(p):
                raise InputError(f"transition ({s}, {self.alphabet.symbols[a]}, {d}) has probability {p}")

    @cached_property
    def matrices(self) -> np.ndarray:
        """Array ``P[a, q, q']`` of transition probabilities per symbol."""
        P = np.zeros((len(self.alphabet), self.num_states, self.num_states))
        for s, a, d, p in self.transitions:
            P[a, s, d] += p
        P.setflags(write=False)
        return P

    @property
    def deterministic(self) -> bool:
        seen = set()
        for s, a, _, _ in self.transitions:
            if (s, a) in seen:
                return False
            seen.add((s, a))
        return True

    def row_sums(self) -> np.ndarray:
        return self.matrices.sum(axis=(0, 2))

    def __repr__(self):
        return (
            f"ProbTransducer(states={self.num_states}, symbols={list(self.alphabet.symbols)}, "
            f"transitions={len(self.transitions)}, deterministic={self.deterministic})"
        )


def validate(g: ProbTransducer, tol: float = ROW_TOLERANCE) -> list[str]:
    """Diagnostics for invariant violations; an empty list means valid."""
    problems = []
    seen = set()
    for s, a, d, _ in g.transitions:
        if (s, a, d) in seen:
            problems.append(f"duplicate transition ({s}, {g.alphabet.symbols[a]}, {d})")
        seen.add((s, a, d))
    sums = np.zeros(g.num_states)
    for s, _, _, p in g.transitions:
        sums[s] += p
    for q, total in enumerate(sums):
        if abs(total - 1.0) > tol:
            problems.append(f"state {q} sums to {total:.12g}")
    return problems


def check(g: ProbTransducer) -> ProbTransducer:
    problems = validate(g)
    if problems:
        raise InputError("invalid probability transducer: " + "; ".join(problems))
    return g


def _distribution(alphabet: AlignmentAlphabet, probs, what: str) -> list[float]:
    if isinstance(probs, Mapping):
        out = [0.0] * len(alphabet)
        for sym, p in probs.items():
            out[alphabet.index(sym) if isinstance(sym, str) else int(sym)] = float(p)
    else:
        out = [float(p) for p in probs]
        if len(out) != len(alphabet):
            raise InputError(f"{what}: expected {len(alphabet)} probabilities, got {len(out)}")
    if any(p < 0 or math.isnan(p) for p in out):
        raise InputError(f"{what}: negative probability in {out}")
    if abs(sum(out) - 1.0) > ROW_TOLERANCE:
        raise InputError(f"{what}: probabilities sum to {sum(out):.12g}, not 1")
    return out


def bernoulli(alphabet: AlignmentAlphabet, probs) -> ProbTransducer:
    """One-state source emitting symbols independently.

    ``probs`` is a mapping symbol -> probability or a sequence in alphabet
    order.  Zero-probability symbols get no transition.
    """
    dist = _distribution(alphabet, probs, "bernoulli")
    trans = tuple((0, a, 0, p) for a, p in enumerate(dist) if p > 0)
    return ProbTransducer(alphabet, 1, 0, trans)


def markov(alphabet: AlignmentAlphabet, order: int, table: Mapping) -> ProbTransducer:
    """Order-``k`` Markov source as a deterministic transducer.

    ``table`` maps every context (a word of length ``0..k`` given as a string
    or tuple of symbols) to the distribution of the next symbol.  States are
    the contexts reachable from the empty one, numbered breadth-first; after
    ``k`` symbols the context is the last ``k`` symbols read.
    """
    if order < 0:
        raise InputError("Markov order must be >= 0")
    rows: dict[tuple[int, ...], list[float]] = {}
    for ctx, dist in table.items():
        key = alphabet.encode(ctx)
        if len(key) > order:
            raise InputError(f"context {ctx!r} longer than order {order}")
        rows[key] = _distribution(alphabet, dist, f"context {alphabet.decode(key)!r}")

    start: tuple[int, ...] = ()
    index = {start: 0}
    order_list = [start]
    trans = []
    i = 0
    while i < len(order_list):
        ctx = order_list[i]
        if ctx not in rows:
            raise InputError(f"missing distribution for context {alphabet.decode(ctx)!r}")
        for a, p in enumerate(rows[ctx]):
            if p <= 0:
                continue
            nxt = (ctx + (a,))[-order:] if order else ()
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order_list)
                order_list.append(nxt)
            trans.append((i, a, j, p))
        i += 1
    return ProbTransducer(alphabet, len(order_list), 0, tuple(trans))


def hmm(alphabet: AlignmentAlphabet, start, transition, emission) -> ProbTransducer:
    """Transducer equivalent to a hidden Markov model.

    State 0 is a fresh initial state; hidden state ``i`` becomes transducer
    state ``i + 1``.  The symbol is emitted by the hidden state entered, so
    ``rho(q, a, j) = T[q, j] * E[j, a]`` (with ``start`` as the row of state
    0).  Zero products are dropped.
    """
    start = np.asarray(start, dtype=float)
    T = np.asarray(transition, dtype=float)
    E = np.asarray(emission, dtype=float)
    h = len(start)
    if T.shape != (h, h) or E.shape != (h, len(alphabet)):
        raise InputError("inconsistent HMM parameter shapes")
    trans = []
    for q, row in enumerate([start] + list(T)):
        for j in range(h):
            for a in range(len(alphabet)):
                p = float(row[j] * E[j, a])
                if p > 0:
                    trans.append((q, a, j + 1, p))
    return check(ProbTransducer(alphabet, h + 1, 0, tuple(trans)))


def word_probability(g: ProbTransducer, word) -> float:
    """Total probability of the initial paths labelled ``word`` (forward pass)."""
    P = g.matrices
    v = np.zeros(g.num_states)
    v[g.initial] = 1.0
    for a in g.alphabet.encode(word):
        v = v @ P[a]
    return float(v.sum())


def language_probability(g: ProbTransducer, words: Iterable) -> float:
    return math.fsum(word_probability(g, w) for w in words)


def all_words(alphabet: AlignmentAlphabet, n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(len(alphabet)), repeat=n)


# -- text format --------------------------------------------------------------


def dumps(g: ProbTransducer) -> str:
    """Serialize; probabilities use ``repr`` so reloading is bit-exact."""
    lines = [
        "alphabet " + " ".join(g.alphabet.symbols),
        f"match {g.alphabet.symbols[g.alphabet.match_index]}",
        f"states {g.num_states}",
        f"initial {g.initial}",
    ]
    for s, a, d, p in g.transitions:
        lines.append(f"trans {s} {g.alphabet.symbols[a]} {d} {p!r}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> ProbTransducer:
    symbols = match = n = initial = None
    trans = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            if key == "alphabet":
                symbols = tuple(rest)
            elif key == "match":
                (match,) = rest
            elif key == "states":
                (n,) = map(int, rest)
            elif key == "initial":
                (initial,) = map(int, rest)
            elif key == "trans":
                if symbols is None:
                    raise InputError(f"line {lineno}: 'trans' before 'alphabet'")
                src, sym, dst, prob = rest
                if sym not in symbols:
                    raise InputError(f"line {lineno}: unknown symbol {sym!r}")
                trans.append((int(src), symbols.index(sym), int(dst), float(prob)))
            else:
                raise InputError(f"line {lineno}: unknown keyword {key!r}")
        except InputError:
            raise
        except ValueError:
            raise InputError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    for name, value in (("alphabet", symbols), ("states", n), ("initial", initial)):
        if value is None:
            raise InputError(f"model file lacks an '{name}' line")
    if match is not None and match != "1":
        raise InputError(f"match symbol must be '1', got {match!r}")
    alphabet = AlignmentAlphabet(symbols)
    return check(ProbTransducer(alphabet, n, initial, tuple(trans)))


def load(path: str | Path) -> ProbTransducer:
    return loads(Path(path).read_text())


def dump(g: ProbTransducer, path: str | Path) -> None:
    Path(path).write_text(dumps(g))


def parse_model(text: str) -> ProbTransducer:
    """``bernoulli:p1,ph,p0`` (or ``bernoulli:p1,p0``) shorthand, else a file path."""
    if text.startswith("bernoulli:"):
        try:
            probs = [float(x) for x in text[len("bernoulli:"):].split(",")]
        except ValueError:
            raise InputError(f"bad Bernoulli shorthand {text!r}") from None
        if len(probs) == 2:
            return bernoulli(BINARY, probs)
        if len(probs) == 3:
            return bernoulli(TERNARY, probs)
        raise InputError("Bernoulli shorthand takes 2 (binary) or 3 (ternary) probabilities")
    path = Path(text)
    if not path.is_file():
        raise InputError(f"model file {text!r} not found")
    return load(path)


def symbol_marginals(g: ProbTransducer, n: int) -> np.ndarray:
    """Probability of each symbol at positions ``1..n``, shape ``(n, |A|)``."""
    P = g.matrices
    v = np.zeros(g.num_states)
    v[g.initial] = 1.0
    out = np.empty((n, len(g.alphabet)))
    for i in range(n):
        nxt = [v @ P[a] for a in range(len(g.alphabet))]
        out[i] = [x.sum() for x in nxt]
        v = sum(nxt)
    return out
