"""Complete deterministic automata over a small alignment alphabet.

Transition tables are dense ``(num_states, num_symbols)`` integer arrays.
Every automaton built here is complete: each state has exactly one
successor per symbol.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

MATCH = "1"


@dataclass(frozen=True)
class AlignmentAlphabet:
    """Ordered set of alignment symbols, one of which is the match ``"1"``."""

    symbols: tuple[str, ...]
    match_index: int = field(default=-1)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise InputError("alignment alphabet is empty")
        if any(not s or any(c.isspace() for c in s) for s in symbols):
            raise InputError(f"invalid symbol name in {symbols!r}")
        if len(set(symbols)) != len(symbols):
            raise InputError(f"duplicate symbols in {symbols!r}")
        if self.match_index == -1:
            if MATCH not in symbols:
                raise InputError(f"alphabet {symbols!r} has no match symbol '1'")
            object.__setattr__(self, "match_index", symbols.index(MATCH))
        if not 0 <= self.match_index < len(symbols) or symbols[self.match_index] != MATCH:
            raise InputError(f"match_index {self.match_index} does not address symbol '1'")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @property
    def match(self) -> int:
        return self.match_index

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise InputError(f"unknown alignment symbol {symbol!r}") from None

    def encode(self, word: str | Sequence[str] | Sequence[int]) -> tuple[int, ...]:
        """Translate a word into a tuple of symbol indices.

        Strings are split into characters when every symbol is a single
        character; otherwise pass a sequence of symbol names.  Integer
        sequences are checked and returned unchanged.
        """
        if isinstance(word, str):
            if any(len(s) != 1 for s in self.symbols):
                word = word.split()
            return tuple(self.index(c) for c in word)
        out = []
        for c in word:
            if isinstance(c, (int, np.integer)):
                if not 0 <= c < len(self.symbols):
                    raise InputError(f"symbol index {c} out of range")
                out.append(int(c))
            else:
                out.append(self.index(c))
        return tuple(out)

    def decode(self, word: Iterable[int]) -> str:
        sep = "" if all(len(s) == 1 for s in self.symbols) else " "
        return sep.join(self.symbols[a] for a in word)


BINARY = AlignmentAlphabet(("1", "0"))
TERNARY = AlignmentAlphabet(("1", "h", "0"))


@dataclass(frozen=True, eq=False)
class Dfa:
    """Complete DFA with states ``0..num_states-1``."""

    alphabet: AlignmentAlphabet
    delta: np.ndarray
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=np.int64)
        if delta.ndim != 2 or delta.shape[1] != len(self.alphabet) or delta.shape[0] == 0:
            raise InputError(
                f"transition table shape {delta.shape} does not match "
                f"{len(self.alphabet)} symbols"
            )
        n = delta.shape[0]
        if delta.min() < 0 or delta.max() >= n:
            raise InputError("transition target out of range")
        if not 0 <= self.initial < n:
            raise InputError(f"initial state {self.initial} out of range")
        finals = frozenset(int(q) for q in self.finals)
        if any(not 0 <= q < n for q in finals):
            raise InputError("final state out of range")
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "initial", int(self.initial))
        object.__setattr__(self, "finals", finals)

    @property
    def num_states(self) -> int:
        return self.delta.shape[0]

    @property
    def final_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_states, dtype=bool)
        mask[list(self.finals)] = True
        return mask

    def run(self, word) -> int:
        q = self.initial
        for a in self.alphabet.encode(word):
            q = self.delta[q, a]
        return int(q)

    def accepts(self, word) -> bool:
        return self.run(word) in self.finals

    def __repr__(self):
        return (
            f"Dfa(states={self.num_states}, symbols={list(self.alphabet.symbols)}, "
            f"initial={self.initial}, finals={sorted(self.finals)})"
        )


def _check_same_alphabet(a: Dfa, b: Dfa):
    if a.alphabet != b.alphabet:
        raise InputError(
            f"alphabet mismatch: {a.alphabet.symbols} vs {b.alphabet.symbols}"
        )


def reachable_states(d: Dfa) -> list[int]:
    """States reachable from the initial state, in breadth-first order."""
    delta = d.delta.tolist()
    seen = {d.initial}
    order = [d.initial]
    i = 0
    while i < len(order):
        for q in delta[order[i]]:
            if q not in seen:
                seen.add(q)
                order.append(q)
        i += 1
    return order


def coreachable_mask(d: Dfa) -> np.ndarray:
    """Boolean mask of states from which some final state is reachable."""
    n, k = d.delta.shape
    preds: list[list[int]] = [[] for _ in range(n)]
    for q, row in enumerate(d.delta.tolist()):
        for r in row:
            preds[r].append(q)
    mask = np.zeros(n, dtype=bool)
    stack = list(d.finals)
    mask[stack] = True
    while stack:
        q = stack.pop()
        for p in preds[q]:
            if not mask[p]:
                mask[p] = True
                stack.append(p)
    return mask


def longest_accepted_length(d: Dfa) -> int:
    """Length of the longest accepted word.

    Raises :class:`InputError` when the useful part of the automaton has a
    cycle (the language is infinite) or when the language is empty.
    """
    useful = coreachable_mask(d)
    reach = np.zeros(d.num_states, dtype=bool)
    reach[reachable_states(d)] = True
    useful &= reach
    if not useful[d.initial]:
        raise InputError("automaton accepts no word")
    nodes = np.flatnonzero(useful).tolist()
    indeg = dict.fromkeys(nodes, 0)
    succ: dict[int, list[int]] = {q: [] for q in nodes}
    for q in nodes:
        for r in d.delta[q].tolist():
            if useful[r]:
                succ[q].append(r)
                indeg[r] += 1
    ready = [q for q in nodes if indeg[q] == 0]
    topo = []
    while ready:
        q = ready.pop()
        topo.append(q)
        for r in succ[q]:
            indeg[r] -= 1
            if indeg[r] == 0:
                ready.append(r)
    if len(topo) != len(nodes):
        raise InputError("target automaton is not acyclic")
    longest = dict.fromkeys(nodes, -1)
    longest[d.initial] = 0
    best = 0
    for q in topo:
        if longest[q] < 0:
            continue
        if q in d.finals:
            best = max(best, longest[q])
        for r in succ[q]:
            longest[r] = max(longest[r], longest[q] + 1)
    return best


def product_intersection(a: Dfa, b: Dfa) -> Dfa:
    """Reachable part of the intersection product of two complete DFAs.

    Pairs are numbered in breadth-first discovery order from
    ``(a.initial, b.initial)``, symbols visited in alphabet order.
    """
    _check_same_alphabet(a, b)
    k = len(a.alphabet)
    da = a.delta.tolist()
    db = b.delta.tolist()
    nb = b.num_states
    start = a.initial * nb + b.initial
    index = {start: 0}
    order = [start]
    rows: list[list[int]] = []
    i = 0
    while i < len(order):
        key = order[i]
        qa, qb = divmod(key, nb)
        ra, rb = da[qa], db[qb]
        row = []
        for s in range(k):
            nxt = ra[s] * nb + rb[s]
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        rows.append(row)
        i += 1
    fa, fb = a.finals, b.finals
    finals = frozenset(
        j for j, key in enumerate(order) if key // nb in fa and key % nb in fb
    )
    return Dfa(a.alphabet, np.array(rows, dtype=np.int64), 0, finals)


def trim_unreachable(d: Dfa) -> Dfa:
    order = reachable_states(d)
    if len(order) == d.num_states and order == list(range(d.num_states)):
        return d
    remap = np.full(d.num_states, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    delta = remap[d.delta[order]]
    finals = frozenset(int(remap[q]) for q in d.finals if remap[q] >= 0)
    return Dfa(d.alphabet, delta, 0, finals)


def _hopcroft_blocks(delta: list[list[int]], n: int, k: int, finals: frozenset[int]) -> list[int]:
    """Hopcroft partition refinement; returns a block id per state."""
    inverse: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(k)]
    for q, row in enumerate(delta):
        for a, r in enumerate(row):
            inverse[a][r].append(q)

    fin = set(finals)
    non = set(range(n)) - fin
    blocks: list[set[int]] = [b for b in (fin, non) if b]
    block_of = [0] * n
    for i, b in enumerate(blocks):
        for q in b:
            block_of[q] = i
    pending = set()
    work: list[int] = []
    if len(blocks) == 2:
        smaller = 0 if len(blocks[0]) <= len(blocks[1]) else 1
        work.append(smaller)
        pending.add(smaller)

    while work:
        splitter_id = work.pop()
        pending.discard(splitter_id)
        splitter = tuple(blocks[splitter_id])
        for a in range(k):
            inv_a = inverse[a]
            touched: dict[int, list[int]] = {}
            for r in splitter:
                for q in inv_a[r]:
                    touched.setdefault(block_of[q], []).append(q)
            for b, hit in touched.items():
                block = blocks[b]
                if len(hit) == len(block):
                    continue
                hit_set = set(hit)
                rest = block - hit_set
                # the larger half keeps the old id so pending entries stay valid
                if len(hit_set) <= len(rest):
                    blocks[b], new = rest, hit_set
                else:
                    blocks[b], new = hit_set, rest
                new_id = len(blocks)
                blocks.append(new)
                for q in new:
                    block_of[q] = new_id
                if b in pending:
                    work.append(new_id)
                    pending.add(new_id)
                else:
                    small = new_id if len(new) <= len(blocks[b]) else b
                    work.append(small)
                    pending.add(small)
    return block_of


def canonical_form(d: Dfa) -> Dfa:
    """Renumber reachable states in breadth-first order (symbols in order)."""
    return trim_unreachable(d)


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA for ``L(d)``, in canonical breadth-first numbering.

    Two DFAs recognize the same language iff their minimized forms have
    identical tables and final sets.
    """
    d = trim_unreachable(d)
    n, k = d.delta.shape
    delta = d.delta.tolist()
    block_of = _hopcroft_blocks(delta, n, k, d.finals)
    # quotient automaton, then renumber by BFS so the result is canonical
    nblocks = max(block_of) + 1
    qdelta = np.zeros((nblocks, k), dtype=np.int64)
    for q in range(n):
        qdelta[block_of[q]] = [block_of[r] for r in delta[q]]
    qfinals = frozenset(block_of[q] for q in d.finals)
    quotient = Dfa(d.alphabet, qdelta, block_of[d.initial], qfinals)
    return canonical_form(quotient)


def equivalent(a: Dfa, b: Dfa) -> bool:
    """True iff both automata recognize the same language.

    Walks the reachable pairs of the synchronous product and checks that
    finality agrees on every pair.
    """
    _check_same_alphabet(a, b)
    da, db = a.delta.tolist(), b.delta.tolist()
    fa, fb = a.finals, b.finals
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        qa, qb = queue.popleft()
        if (qa in fa) != (qb in fb):
            return False
        for ra, rb in zip(da[qa], db[qb]):
            if (ra, rb) not in seen:
                seen.add((ra, rb))
                queue.append((ra, rb))
    return True


def aho_corasick_hit_dfa(patterns: Iterable, alphabet: AlignmentAlphabet) -> Dfa:
    """DFA for the words containing at least one of ``patterns`` as a factor.

    Builds the pattern trie, resolves failure links into a total transition
    function and merges every pattern-containing node into a single
    absorbing final state, which is numbered last.  The other states keep
    the breadth-first trie order (children in alphabet order).
    """
    k = len(alphabet)
    words = {alphabet.encode(p) for p in patterns}
    if not words:
        raise InputError("empty pattern set")
    if any(len(w) == 0 for w in words):
        raise InputError("empty pattern word")

    children: list[dict[int, int]] = [{}]
    terminal = [False]
    for w in words:
        node = 0
        for a in w:
            nxt = children[node].get(a)
            if nxt is None:
                nxt = len(children)
                children[node][a] = nxt
                children.append({})
                terminal.append(False)
            node = nxt
        terminal[node] = True

    # breadth-first renumbering with children in symbol order
    order = [0]
    i = 0
    while i < len(order):
        node = order[i]
        for a in sorted(children[node]):
            order.append(children[node][a])
        i += 1

    n = len(children)
    goto = [[-1] * k for _ in range(n)]
    fail = [0] * n
    hit = terminal[:]
    for node in order:
        f = fail[node]
        if node != 0 and hit[f]:
            hit[node] = True
        for a in range(k):
            child = children[node].get(a)
            if child is not None:
                goto[node][a] = child
                fail[child] = goto[f][a] if node != 0 else 0
            else:
                goto[node][a] = goto[f][a] if node != 0 else 0

    live = [node for node in order if not hit[node]]
    ids = {node: j for j, node in enumerate(live)}
    final = len(live)
    delta = np.empty((final + 1, k), dtype=np.int64)
    for node in live:
        delta[ids[node]] = [final if hit[r] else ids[r] for r in goto[node]]
    delta[final] = final
    return Dfa(alphabet, delta, 0, frozenset([final]))


def dump_dfa(d: Dfa) -> str:
    """Plain-text dump: header lines, then one ``src symbol dst`` per line."""
    lines = [
        f"states {d.num_states}",
        f"initial {d.initial}",
        "finals" + "".join(f" {q}" for q in sorted(d.finals)),
    ]
    symbols = d.alphabet.symbols
    for q, row in enumerate(d.delta.tolist()):
        for a, r in enumerate(row):
            lines.append(f"{q} {symbols[a]} {r}")
    return "\n".join(lines) + "\n"


def load_dfa(text: str, alphabet: AlignmentAlphabet) -> Dfa:
    """Inverse of :func:`dump_dfa`."""
    n = initial = None
    finals: list[int] = []
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "states":
                n = int(parts[1])
            elif parts[0] == "initial":
                initial = int(parts[1])
            elif parts[0] == "finals":
                finals = [int(x) for x in parts[1:]]
            else:
                src, sym, dst = parts
                edges.append((int(src), alphabet.index(sym), int(dst)))
        except (ValueError, IndexError):
            raise InputError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None or initial is None:
        raise InputError("missing 'states' or 'initial' header")
    delta = np.full((n, len(alphabet)), -1, dtype=np.int64)
    for src, a, dst in edges:
        delta[src, a] = dst
    if (delta < 0).any():
        raise InputError("incomplete transition table")
    return Dfa(alphabet, delta, initial, frozenset(finals))
