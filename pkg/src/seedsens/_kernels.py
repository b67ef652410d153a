"""Compiled helpers for bulk automaton-size statistics.

Only sizes are computed here; the automata themselves come from
:func:`seedsens.seeds.build_spi_automaton` and
:func:`seedsens.automata.minimize`, which these kernels must agree with.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import InputError, ResourceLimitError


@njit(cache=True)
def _spi_rows(m, accept, match, rows):
    """Fill ``rows`` with the <X, t> transition table; return (n, final id)."""
    k = accept.shape[0]
    top = np.int64(1) << (m - 1)
    index = dict()
    index[np.int64(0)] = 0
    keys_x = np.empty(rows.shape[0], dtype=np.int64)
    keys_t = np.empty(rows.shape[0], dtype=np.int64)
    keys_x[0] = 0
    keys_t[0] = 0
    count = 1
    final_id = -1
    i = 0
    while i < count:
        X = keys_x[i]
        t = keys_t[i]
        if X < 0:
            for a in range(k):
                rows[i, a] = i
            i += 1
            continue
        for a in range(k):
            is_final = False
            nx = np.int64(0)
            nt = np.int64(0)
            if a == match:
                bl = np.int64(0)
                y = X
                while y > 0:
                    y >>= 1
                    bl += 1
                if bl + t + 1 >= m:
                    is_final = True
                else:
                    nx = X
                    nt = t + 1
            else:
                y = ((X << (t + 1)) | ((np.int64(1) << (t + 1)) - 1)) & accept[a]
                if y & top:
                    is_final = True
                else:
                    nx = y
            if is_final:
                if final_id < 0:
                    if count >= rows.shape[0]:
                        raise RuntimeError("state table overflow")
                    final_id = count
                    keys_x[count] = -1
                    keys_t[count] = 0
                    count += 1
                rows[i, a] = final_id
            else:
                key = nx * (m + 1) + nt
                j = index.get(key, -1)
                if j < 0:
                    if count >= rows.shape[0]:
                        raise RuntimeError("state table overflow")
                    j = count
                    index[key] = j
                    keys_x[count] = nx
                    keys_t[count] = nt
                    count += 1
                rows[i, a] = j
        i += 1
    return count, final_id


@njit(cache=True)
def _min_size(rows, n, final_id):
    """Number of Nerode classes of a complete DFA whose states are all reachable.

    Hopcroft refinement on an array-based refinable partition: blocks are
    contiguous ranges of ``elems`` and marked states are swapped to the
    front of their block.  A split always queues the smaller half.
    """
    k = rows.shape[1]
    start = np.zeros((k, n + 1), dtype=np.int64)
    for q in range(n):
        for a in range(k):
            start[a, rows[q, a] + 1] += 1
    for a in range(k):
        for r in range(n):
            start[a, r + 1] += start[a, r]
    fill = start[:, :n].copy()
    inv = np.empty((k, n), dtype=np.int64)
    for q in range(n):
        for a in range(k):
            r = rows[q, a]
            inv[a, fill[a, r]] = q
            fill[a, r] += 1

    elems = np.arange(n)
    loc = np.arange(n)
    blk = np.zeros(n, dtype=np.int64)
    first = np.zeros(n + 1, dtype=np.int64)
    end = np.zeros(n + 1, dtype=np.int64)
    mid = np.zeros(n + 1, dtype=np.int64)
    end[0] = n
    nb = 1
    stack = np.empty(n + 1, dtype=np.int64)
    top = 0
    if 0 <= final_id and n > 1:
        # move the final state into its own block
        i = loc[final_id]
        other = elems[0]
        elems[0], elems[i] = final_id, other
        loc[final_id], loc[other] = 0, i
        first[1], end[1], mid[1] = 0, 1, 0
        first[0], mid[0] = 1, 1
        blk[final_id] = 1
        nb = 2
        stack[top] = 1
        top += 1
    touched = np.empty(n + 1, dtype=np.int64)
    splitter = np.empty(n, dtype=np.int64)
    while top > 0:
        top -= 1
        S = stack[top]
        size = end[S] - first[S]
        for i in range(size):
            splitter[i] = elems[first[S] + i]
        for a in range(k):
            nt = 0
            for i in range(size):
                r = splitter[i]
                for j in range(start[a, r], start[a, r + 1]):
                    q = inv[a, j]
                    b = blk[q]
                    pos = loc[q]
                    m = mid[b]
                    if pos >= m:
                        other = elems[m]
                        elems[m], elems[pos] = q, other
                        loc[q], loc[other] = m, pos
                        if m == first[b]:
                            touched[nt] = b
                            nt += 1
                        mid[b] = m + 1
            for t in range(nt):
                b = touched[t]
                if mid[b] == end[b]:
                    mid[b] = first[b]
                    continue
                if mid[b] - first[b] <= end[b] - mid[b]:
                    first[nb], end[nb] = first[b], mid[b]
                    first[b] = mid[b]
                else:
                    first[nb], end[nb] = mid[b], end[b]
                    end[b] = mid[b]
                mid[b] = first[b]
                mid[nb] = first[nb]
                for i in range(first[nb], end[nb]):
                    blk[elems[i]] = nb
                stack[top] = nb
                top += 1
                nb += 1
    return nb


@njit(cache=True)
def _ac_size(letter_sizes):
    total = np.int64(1)
    prod = np.int64(1)
    for s in letter_sizes:
        total += prod
        prod *= s
    return total


@njit(cache=True)
def size_batch(spans, accepts, sizes, match, cap):
    """Per seed ``(Aho-Corasick, S_pi, minimal)`` state counts.

    ``accepts[i, a]`` is the position mask of symbol ``a`` for seed ``i``,
    ``sizes[i, j]`` the number of symbols of its ``j``-th letter.
    """
    n_seeds = spans.shape[0]
    out = np.empty((n_seeds, 3), dtype=np.int64)
    rows = np.empty((cap, accepts.shape[1]), dtype=np.int64)
    for i in range(n_seeds):
        m = spans[i]
        n, final_id = _spi_rows(m, accepts[i], match, rows)
        out[i, 0] = _ac_size(sizes[i, :m])
        out[i, 1] = n
        out[i, 2] = _min_size(rows, n, final_id)
    return out


MAX_SPAN = 56  # keeps the packed (X, t) keys below 2**62


def glyph_size_batch(glyphs, seed_alphabet) -> np.ndarray:
    """``(len(glyphs), 3)`` array of (Aho-Corasick, S_pi, minimal) sizes.

    ``glyphs`` are seed strings over ``seed_alphabet``; no Seed objects are
    built, so millions of seeds can be streamed through in batches.
    """
    glyphs = list(glyphs)
    out = np.zeros((len(glyphs), 3), dtype=np.int64)
    if not glyphs:
        return out
    alphabet = seed_alphabet.alphabet
    k = len(alphabet)
    match = alphabet.match_index
    letters = seed_alphabet.letters
    code = np.full(256, -1, dtype=np.int64)
    member = np.zeros((len(letters), k), dtype=np.int64)
    for j, letter in enumerate(letters):
        code[ord(letter.glyph)] = j
        member[j, sorted(letter.subset)] = 1
    widths = member.sum(axis=1)
    sharp = member[:, match] * (widths == 1)
    by_span: dict[int, list[int]] = {}
    for i, g in enumerate(glyphs):
        by_span.setdefault(len(g), []).append(i)
    for span, idx in by_span.items():
        if span > MAX_SPAN:
            raise ResourceLimitError(f"span {span} exceeds the kernel limit {MAX_SPAN}")
        raw = np.frombuffer("".join(glyphs[i] for i in idx).encode("ascii"), dtype=np.uint8)
        lid = code[raw].reshape(len(idx), span)
        if (lid < 0).any():
            raise InputError("glyph outside the seed alphabet")
        bits = np.int64(1) << np.arange(span, dtype=np.int64)
        accepts = member[lid].transpose(0, 2, 1) @ bits
        sizes = widths[lid]
        w_count = sharp[lid].sum(axis=1)
        cap = int(((w_count + 1) << (span - w_count)).max()) + 1
        spans = np.full(len(idx), span, dtype=np.int64)
        out[idx] = size_batch(spans, accepts, sizes, match, cap)
    return out


def automaton_size_batch(seeds) -> np.ndarray:
    """Same as :func:`glyph_size_batch` for a list of Seed objects."""
    if not seeds:
        return np.zeros((0, 3), dtype=np.int64)
    return glyph_size_batch([s.glyphs for s in seeds], seeds[0].seed_alphabet)
