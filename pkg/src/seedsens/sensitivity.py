"""Seed sensitivity as a ratio of two path-weight sums.

The sensitivity of a seed is ``P(L_T & L_seed) / P(L_T)`` where ``L_T`` is a
finite set of target alignments recognized by an acyclic DFA and the
probabilities come from a probability transducer ``G``.  Each probability
is the total weight of the accepting paths in the product of a DFA with
``G``, summed by a forward dynamic program over word positions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .automata import AlignmentAlphabet, Dfa, coreachable_mask, longest_accepted_length, product_intersection
from .errors import InputError, InvariantError, ResourceLimitError
from .probmodel import ProbTransducer, check
from .seeds import Seed, build_spi_automaton

log = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-9
MAX_PRODUCT_CELLS = 2**27


def target_all_words(alphabet: AlignmentAlphabet, n: int) -> Dfa:
    """DFA accepting exactly the words of length ``n``.

    States ``0..n`` count the symbols read (``n`` is final); state ``n + 1``
    is an absorbing reject sink.
    """
    if n < 1:
        raise InputError(f"target length must be >= 1, got {n}")
    k = len(alphabet)
    delta = np.empty((n + 2, k), dtype=np.int64)
    delta[: n + 1] = np.arange(1, n + 2)[:, None]
    delta[n + 1] = n + 1
    return Dfa(alphabet, delta, 0, frozenset([n]))


@dataclass(frozen=True, eq=False)
class PwAutomaton:
    """Probability-weighted product of a DFA ``K`` and a transducer ``G``.

    ``states[i] = (k, g)`` lists the reachable pairs in breadth-first order,
    with ``states[0]`` the initial pair.  A pair is final when its DFA
    component is.  The transition ``((k, g), a, (K(k, a), g'))`` carries
    weight ``rho_G(g, a, g')``.
    """

    dfa: Dfa
    transducer: ProbTransducer
    states: np.ndarray

    initial = 0

    @property
    def num_states(self) -> int:
        return len(self.states)

    @cached_property
    def final_mask(self) -> np.ndarray:
        return self.dfa.final_mask[self.states[:, 0]]

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {(int(k), int(g)): i for i, (k, g) in enumerate(self.states)}

    @cached_property
    def transitions(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Arrays ``(src, symbol, dst, probability)`` over state indices."""
        ng = self.transducer.num_states
        lookup = np.full(self.dfa.num_states * ng, -1, dtype=np.int64)
        lookup[self.states[:, 0] * ng + self.states[:, 1]] = np.arange(self.num_states)
        src, sym, dst, prob = [], [], [], []
        kk, gg = self.states[:, 0], self.states[:, 1]
        for a in range(len(self.dfa.alphabet)):
            Pa = self.transducer.matrices[a]
            rows, cols = np.nonzero(Pa[gg] > 0)
            src.append(rows)
            sym.append(np.full(len(rows), a))
            dst.append(lookup[self.dfa.delta[kk[rows], a] * ng + cols])
            prob.append(Pa[gg[rows], cols])
        out = tuple(np.concatenate(x) for x in (src, sym, dst, prob))
        if (out[2] < 0).any():
            raise InvariantError("product transition leaves the reachable set")
        return out


def pw_product(k: Dfa, g: ProbTransducer) -> PwAutomaton:
    """Reachable part of ``K x G``."""
    if k.alphabet != g.alphabet:
        raise InputError(f"alphabet mismatch: {k.alphabet.symbols} vs {g.alphabet.symbols}")
    nk, ng = k.num_states, g.num_states
    if nk * ng > MAX_PRODUCT_CELLS:
        raise ResourceLimitError(f"product of {nk} x {ng} states is too large")
    P = g.matrices
    ids = np.full(nk * ng, -1, dtype=np.int64)
    start = k.initial * ng + g.initial
    ids[start] = 0
    found = [np.array([start])]
    count = 1
    frontier = found[0]
    while frontier.size:
        kk, gg = np.divmod(frontier, ng)
        cand = []
        for a in range(len(k.alphabet)):
            rows, cols = np.nonzero(P[a][gg] > 0)
            cand.append(k.delta[kk[rows], a] * ng + cols)
        cand = np.unique(np.concatenate(cand))
        cand = cand[ids[cand] < 0]
        ids[cand] = np.arange(count, count + cand.size)
        count += cand.size
        found.append(cand)
        frontier = cand
    keys = np.concatenate(found)
    states = np.stack(np.divmod(keys, ng), axis=1)
    states.setflags(write=False)
    return PwAutomaton(k, g, states)


@dataclass
class DpTrace:
    """Outcome of the forward path-weight computation."""

    probability: float
    steps: int
    live_mass: list[float] = field(default_factory=list)
    dropped_mass: list[float] = field(default_factory=list)

    @property
    def conservation_error(self) -> float:
        """Largest deviation of ``live + dropped`` from 1 over all steps."""
        if not self.live_mass:
            return 0.0
        total = np.asarray(self.live_mass) + np.asarray(self.dropped_mass)
        return float(np.abs(total - 1.0).max())


def path_weight_trace(w: PwAutomaton, horizon: int) -> DpTrace:
    """Total weight of the full paths of ``w`` of length at most ``horizon``.

    Mass starts at the initial pair and is pushed one symbol per step.
    Mass sitting in a final pair after step ``i`` is the weight of the full
    paths of length ``i``; it is added to the result and keeps flowing, so
    every full path is counted exactly once.  Mass entering a DFA state
    that cannot reach a final state is dropped and tallied separately;
    with a stochastic transducer and a complete DFA, live plus dropped mass
    stays 1 at every step.
    """
    if horizon <= 0:
        raise InputError(f"horizon must be positive, got {horizon}")
    K, G = w.dfa, w.transducer
    P = G.matrices
    delta = K.delta
    final = K.final_mask
    dead = ~coreachable_mask(K)

    V = np.zeros((K.num_states, G.num_states))
    V[K.initial, G.initial] = 1.0
    dropped = 0.0
    if dead[K.initial]:
        dropped, V[:] = 1.0, 0.0
    total = float(V[final].sum())
    trace = DpTrace(0.0, horizon)
    for _ in range(horizon):
        active = np.flatnonzero(V.any(axis=1))
        if active.size == 0:
            trace.live_mass.append(0.0)
            trace.dropped_mass.append(dropped)
            continue
        Va = V[active]
        V = np.zeros_like(V)
        for a in range(len(K.alphabet)):
            np.add.at(V, delta[active, a], Va @ P[a])
        lost = V[dead]
        if lost.size:
            dropped += float(lost.sum())
            V[dead] = 0.0
        total += float(V[final].sum())
        trace.live_mass.append(float(V.sum()))
        trace.dropped_mass.append(dropped)
    trace.probability = total
    return trace


def path_weight_dp(w: PwAutomaton, horizon: int) -> float:
    return path_weight_trace(w, horizon).probability


@dataclass(frozen=True)
class SensitivityResult:
    p_joint: float
    p_target: float
    sensitivity: float
    diagnostics: dict = field(default_factory=dict, compare=False)


def target_probability(target: Dfa, g: ProbTransducer, horizon: int | None = None) -> DpTrace:
    if horizon is None:
        horizon = longest_accepted_length(target)
    return path_weight_trace(pw_product(target, g), horizon)


def compute_sensitivity(
    seed: Seed,
    target: Dfa,
    g: ProbTransducer,
    *,
    denominator: DpTrace | None = None,
) -> SensitivityResult:
    """Probability that a target alignment drawn from ``g`` is hit by ``seed``.

    ``denominator`` may carry a precomputed :func:`target_probability` for
    the same ``target`` and ``g`` when many seeds are scored.
    """
    if not (seed.alphabet == target.alphabet == g.alphabet):
        raise InputError("seed, target and model must share one alignment alphabet")
    check(g)
    horizon = longest_accepted_length(target)
    spi = build_spi_automaton(seed)
    joint_dfa = product_intersection(target, spi)
    joint_pw = pw_product(joint_dfa, g)
    num = path_weight_trace(joint_pw, horizon)
    den = denominator if denominator is not None else target_probability(target, g, horizon)
    if den.probability <= 0:
        raise InputError("target language has zero probability")
    for name, tr in (("numerator", num), ("denominator", den)):
        if tr.conservation_error > MASS_TOLERANCE:
            raise InvariantError(f"{name} mass not conserved: error {tr.conservation_error:.3g}")
    if num.probability > den.probability * (1 + MASS_TOLERANCE) + MASS_TOLERANCE:
        raise InvariantError("joint probability exceeds target probability")
    diagnostics = {
        "target_states": target.num_states,
        "seed_states": spi.num_states,
        "product_states": joint_dfa.num_states,
        "pw_states": joint_pw.num_states,
        "steps": horizon,
        "conservation_error": max(num.conservation_error, den.conservation_error),
    }
    return SensitivityResult(
        num.probability, den.probability, num.probability / den.probability, diagnostics
    )


def sensitivity(seed: Seed, n: int, g: ProbTransducer) -> float:
    """Sensitivity over all target alignments of length ``n``."""
    return compute_sensitivity(seed, target_all_words(g.alphabet, n), g).sensitivity


def all_words_hit_probability(seed_dfa: Dfa, g: ProbTransducer, n: int) -> tuple[float, float]:
    """``(P(hit words of length n), P(all words of length n))`` in one pass.

    Shortcut for the all-words target: its product with an absorbing-final
    seed DFA is the seed DFA graded by length, so the forward DP can run on
    ``seed_dfa x g`` directly for ``n`` steps, pushing mass along an edge
    list with ``np.bincount``.  Used for bulk seed scoring.
    """
    if seed_dfa.alphabet != g.alphabet:
        raise InputError("seed automaton and model use different alphabets")
    if n < 1:
        raise InputError(f"target length must be >= 1, got {n}")
    ng = g.num_states
    size = seed_dfa.num_states * ng
    a_idx, g_idx, h_idx = np.nonzero(g.matrices)
    weight = g.matrices[a_idx, g_idx, h_idx]
    q = np.arange(seed_dfa.num_states)[:, None]
    src = (q * ng + g_idx).ravel()
    dst = (seed_dfa.delta[:, a_idx] * ng + h_idx).ravel()
    prob = np.broadcast_to(weight, (seed_dfa.num_states, weight.size)).ravel()
    v = np.zeros(size)
    v[seed_dfa.initial * ng + g.initial] = 1.0
    for _ in range(n):
        v = np.bincount(dst, weights=v[src] * prob, minlength=size)
    final = np.repeat(seed_dfa.final_mask, ng)
    return float(v[final].sum()), float(v.sum())
