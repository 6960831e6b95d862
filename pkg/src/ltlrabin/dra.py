"""Deterministic Rabin automata obtained by degeneralization."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ResourceCapExceeded
from .tgdra import Tgdra, _check_alphabet, quotient, refine, run_cycle
from .words import Alphabet, LassoWord


@dataclass(frozen=True, eq=False)
class Dra:
    """State-based Rabin automaton; ``pairs[i] = (K_i, L_i)`` as state bitsets.

    ``labels[s]`` is ``(tgdra_state, levels)`` for states built by
    :func:`degeneralize`.
    """

    alphabet: Alphabet
    trans: tuple[tuple[int, ...], ...]
    initial: int
    pairs: tuple[tuple[int, int], ...]
    labels: tuple = ()

    @property
    def n_states(self) -> int:
        return len(self.trans)

    @property
    def n_letters(self) -> int:
        return self.alphabet.size

    def size(self) -> str:
        return f"{self.n_states}({len(self.pairs)})"

    def accepts_lasso(self, w: LassoWord) -> bool:
        return dra_accepts_lasso(self, w)


def next_level(level: int, h: int, in_k: bool, in_ls) -> int:
    """Level update of one pair for one edge.

    ``in_ls[j]`` tells whether the edge lies in ``L^{j+1}``.
    """
    if in_k:
        return 0
    j = level if 1 <= level <= h else 1
    while j <= h and in_ls[j - 1]:
        j += 1
    return j


def degeneralize(t: Tgdra, cap: int | None = None) -> Dra:
    nl = t.n_letters
    hs = [len(p.ls) for p in t.pairs]
    start = (t.initial, tuple(1 for _ in t.pairs))
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        m, levels = order[i]
        row = []
        for a in range(nl):
            e = m * nl + a
            new_levels = tuple(
                next_level(l, h, bool(p.k >> e & 1), [bool(x >> e & 1) for x in p.ls])
                for l, h, p in zip(levels, hs, t.pairs)
            )
            q = (t.trans[m][a], new_levels)
            j = index.get(q)
            if j is None:
                if cap is not None and len(order) >= cap:
                    raise ResourceCapExceeded(f"more than {cap} Rabin automaton states")
                j = index[q] = len(order)
                order.append(q)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    pairs = []
    for r, h in enumerate(hs):
        k = l = 0
        for s, (_, levels) in enumerate(order):
            if levels[r] == 0:
                k |= 1 << s
            elif levels[r] == h + 1:
                l |= 1 << s
        pairs.append((k, l))
    return Dra(t.alphabet, tuple(rows), 0, tuple(pairs), tuple(order))


# --------------------------------------------------------------------------
# simplification


def _state_sig(d: Dra, s: int) -> tuple:
    return tuple((k >> s & 1, l >> s & 1) for k, l in d.pairs)


def _reorder(d: Dra, trans, reps) -> Dra:
    def remap(bits):
        out = 0
        for new_s, old_s in enumerate(reps):
            if bits >> old_s & 1:
                out |= 1 << new_s
        return out

    pairs = tuple((remap(k), remap(l)) for k, l in d.pairs)
    labels = tuple(d.labels[r] for r in reps) if d.labels else ()
    return replace(d, trans=trans, initial=0, pairs=pairs, labels=labels)


def _bfs(trans, start, n_letters):
    """Renumber the states reachable from ``start`` in BFS order."""
    order = [start]
    pos = {start: 0}
    rows = []
    i = 0
    while i < len(order):
        row = []
        for a in range(n_letters):
            u = trans[order[i]][a]
            if u not in pos:
                pos[u] = len(order)
                order.append(u)
            row.append(pos[u])
        rows.append(tuple(row))
        i += 1
    return tuple(rows), order


def merge_states(d: Dra) -> Dra:
    nl = d.n_letters
    while True:
        block = refine(d.n_states, nl, d.trans, [_state_sig(d, s) for s in range(d.n_states)], lambda s, a: 0)
        trans, _, reps = quotient(d.trans, d.initial, block, nl)
        d2 = _reorder(d, trans, reps)
        if not any(d2.initial in row for row in d2.trans):
            # the initial state is visited once: its acceptance marks are irrelevant
            b2 = refine(d2.n_states, nl, d2.trans, [_state_sig(d2, s) for s in range(d2.n_states)], lambda s, a: 0)
            want = tuple(b2[d2.trans[d2.initial][a]] for a in range(nl))
            for s in range(d2.n_states):
                if s != d2.initial and tuple(b2[d2.trans[s][a]] for a in range(nl)) == want:
                    trans, reps = _bfs(d2.trans, s, nl)
                    d2 = _reorder(d2, trans, reps)
                    break
        if d2.n_states == d.n_states:
            return d2
        d = d2


def simplify_pairs(d: Dra) -> Dra:
    """Drop pairs with empty ``L`` and duplicate pairs."""
    seen = []
    for k, l in d.pairs:
        if l & ~k and (k, l) not in seen:
            seen.append((k, l))
    return replace(d, pairs=tuple(seen))


def simplify_dra(d: Dra, acceptance: bool = True, states: bool = True) -> Dra:
    while True:
        before = (d.n_states, len(d.pairs))
        if acceptance:
            d = simplify_pairs(d)
        if states:
            d = merge_states(d)
        if (d.n_states, len(d.pairs)) == before:
            return d


# --------------------------------------------------------------------------
# acceptance


def dra_accepts_lasso(d: Dra, w: LassoWord) -> bool:
    _check_alphabet(d.alphabet, w)
    states, _ = run_cycle(d.trans, d.initial, w)
    inf = 0
    for s in states:
        inf |= 1 << s
    return any(not inf & k and inf & l for k, l in d.pairs)


def kernel_arrays(d: Dra):
    """Dense arrays for :func:`ltlrabin.kernels.accept` (state based)."""
    n = d.n_states
    fin = np.zeros((len(d.pairs), n), dtype=bool)
    inf = np.zeros((len(d.pairs), n), dtype=bool)
    for r, (k, l) in enumerate(d.pairs):
        for s in range(n):
            fin[r, s] = k >> s & 1
            inf[r, s] = l >> s & 1
    trans = np.array(d.trans, dtype=np.int64).reshape(n, d.n_letters)
    return trans, d.initial, fin, inf, np.arange(len(d.pairs), dtype=np.int64)


__all__ = [
    "Dra", "degeneralize", "next_level", "merge_states", "simplify_pairs",
    "simplify_dra", "dra_accepts_lasso", "kernel_arrays",
]
