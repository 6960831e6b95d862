"""Deterministic automata with transition-based generalized Rabin acceptance.

The state space is the macrostate semiautomaton of an MMAA (or limMMAA):
a macrostate is a set of configurations, each configuration a bitmask of
VWAA states.  Edges are numbered ``state * n_letters + letter`` and
acceptance sets are Python ints used as bitsets over edge numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .errors import AlphabetMismatch, ResourceCapExceeded
from .vwaa import Kind, Structure, Vwaa, check_structure, members
from .words import Alphabet, LassoWord

DEFAULT_CAP = 200_000


@dataclass(frozen=True)
class GenRabinPair:
    """``(K, {L_j})``: avoid ``K`` eventually and visit every ``L_j`` infinitely often.

    ``z`` is the bounding set the pair stems from and ``owners[j]`` the
    co-Buchi state that generated ``ls[j]``.
    """

    k: int
    ls: tuple[int, ...]
    z: int = 0
    owners: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class Tgdra:
    alphabet: Alphabet
    trans: tuple[tuple[int, ...], ...]
    initial: int
    pairs: tuple[GenRabinPair, ...]
    macrostates: tuple[frozenset, ...] = ()
    vwaa: Vwaa | None = field(default=None, repr=False)

    @property
    def n_states(self) -> int:
        return len(self.trans)

    @property
    def n_letters(self) -> int:
        return self.alphabet.size

    @property
    def all_edges(self) -> int:
        return (1 << (self.n_states * self.n_letters)) - 1

    def edge(self, s: int, a: int) -> int:
        return s * self.n_letters + a

    def accepts_lasso(self, w: LassoWord) -> bool:
        return tgdra_accepts_lasso(self, w)


# --------------------------------------------------------------------------
# semiautomaton


class _Succ:
    """Memoised successor configurations of a VWAA configuration."""

    def __init__(self, v: Vwaa):
        self.v = v
        self.memo: dict = {}

    def __call__(self, c: int, a: int) -> frozenset[int]:
        key = (c, a)
        hit = self.memo.get(key)
        if hit is None:
            choices = [self.v.delta[s][a] for s in members(c)]
            if any(not ch for ch in choices):
                hit = frozenset()
            else:
                out = set()
                for combo in product(*choices):
                    m = 0
                    for t in combo:
                        m |= t
                    out.add(m)
                hit = frozenset(out)
            self.memo[key] = hit
        return hit


def _collapse(m) -> frozenset:
    return frozenset([0]) if 0 in m else frozenset(m)


def build_semiautomaton(v: Vwaa, cap: int = DEFAULT_CAP):
    """Reachable macrostates and the deterministic transition table.

    Returns ``(macrostates, trans, succ)`` where ``trans[i][a]`` is a
    macrostate index; macrostate 0 is initial.  A macrostate without
    configurations is an ordinary (rejecting) sink.
    """
    succ = _Succ(v)
    init = _collapse(v.initial)
    index = {init: 0}
    macros = [init]
    trans = []
    i = 0
    while i < len(macros):
        m = macros[i]
        row = []
        for a in v.alphabet.letters():
            out = set()
            for c in m:
                out |= succ(c, a)
            m2 = _collapse(out)
            j = index.get(m2)
            if j is None:
                if len(macros) >= cap:
                    raise ResourceCapExceeded(f"more than {cap} macrostates")
                j = index[m2] = len(macros)
                macros.append(m2)
            row.append(j)
        trans.append(tuple(row))
        i += 1
    return tuple(macros), tuple(trans), succ


# --------------------------------------------------------------------------
# bounding sets


def _otimes(xs, ys):
    return {a | b for a in xs for b in ys}


def compute_bounding_sets(v: Vwaa) -> list[int]:
    """The family of bounding sets ``Z`` (as state bitmasks), sorted."""
    must = v.must_mask
    z_memo: dict[int, set] = {}
    y_memo: dict[int, set] = {}

    def zbar(c, fn):
        out = {0}
        for s in members(c):
            out = _otimes(out, fn(s))
            if not out:
                break
        return out

    def non_looping(s):
        bit = 1 << s
        return {c for targets in v.delta[s] for c in targets if not c & bit}

    def must_part(s):
        bit = 1 << s
        targets = {c & ~bit for row in v.delta[s] for c in row}
        closure = {0}
        for t in targets:
            closure |= {u | t for u in closure}
        out = set()
        for u in closure:
            out |= zbar(u, z)
        return _otimes({bit}, out)

    def z(s):
        hit = z_memo.get(s)
        if hit is None:
            if must >> s & 1:
                hit = must_part(s)
            else:
                out = set()
                for c in non_looping(s):
                    out |= zbar(c, z)
                hit = _otimes({1 << s}, out)
            z_memo[s] = hit
        return hit

    def y(s):
        hit = y_memo.get(s)
        if hit is None:
            if must >> s & 1:
                hit = z(s)
            else:
                hit = set()
                for c in non_looping(s):
                    hit |= zbar(c, y)
            y_memo[s] = hit
        return hit

    family = set()
    for c in v.initial:
        family |= zbar(c, y)
    if check_structure(v) is Structure.LIM_MMAA:
        family = {zz for zz in family if _restricted(v, zz)}
    return sorted(family, key=lambda zz: (bin(zz).count("1"), _lex(zz)))


def _lex(mask: int) -> tuple[int, ...]:
    return tuple(members(mask))


def _restricted(v: Vwaa, zz: int) -> bool:
    """Only must-states and may-states reachable from the must-states of ``zz``."""
    kinds = v.kinds
    core = zz & v.must_mask
    seen = 0
    frontier = core
    while frontier:
        seen |= frontier
        nxt = 0
        for s in members(frontier):
            nxt |= v.successors[s]
        frontier = nxt & ~seen
    for s in members(zz & ~core):
        if kinds[s] is not Kind.MAY or not seen >> s & 1:
            return False
    return True


def allowed_configurations(v: Vwaa, zz: int) -> list[int]:
    core = zz & v.must_mask
    free = list(members(zz & ~core))
    out = []
    for bits in range(1 << len(free)):
        c = core
        for i, s in enumerate(free):
            if bits >> i & 1:
                c |= 1 << s
        out.append(c)
    return out


def allowed_macrotransitions(v: Vwaa, macros, trans, succ, zz: int):
    """``(AT_Z, {f: AT_Z^f})`` as edge bitsets.

    A macrotransition on ``a`` is allowed when its target holds a
    configuration reachable on ``a`` from some allowed configuration.
    """
    n_letters = v.alphabet.size
    allowed = set(allowed_configurations(v, zz))
    reach = []
    for a in range(n_letters):
        r = set()
        for c1 in allowed:
            r |= succ(c1, a)
        reach.append(r & allowed)
    exits = {}
    for f in members(zz & v.cobuchi_mask):
        bit = 1 << f
        exits[f] = [
            any(not c & bit and c & ~zz == 0 for c in v.delta[f][a]) for a in range(n_letters)
        ]
    at = 0
    at_f = {f: 0 for f in exits}
    for s, row in enumerate(trans):
        for a, t in enumerate(row):
            if reach[a] and not reach[a].isdisjoint(macros[t]):
                e = 1 << (s * n_letters + a)
                at |= e
                for f, ok in exits.items():
                    if ok[a]:
                        at_f[f] |= e
    return at, at_f


def build_tgdra(v: Vwaa, cap: int = DEFAULT_CAP) -> Tgdra:
    macros, trans, succ = build_semiautomaton(v, cap)
    n_edges = len(trans) * v.alphabet.size
    full = (1 << n_edges) - 1
    pairs = []
    for zz in compute_bounding_sets(v):
        at, at_f = allowed_macrotransitions(v, macros, trans, succ, zz)
        owners = tuple(sorted(at_f))
        pairs.append(GenRabinPair(full & ~at, tuple(at_f[f] for f in owners), zz, owners))
    return Tgdra(v.alphabet, trans, 0, tuple(pairs), macros, v)


# --------------------------------------------------------------------------
# simplification


def _sccs(n: int, succs: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative."""
    index = [0] * n
    low = [0] * n
    on = [False] * n
    seen = [False] * n
    stack: list[int] = []
    out = []
    counter = 1
    for root in range(n):
        if seen[root]:
            continue
        work = [(root, 0)]
        while work:
            s, i = work.pop()
            if i == 0:
                seen[s] = True
                index[s] = low[s] = counter
                counter += 1
                stack.append(s)
                on[s] = True
            if i < len(succs[s]):
                work.append((s, i + 1))
                t = succs[s][i]
                if not seen[t]:
                    work.append((t, 0))
                elif on[t]:
                    low[s] = min(low[s], index[t])
                continue
            if low[s] == index[s]:
                comp = []
                while True:
                    t = stack.pop()
                    on[t] = False
                    comp.append(t)
                    if t == s:
                        break
                out.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[s])
    return out


def _edge_components(n_states, n_letters, trans, allowed: int) -> list[int]:
    """Edge sets of the nontrivial SCCs of the graph restricted to ``allowed`` edges."""
    succs = [[] for _ in range(n_states)]
    for s in range(n_states):
        for a in range(n_letters):
            if allowed >> (s * n_letters + a) & 1:
                succs[s].append(trans[s][a])
    comps = []
    for comp in _sccs(n_states, succs):
        members_ = set(comp)
        edges = 0
        for s in comp:
            for a in range(n_letters):
                e = s * n_letters + a
                if allowed >> e & 1 and trans[s][a] in members_:
                    edges |= 1 << e
        if edges:
            comps.append(edges)
    return comps


def _good_components(t: Tgdra, p: GenRabinPair) -> list[int]:
    comps = _edge_components(t.n_states, t.n_letters, t.trans, t.all_edges & ~p.k)
    return [c for c in comps if all(c & l for l in p.ls)]


def _implies(t: Tgdra, p: GenRabinPair, q: GenRabinPair, comps) -> bool:
    """Sufficient check that every run satisfying ``p`` satisfies ``q``."""
    for c in comps:
        if c & q.k:
            return False
        for lq in q.ls:
            if c & ~lq == 0:
                continue
            if not any((c & lp) & ~lq == 0 for lp in p.ls):
                return False
    return True


def simplify_acceptance(t: Tgdra) -> Tgdra:
    """Drop unsatisfiable pairs, redundant L-sets and implied pairs."""
    pairs = []
    for p in t.pairs:
        if not _good_components(t, p):
            continue
        ls, owners = [], []
        for j, l in enumerate(p.ls):
            dominated = any(
                (m & ~l == 0) and (m != l or i < j) for i, m in enumerate(p.ls) if i != j
            )
            if not dominated:
                ls.append(l)
                owners.append(p.owners[j] if p.owners else j)
        pairs.append(replace(p, ls=tuple(ls), owners=tuple(owners)))
    comps = [_good_components(t, p) for p in pairs]
    alive = [True] * len(pairs)
    for i, p in enumerate(pairs):
        for j, q in enumerate(pairs):
            if i != j and alive[j] and _implies(t, p, q, comps[i]):
                alive[i] = False
                break
    return replace(t, pairs=tuple(p for p, ok in zip(pairs, alive) if ok))


def _edge_sig(t: Tgdra, e: int) -> tuple:
    return tuple((p.k >> e & 1, tuple(l >> e & 1 for l in p.ls)) for p in t.pairs)


def refine(n_states, n_letters, trans, initial_blocks, edge_label):
    """Coarsest partition compatible with successors and edge labels.

    ``initial_blocks[s]`` seeds the partition; ``edge_label(s, a)`` tags each
    edge.  Returns block ids numbered by first occurrence.
    """
    block = _renumber(list(initial_blocks))
    while True:
        sigs = [
            (block[s],) + tuple((block[trans[s][a]], edge_label(s, a)) for a in range(n_letters))
            for s in range(n_states)
        ]
        new = _renumber(sigs)
        if len(set(new)) == len(set(block)):
            return new
        block = new


def _renumber(keys):
    ids: dict = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def quotient(trans, initial, block, n_letters):
    """Collapse states by ``block``; returns ``(trans, initial, rep)`` in BFS order."""
    rep: dict[int, int] = {}
    for s in range(len(trans)):
        rep.setdefault(block[s], s)
    order = [block[initial]]
    pos = {block[initial]: 0}
    i = 0
    rows = []
    while i < len(order):
        s = rep[order[i]]
        row = []
        for a in range(n_letters):
            b = block[trans[s][a]]
            if b not in pos:
                pos[b] = len(order)
                order.append(b)
            row.append(pos[b])
        rows.append(tuple(row))
        i += 1
    return tuple(rows), 0, [rep[b] for b in order]


def _remap_edges(bits: int, reps, n_letters) -> int:
    out = 0
    for new_s, old_s in enumerate(reps):
        chunk = bits >> (old_s * n_letters) & ((1 << n_letters) - 1)
        out |= chunk << (new_s * n_letters)
    return out


def _initial_merge_target(trans, initial, block, n_letters):
    """Another state the initial state may merge with, or ``None``.

    Only applies when the initial state has no incoming edges, so its
    outgoing edges are taken at most once.
    """
    if any(initial in row for row in trans):
        return None
    want = tuple(block[trans[initial][a]] for a in range(n_letters))
    for s in range(len(trans)):
        if s != initial and tuple(block[trans[s][a]] for a in range(n_letters)) == want:
            return s
    return None


def merge_states(t: Tgdra) -> Tgdra:
    """Merge equivalent states until nothing changes."""
    nl = t.n_letters
    while True:
        block = refine(t.n_states, nl, t.trans, [0] * t.n_states, lambda s, a: _edge_sig(t, s * nl + a))
        trans, init, reps = quotient(t.trans, t.initial, block, nl)
        t2 = _rebuild(t, trans, init, reps)
        target = _initial_merge_target(t2.trans, t2.initial, block_of(t2), nl)
        if target is not None:
            t2 = _rebase(t2, target)
        if t2.n_states == t.n_states:
            return t2
        t = t2


def block_of(t: Tgdra):
    nl = t.n_letters
    return refine(t.n_states, nl, t.trans, [0] * t.n_states, lambda s, a: _edge_sig(t, s * nl + a))


def _rebuild(t: Tgdra, trans, init, reps) -> Tgdra:
    nl = t.n_letters
    pairs = tuple(
        replace(p, k=_remap_edges(p.k, reps, nl), ls=tuple(_remap_edges(l, reps, nl) for l in p.ls))
        for p in t.pairs
    )
    macros = tuple(t.macrostates[r] for r in reps) if t.macrostates else ()
    return replace(t, trans=trans, initial=init, pairs=pairs, macrostates=macros)


def _rebase(t: Tgdra, new_initial: int) -> Tgdra:
    """Restart from ``new_initial``, keeping only reachable states."""
    nl = t.n_letters
    order = [new_initial]
    pos = {new_initial: 0}
    i = 0
    rows = []
    while i < len(order):
        s = order[i]
        row = []
        for a in range(nl):
            u = t.trans[s][a]
            if u not in pos:
                pos[u] = len(order)
                order.append(u)
            row.append(pos[u])
        rows.append(tuple(row))
        i += 1
    return _rebuild(t, tuple(rows), 0, order)


def simplify_tgdra(t: Tgdra, acceptance: bool = True, states: bool = True) -> Tgdra:
    while True:
        before = (t.n_states, len(t.pairs), tuple(len(p.ls) for p in t.pairs))
        if acceptance:
            t = simplify_acceptance(t)
        if states:
            t = merge_states(t)
        if (t.n_states, len(t.pairs), tuple(len(p.ls) for p in t.pairs)) == before:
            return t


# --------------------------------------------------------------------------
# acceptance


def _check_alphabet(alphabet: Alphabet, w: LassoWord):
    if w.alphabet != alphabet:
        raise AlphabetMismatch(f"word over {w.alphabet.props!r}, automaton over {alphabet.props!r}")


def run_cycle(trans, initial, w: LassoWord) -> tuple[list[int], list[int]]:
    """States and letters of the recurring part of the unique run on ``w``."""
    s = initial
    for a in w.prefix:
        s = trans[s][a]
    q = len(w.period)
    seen: dict[tuple[int, int], int] = {}
    states, letters = [], []
    pos = 0
    while (s, pos) not in seen:
        seen[(s, pos)] = len(states)
        a = w.period[pos]
        states.append(s)
        letters.append(a)
        s = trans[s][a]
        pos = (pos + 1) % q
    start = seen[(s, pos)]
    return states[start:], letters[start:]


def tgdra_accepts_lasso(t: Tgdra, w: LassoWord) -> bool:
    _check_alphabet(t.alphabet, w)
    states, letters = run_cycle(t.trans, t.initial, w)
    inf = 0
    for s, a in zip(states, letters):
        inf |= 1 << (s * t.n_letters + a)
    return any(not inf & p.k and all(inf & l for l in p.ls) for p in t.pairs)


def kernel_arrays(t: Tgdra):
    """Dense arrays for :func:`ltlrabin.kernels.accept` (edge based)."""
    n_edges = t.n_states * t.n_letters
    fin = np.zeros((len(t.pairs), n_edges), dtype=bool)
    rows, owner = [], []
    for r, p in enumerate(t.pairs):
        fin[r] = _bits(p.k, n_edges)
        for l in p.ls:
            rows.append(_bits(l, n_edges))
            owner.append(r)
    inf = np.array(rows, dtype=bool).reshape(len(rows), n_edges)
    trans = np.array(t.trans, dtype=np.int64).reshape(t.n_states, t.n_letters)
    return trans, t.initial, fin, inf, np.array(owner, dtype=np.int64)


def _bits(mask: int, width: int) -> np.ndarray:
    raw = mask.to_bytes((width + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:width].astype(bool)


__all__ = [
    "GenRabinPair", "Tgdra", "build_semiautomaton", "compute_bounding_sets",
    "allowed_configurations", "allowed_macrotransitions", "build_tgdra",
    "simplify_acceptance", "merge_states", "simplify_tgdra", "tgdra_accepts_lasso",
    "kernel_arrays", "refine", "quotient", "run_cycle",
]
