"""Very weak alternating co-Buchi automata over explicit letters.

States are formulae.  A configuration is a set of states, stored as a
bitmask over ``Vwaa.states``; ``delta[s][a]`` is the set of target
configurations of state ``s`` on letter ``a``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import NotMmaa, StructureViolation, UnsupportedFragment
from .ltl import (
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    FragmentClass,
    Formula,
    Next,
    Not,
    Or,
    StrictAlways,
    StrictEventually,
    TrueF,
    Until,
    atoms,
    classify_fragment,
    conj,
    disj,
    offending_subformula,
    sort_key,
)
from .labels import cover
from .words import Alphabet

Config = frozenset  # of Formula, used while building


class Kind(enum.Enum):
    MAY = "May"
    MUST = "Must"
    LOOPLESS = "Loopless"


class Structure(enum.Enum):
    MMAA = "Mmaa"
    LIM_MMAA = "LimMmaa"
    NOT_VERY_WEAK = "NotVeryWeak"
    OTHER = "Other"


def members(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True, eq=False)
class Vwaa:
    states: tuple[Formula, ...]
    alphabet: Alphabet
    delta: tuple[tuple[frozenset[int], ...], ...]
    initial: frozenset[int]
    cobuchi: frozenset[int]

    def _key(self):
        return (self.states, self.alphabet, self.delta, self.initial, self.cobuchi)

    def __eq__(self, other):
        return isinstance(other, Vwaa) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, f: Formula) -> int:
        return self.states.index(f)

    def config(self, mask: int) -> frozenset[Formula]:
        return frozenset(self.states[i] for i in members(mask))

    def transitions(self) -> Iterator[tuple[int, int, int]]:
        """All ``(source, letter, target_mask)`` triples in a fixed order."""
        for s, row in enumerate(self.delta):
            for a, targets in enumerate(row):
                for c in sorted(targets):
                    yield s, a, c

    @cached_property
    def successors(self) -> tuple[int, ...]:
        """Bitmask of the states occurring in some target of each state."""
        out = []
        for row in self.delta:
            m = 0
            for targets in row:
                for c in targets:
                    m |= c
            out.append(m)
        return tuple(out)

    @cached_property
    def has_predecessor(self) -> tuple[bool, ...]:
        hit = 0
        for s, m in enumerate(self.successors):
            hit |= m & ~(1 << s)
        return tuple(bool(hit >> s & 1) for s in range(self.n))

    @cached_property
    def kinds(self) -> tuple[Kind | None, ...]:
        """Category of every state, ``None`` where no category fits."""
        return tuple(_kind(self, s) for s in range(self.n))

    @cached_property
    def must_mask(self) -> int:
        return sum(1 << s for s, k in enumerate(self.kinds) if k is Kind.MUST)

    @cached_property
    def cobuchi_mask(self) -> int:
        return sum(1 << s for s in self.cobuchi)

    def to_sets(self):
        """Formula-level view used by the rewriting passes."""
        delta = {
            f: [{self.config(c) for c in targets} for targets in self.delta[s]]
            for s, f in enumerate(self.states)
        }
        initial = {self.config(c) for c in self.initial}
        cobuchi = {self.states[s] for s in self.cobuchi}
        return delta, initial, cobuchi


def _kind(v: Vwaa, s: int) -> Kind | None:
    bit = 1 << s
    row = v.delta[s]
    if all(bit in targets for targets in row):
        return Kind.MAY
    looping = [c & bit for targets in row for c in targets]
    if not looping:
        return Kind.MUST if v.has_predecessor[s] else Kind.LOOPLESS
    if all(looping):
        return Kind.MUST
    if not any(looping):
        return Kind.LOOPLESS
    return None


def build(alphabet, delta, initial, cobuchi) -> Vwaa:
    """Assemble a :class:`Vwaa` from formula-level data.

    Only states reachable from the initial configurations are kept; states
    are ordered canonically.
    """
    reach = set()
    stack = [s for c in initial for s in c]
    while stack:
        s = stack.pop()
        if s in reach:
            continue
        reach.add(s)
        for targets in delta[s]:
            for c in targets:
                stack.extend(c)
    states = tuple(sorted(reach, key=sort_key))
    pos = {f: i for i, f in enumerate(states)}

    def mask(c):
        m = 0
        for f in c:
            m |= 1 << pos[f]
        return m

    rows = tuple(
        tuple(frozenset(mask(c) for c in targets) for targets in delta[f]) for f in states
    )
    return Vwaa(
        states,
        alphabet,
        rows,
        frozenset(mask(c) for c in initial),
        frozenset(pos[f] for f in cobuchi if f in pos),
    )


# --------------------------------------------------------------------------
# translation


def _otimes(xs, ys):
    return {a | b for a in xs for b in ys}


def translate_ltl_to_vwaa(f: Formula, alphabet: Alphabet | None = None) -> Vwaa:
    """Tableau translation of a formula in positive normal form."""
    if classify_fragment(f) is FragmentClass.UNSUPPORTED:
        bad = offending_subformula(f)
        raise UnsupportedFragment(f"unsupported subformula: {bad}", bad)
    if alphabet is None:
        alphabet = Alphabet.of(atoms(f))
    props = alphabet.props
    bar_memo: dict = {}
    step_memo: dict = {}

    def bar(g):
        hit = bar_memo.get(g)
        if hit is None:
            if isinstance(g, And):
                hit = {Config()}
                for c in g.args:
                    hit = _otimes(hit, bar(c))
            elif isinstance(g, Or):
                hit = set().union(*(bar(c) for c in g.args))
            else:
                hit = {Config([g])}
            bar_memo[g] = hit
        return hit

    def dbar(g, a):
        if isinstance(g, And):
            out = {Config()}
            for c in g.args:
                out = _otimes(out, dbar(c, a))
                if not out:
                    break
            return out
        if isinstance(g, Or):
            return set().union(*(dbar(c, a) for c in g.args))
        return step(g, a)

    def step(g, a):
        key = (g, a)
        hit = step_memo.get(key)
        if hit is not None:
            return hit
        empty = {Config()}
        if isinstance(g, TrueF):
            out = empty
        elif isinstance(g, FalseF):
            out = set()
        elif isinstance(g, Atom):
            out = empty if a >> props.index(g.name) & 1 else set()
        elif isinstance(g, Not):
            c = g.child
            if isinstance(c, TrueF):
                out = set()
            elif isinstance(c, Atom):
                out = set() if a >> props.index(c.name) & 1 else empty
            else:  # pragma: no cover - excluded by the fragment check
                raise UnsupportedFragment(f"negation of {c}", g)
        elif isinstance(g, StrictAlways):
            out = {Config([Always(g.child)])}
        elif isinstance(g, StrictEventually):
            out = {Config([Eventually(g.child)])}
        elif isinstance(g, Always):
            out = {c | {g} for c in dbar(g.child, a)}
        elif isinstance(g, Eventually):
            out = {Config([g])} | dbar(g.child, a)
        elif isinstance(g, Next):
            out = set(bar(g.child))
        elif isinstance(g, Until):
            out = dbar(g.right, a) | _otimes({Config([g])}, dbar(g.left, a))
        else:  # pragma: no cover
            raise TypeError(g)
        step_memo[key] = out
        return out

    initial = bar(f)
    delta: dict = {}
    stack = [s for c in initial for s in c]
    while stack:
        s = stack.pop()
        if s in delta:
            continue
        delta[s] = [step(s, a) for a in alphabet.letters()]
        for targets in delta[s]:
            for c in targets:
                stack.extend(c)
    cobuchi = {s for s in delta if isinstance(s, (Eventually, Until))}
    return build(alphabet, delta, initial, cobuchi)


# --------------------------------------------------------------------------
# structure


def classify_state(v: Vwaa, s: int | Formula) -> Kind:
    if isinstance(s, Formula):
        s = v.index(s)
    k = v.kinds[s]
    if k is None:
        raise StructureViolation(f"state {v.states[s]} is neither may, must nor loopless")
    return k


def is_very_weak(v: Vwaa) -> bool:
    # Kahn's algorithm on the reaches-relation without selfloops
    outs = [m & ~(1 << s) for s, m in enumerate(v.successors)]
    indeg = [0] * v.n
    for m in outs:
        for t in members(m):
            indeg[t] += 1
    ready = [s for s in range(v.n) if indeg[s] == 0]
    done = 0
    while ready:
        s = ready.pop()
        done += 1
        for t in members(outs[s]):
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
    return done == v.n


def _reach_closure(v: Vwaa, mask: int) -> int:
    seen = 0
    frontier = mask
    while frontier:
        seen |= frontier
        nxt = 0
        for s in members(frontier):
            nxt |= v.successors[s]
        frontier = nxt & ~seen
    return seen


def check_structure(v: Vwaa) -> Structure:
    if not is_very_weak(v):
        return Structure.NOT_VERY_WEAK
    kinds = v.kinds
    if all(
        k is not None and (k is not Kind.LOOPLESS or not v.has_predecessor[s])
        for s, k in enumerate(kinds)
    ):
        return Structure.MMAA
    for s, k in enumerate(kinds):
        if k is Kind.MUST or s in v.cobuchi:
            continue
        bit = 1 << s
        if any(c & bit for targets in v.delta[s] for c in targets):
            return Structure.OTHER
    below = _reach_closure(v, v.must_mask)
    for s in members(below):
        if kinds[s] not in (Kind.MAY, Kind.MUST):
            return Structure.OTHER
    return Structure.LIM_MMAA


# --------------------------------------------------------------------------
# rewriting


def normalize_accepting_set(v: Vwaa) -> Vwaa:
    """Make the co-Buchi set coincide with the may-states of an MMAA.

    Must-states in the co-Buchi set are deleted with every transition that
    reaches them, may-states outside it are erased from targets, and looping
    transitions of may-states other than the selfloop are dropped.
    """
    kinds = [classify_state(v, s) for s in range(v.n)]
    delta, initial, cobuchi = v.to_sets()
    dead = {v.states[s] for s in v.cobuchi if kinds[s] is Kind.MUST}
    free = {f for s, f in enumerate(v.states) if kinds[s] is Kind.MAY and s not in v.cobuchi}
    may = {f for s, f in enumerate(v.states) if kinds[s] is Kind.MAY}

    def fix(configs):
        return {c - free for c in configs if not c & dead}

    new = {}
    for f, row in delta.items():
        if f in dead:
            continue
        if f in may:
            row = [{c for c in targets if f not in c or c == {f}} for targets in row]
        new[f] = [fix(targets) for targets in row]
    keep = {f for f in may if f not in free}
    return build(v.alphabet, new, fix(initial), keep)


def _dominance(delta, keep_selfloops=True):
    """Drop ``(s,a,c)`` when ``(s,a,c')`` exists with ``c'`` a proper subset.

    Selfloops ``(s,a,{s})`` are kept so that may-states keep their category.
    """
    out = {}
    for f, row in delta.items():
        new_row = []
        for targets in row:
            kept = {
                c
                for c in targets
                if (keep_selfloops and c == {f}) or not any(d < c for d in targets)
            }
            new_row.append(kept)
        out[f] = new_row
    return out


def _merge_equivalent(delta, initial, cobuchi):
    def sig(f):
        return (
            f in cobuchi,
            tuple(
                frozenset((c - {f}, f in c) for c in targets) for targets in delta[f]
            ),
        )

    groups: dict = {}
    for f in sorted(delta, key=sort_key):
        groups.setdefault(sig(f), []).append(f)
    rename = {}
    for members_ in groups.values():
        for f in members_[1:]:
            rename[f] = members_[0]
    if not rename:
        return None

    def mv(c):
        return frozenset(rename.get(s, s) for s in c)

    new = {
        f: [{mv(c) for c in targets} for targets in row]
        for f, row in delta.items()
        if f not in rename
    }
    return new, {mv(c) for c in initial}, {f for f in cobuchi if f not in rename}


def simplify_vwaa(v: Vwaa) -> Vwaa:
    """Unreachable-state removal, transition dominance and state merging."""
    while True:
        delta, initial, cobuchi = v.to_sets()
        delta = _dominance(delta)
        initial = {c for c in initial if not any(d < c for d in initial)}
        merged = _merge_equivalent(delta, initial, cobuchi)
        if merged is not None:
            delta, initial, cobuchi = merged
        w = build(v.alphabet, delta, initial, cobuchi)
        if w.states == v.states and w.delta == v.delta and w.initial == v.initial:
            return w
        v = w


# --------------------------------------------------------------------------
# back-translation


def letter_formula(alphabet: Alphabet, a: int) -> Formula:
    """The propositional formula satisfied exactly by letter ``a``."""
    return conj(
        Atom(p) if a >> i & 1 else Not(Atom(p)) for i, p in enumerate(alphabet.props)
    )


def guard_formula(alphabet: Alphabet, letters: Iterable[int]) -> Formula:
    """A small propositional formula satisfied exactly by ``letters``."""
    props = alphabet.props
    return disj(
        conj(
            Atom(p) if val >> i & 1 else Not(Atom(p))
            for i, p in enumerate(props)
            if mask >> i & 1
        )
        for mask, val in cover(len(props), letters)
    )


def mmaa_to_ltl(v: Vwaa) -> Formula:
    """An LTL(Fs,Gs) formula with the same language as the MMAA ``v``."""
    if check_structure(v) is not Structure.MMAA:
        raise NotMmaa("automaton is not a may/must alternating automaton")
    kinds = v.kinds
    memo: dict[int, Formula] = {}

    def nxt(q):
        g = phi(q)
        if isinstance(g, Eventually):
            return StrictEventually(g.child)
        if isinstance(g, Always):
            return StrictAlways(g.child)
        return Next(g)

    def body(s, keep):
        # group letters by target so each disjunct is one propositional guard
        by_target: dict[int, list[int]] = {}
        for a, targets in enumerate(v.delta[s]):
            for c in targets:
                if keep(c):
                    by_target.setdefault(c, []).append(a)
        parts = []
        for c in sorted(by_target):
            guard = guard_formula(v.alphabet, by_target[c])
            rest = [nxt(q) for q in members(c & ~(1 << s))]
            parts.append(conj(rest) if guard is TRUE else conj(guard, *rest))
        return disj(parts)

    def phi(s):
        hit = memo.get(s)
        if hit is None:
            bit = 1 << s
            k = kinds[s]
            if k is Kind.MAY:
                hit = Eventually(body(s, lambda c: not c & bit))
            elif k is Kind.MUST:
                hit = Always(body(s, lambda c: True))
            else:
                hit = body(s, lambda c: True)
            memo[s] = hit
        return hit

    return disj(conj(phi(s) for s in members(c)) for c in sorted(v.initial))


def states_of(v: Vwaa, mask: int) -> list[Formula]:
    return [v.states[i] for i in members(mask)]


def config_masks(v: Vwaa, configs: Iterable[Iterable[Formula]]) -> set[int]:
    pos = {f: i for i, f in enumerate(v.states)}
    return {sum(1 << pos[f] for f in c) for c in configs}


__all__ = [
    "Vwaa", "Kind", "Structure", "members", "build", "translate_ltl_to_vwaa",
    "classify_state", "check_structure", "is_very_weak", "normalize_accepting_set",
    "simplify_vwaa", "mmaa_to_ltl", "letter_formula", "config_masks", "states_of",
]
