"""LTL formulae: syntax, parsing, normal forms, fragments and lasso semantics.

Formulae are hash-consed: constructing the same formula twice returns the
same object, so equality is identity and formulae are cheap dictionary keys.
Conjunctions and disjunctions are n-ary with children sorted by
:func:`sort_key` and free of duplicates.
"""

from __future__ import annotations

import enum
import re
import threading
import weakref
from typing import Iterable

import numpy as np

from . import kernels
from .errors import AlphabetMismatch, LTLSyntaxError, NegationNotEliminable
from .words import Alphabet, LassoWord

__all__ = [
    "Formula", "TrueF", "FalseF", "Atom", "Not", "And", "Or", "Next", "Until",
    "Eventually", "Always", "StrictEventually", "StrictAlways", "TRUE", "FALSE",
    "conj", "disj", "parse", "to_string", "to_positive_normal_form",
    "simplify_formula", "classify_fragment", "FragmentClass", "eval_lasso",
    "evaluate_batch", "atoms", "subformulae", "is_temporal", "sort_key",
]

_interned: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
_intern_lock = threading.Lock()


class Formula:
    __slots__ = ("args", "key", "__weakref__")
    rank = 0
    arity = 1

    def __new__(cls, *args):
        if cls.arity is not None and len(args) != cls.arity:
            raise TypeError(f"{cls.__name__} takes {cls.arity} argument(s), got {len(args)}")
        ident = (cls, args)
        f = _interned.get(ident)
        if f is not None:
            return f
        with _intern_lock:
            f = _interned.get(ident)
            if f is None:
                f = object.__new__(cls)
                f.args = args
                f.key = cls._make_key(args)
                _interned[ident] = f
        return f

    @classmethod
    def _make_key(cls, args):
        return (cls.rank, tuple(a.key for a in args))

    def __reduce__(self):
        return (type(self), self.args)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.args))})"

    def __str__(self):
        return to_string(self)

    @property
    def child(self) -> "Formula":
        return self.args[0]


class TrueF(Formula):
    __slots__ = ()
    rank = 0
    arity = 0

    def __repr__(self):
        return "TRUE"


class FalseF(Formula):
    __slots__ = ()
    rank = 1
    arity = 0

    def __repr__(self):
        return "FALSE"


class Atom(Formula):
    __slots__ = ()
    rank = 2

    @classmethod
    def _make_key(cls, args):
        return (cls.rank, args[0])

    @property
    def name(self) -> str:
        return self.args[0]

    def __repr__(self):
        return f"Atom({self.name!r})"


class Not(Formula):
    __slots__ = ()
    rank = 3


class Next(Formula):
    __slots__ = ()
    rank = 4


class Eventually(Formula):
    __slots__ = ()
    rank = 5


class Always(Formula):
    __slots__ = ()
    rank = 6


class StrictEventually(Formula):
    __slots__ = ()
    rank = 7


class StrictAlways(Formula):
    __slots__ = ()
    rank = 8


class Until(Formula):
    __slots__ = ()
    rank = 9
    arity = 2

    @property
    def left(self):
        return self.args[0]

    @property
    def right(self):
        return self.args[1]


class And(Formula):
    __slots__ = ()
    rank = 10
    arity = None


class Or(Formula):
    __slots__ = ()
    rank = 11
    arity = None


TRUE = TrueF()
FALSE = FalseF()
_UNARY = (Not, Next, Eventually, Always, StrictEventually, StrictAlways)


def sort_key(f: Formula):
    return f.key


def _nary(cls, items: Iterable[Formula], empty: Formula) -> Formula:
    flat = set()
    for f in items:
        if type(f) is cls:
            flat.update(f.args)
        else:
            flat.add(f)
    if not flat:
        return empty
    if len(flat) == 1:
        return next(iter(flat))
    return cls(*sorted(flat, key=sort_key))


def conj(*items) -> Formula:
    """Canonical conjunction; accepts formulae or iterables of formulae."""
    return _nary(And, _spread(items), TRUE)


def disj(*items) -> Formula:
    """Canonical disjunction; the empty disjunction is ``FALSE``."""
    return _nary(Or, _spread(items), FALSE)


def _spread(items):
    for it in items:
        if isinstance(it, Formula):
            yield it
        else:
            yield from it


def is_temporal(f: Formula) -> bool:
    return not isinstance(f, (And, Or))


def is_literal(f: Formula) -> bool:
    return isinstance(f, (TrueF, FalseF, Atom)) or (isinstance(f, Not) and isinstance(f.child, (Atom, TrueF)))


def atoms(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif not isinstance(g, (TrueF, FalseF)):
            stack.extend(g.args)
    return out


def subformulae(f: Formula) -> list[Formula]:
    """All distinct subformulae, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g):
        if g in seen:
            return
        if not isinstance(g, (Atom, TrueF, FalseF)):
            for c in g.args:
                walk(c)
        seen[g] = None

    walk(f)
    return list(seen)


# --------------------------------------------------------------------------
# concrete syntax

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<op><->|->|&&|\|\||[!&|()~])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)
_KEYWORDS = {"X", "F", "G", "U", "tt", "true", "ff", "false"}
_REJECTED = {"R", "W", "M", "V"}


def _tokenize(text: str):
    line, col, i = 1, 1, 0
    out = []
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise LTLSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind == "ws":
            col += len(value)
        else:
            if kind == "ident" and value in _REJECTED:
                raise LTLSyntaxError(f"unsupported operator {value!r}", line, col)
            if kind == "ident" and value in _KEYWORDS:
                kind = "kw"
            value = {"&&": "&", "||": "|", "~": "!"}.get(value, value)
            out.append((kind, value, line, col))
            col += len(m.group())
        i = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise LTLSyntaxError(msg, tok[2], tok[3])

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)

    def parse(self):
        f = self.equiv()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def equiv(self):
        f = self.implies()
        while self.peek()[1] == "<->":
            self.take()
            g = self.implies()
            f = conj(disj(Not(f), g), disj(f, Not(g)))
        return f

    def implies(self):
        f = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return disj(Not(f), self.implies())
        return f

    def disjunction(self):
        items = [self.conjunction()]
        while self.peek()[1] == "|":
            self.take()
            items.append(self.conjunction())
        return disj(items) if len(items) > 1 else items[0]

    def conjunction(self):
        items = [self.until()]
        while self.peek()[1] == "&":
            self.take()
            items.append(self.until())
        return conj(items) if len(items) > 1 else items[0]

    def until(self):
        f = self.unary()
        if self.peek()[0] == "kw" and self.peek()[1] == "U":
            self.take()
            return Until(f, self.until())
        return f

    def unary(self):
        kind, value, _, _ = self.peek()
        if kind == "op" and value == "!":
            self.take()
            return Not(self.unary())
        if kind == "kw" and value in ("X", "F", "G"):
            self.take()
            g = self.unary()
            if value == "F":
                return Eventually(g)
            if value == "G":
                return Always(g)
            if isinstance(g, Eventually):
                return StrictEventually(g.child)
            if isinstance(g, Always):
                return StrictAlways(g.child)
            return Next(g)
        return self.primary()

    def primary(self):
        tok = self.take()
        kind, value = tok[0], tok[1]
        if kind == "kw" and value in ("tt", "true"):
            return TRUE
        if kind == "kw" and value in ("ff", "false"):
            return FALSE
        if kind == "ident":
            return Atom(value)
        if value == "(" and kind == "op":
            f = self.equiv()
            self.expect(")")
            return f
        if kind == "eof":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {value!r}", tok)


def parse(text: str) -> Formula:
    """Parse the concrete LTL syntax into a canonical :class:`Formula`."""
    return _Parser(text).parse()


_PREFIX = {
    Not: "!",
    Next: "X ",
    Eventually: "F ",
    Always: "G ",
    StrictEventually: "X F ",
    StrictAlways: "X G ",
}


def to_string(f: Formula) -> str:
    if f is TRUE:
        return "tt"
    if f is FALSE:
        return "ff"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, _UNARY):
        return _PREFIX[type(f)] + _wrap(f.child)
    if isinstance(f, Until):
        return f"{_wrap(f.left)} U {_wrap(f.right)}"
    sep = " & " if isinstance(f, And) else " | "
    return sep.join(_wrap(c) for c in f.args)


def _wrap(f):
    s = to_string(f)
    if isinstance(f, (TrueF, FalseF, Atom)) or isinstance(f, _UNARY):
        return s
    return f"({s})"


# --------------------------------------------------------------------------
# positive normal form and simplification


def to_positive_normal_form(f: Formula) -> Formula:
    """Push negations down to the atoms.

    Raises :class:`NegationNotEliminable` for a negation above ``X`` or ``U``.
    """
    return _pnf(f, False, {})


def _pnf(f, neg, memo):
    key = (f, neg)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if f is TRUE:
        r = FALSE if neg else TRUE
    elif f is FALSE:
        r = TRUE if neg else FALSE
    elif isinstance(f, Atom):
        r = Not(f) if neg else f
    elif isinstance(f, Not):
        r = _pnf(f.child, not neg, memo)
    elif isinstance(f, And):
        parts = [_pnf(c, neg, memo) for c in f.args]
        r = disj(parts) if neg else conj(parts)
    elif isinstance(f, Or):
        parts = [_pnf(c, neg, memo) for c in f.args]
        r = conj(parts) if neg else disj(parts)
    elif isinstance(f, (Next, Until)):
        if neg:
            raise NegationNotEliminable(f"cannot push a negation into {to_string(f)}")
        r = type(f)(*(_pnf(c, False, memo) for c in f.args))
    else:
        dual = {
            Eventually: Always,
            Always: Eventually,
            StrictEventually: StrictAlways,
            StrictAlways: StrictEventually,
        }
        cls = dual[type(f)] if neg else type(f)
        r = cls(_pnf(f.child, neg, memo))
    memo[key] = r
    return r


def simplify_formula(f: Formula) -> Formula:
    """Apply the reduction rules bottom-up until nothing changes.

    Besides the constant, idempotence and ``FF``/``GG`` collapsing rules,
    ``G F p`` becomes ``G Fs p`` and ``F G p`` becomes ``F Gs p``, and
    prefix-independent subformulae are pulled out of F, G, Fs and Gs.
    """
    while True:
        g = _simplify(f, {})
        if g is f:
            return f
        f = g


def _simplify(f, memo):
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, (TrueF, FalseF, Atom)):
        r = f
    elif isinstance(f, Not):
        c = _simplify(f.child, memo)
        r = FALSE if c is TRUE else TRUE if c is FALSE else Not(c)
    elif isinstance(f, (And, Or)):
        unit, zero = (TRUE, FALSE) if isinstance(f, And) else (FALSE, TRUE)
        kids = [_simplify(c, memo) for c in f.args]
        if zero in kids:
            r = zero
        else:
            kids = [c for c in kids if c is not unit]
            r = conj(kids) if isinstance(f, And) else disj(kids)
    elif isinstance(f, Until):
        a, b = _simplify(f.left, memo), _simplify(f.right, memo)
        if b is TRUE or b is FALSE or a is FALSE or a is b:
            r = b
        elif a is TRUE:
            r = Eventually(b)
        else:
            r = Until(a, b)
    else:
        c = _simplify(f.child, memo)
        r = _simplify_unary(type(f), c)
    memo[f] = r
    return r


def _eventual(f) -> bool:
    """Closed under adding prefixes: ``F f`` is equivalent to ``f``."""
    if isinstance(f, (Eventually, StrictEventually)):
        return True
    if isinstance(f, (Always, StrictAlways, Next, And, Or)):
        return all(_eventual(c) for c in f.args)
    return False


def _universal(f) -> bool:
    """Closed under removing prefixes: ``G f`` is equivalent to ``f``."""
    if isinstance(f, (Always, StrictAlways)):
        return True
    if isinstance(f, (Eventually, StrictEventually, Next, And, Or)):
        return all(_universal(c) for c in f.args)
    return False


def _suspendable(f) -> bool:
    return _eventual(f) and _universal(f)


def _simplify_unary(cls, c):
    if c is TRUE or c is FALSE:
        return c
    if cls is not Not and _suspendable(c):
        return c
    if cls is Eventually and _eventual(c) or cls is Always and _universal(c):
        return c
    if cls in (Eventually, StrictEventually, Always, StrictAlways) and isinstance(c, (And, Or)):
        # prefix-independent operands leave the scope of the operator
        out = [k for k in c.args if _suspendable(k)]
        if out:
            join = conj if isinstance(c, And) else disj
            rest = join(k for k in c.args if not _suspendable(k))
            return join(_simplify_unary(cls, rest), *out)
    if cls is Next:
        if isinstance(c, Eventually):
            return StrictEventually(c.child)
        if isinstance(c, Always):
            return StrictAlways(c.child)
        return Next(c)
    if cls is Eventually:
        if isinstance(c, (Eventually, StrictEventually)):
            return c
        if isinstance(c, Always):
            return Eventually(StrictAlways(c.child))
        return Eventually(c)
    if cls is Always:
        if isinstance(c, (Always, StrictAlways)):
            return c
        if isinstance(c, Eventually):
            return Always(StrictEventually(c.child))
        return Always(c)
    if cls is StrictEventually:
        if isinstance(c, Eventually):
            return StrictEventually(c.child)
        return StrictEventually(c)
    # StrictAlways
    if isinstance(c, Always):
        return StrictAlways(c.child)
    return StrictAlways(c)


# --------------------------------------------------------------------------
# fragments


class FragmentClass(enum.Enum):
    STRICT_FG = "StrictFG"
    LIM_FRAGMENT = "LimFragment"
    UNSUPPORTED = "Unsupported"


def _in_strict_fg(f, memo):
    hit = memo.get(f)
    if hit is None:
        if is_literal(f):
            hit = True
        elif isinstance(f, (And, Or, Eventually, Always, StrictEventually, StrictAlways)):
            hit = all(_in_strict_fg(c, memo) for c in f.args)
        else:
            hit = False
        memo[f] = hit
    return hit


def _in_lim(f, memo, fg_memo):
    hit = memo.get(f)
    if hit is None:
        if _in_strict_fg(f, fg_memo):
            hit = True
        elif isinstance(f, (And, Or, Next, Until)):
            hit = all(_in_lim(c, memo, fg_memo) for c in f.args)
        else:
            hit = False
        memo[f] = hit
    return hit


def classify_fragment(f: Formula) -> FragmentClass:
    fg_memo: dict = {}
    if _in_strict_fg(f, fg_memo):
        return FragmentClass.STRICT_FG
    if _in_lim(f, {}, fg_memo):
        return FragmentClass.LIM_FRAGMENT
    return FragmentClass.UNSUPPORTED


def offending_subformula(f: Formula) -> Formula | None:
    """A smallest subformula keeping ``f`` out of the supported fragment."""
    if classify_fragment(f) is not FragmentClass.UNSUPPORTED:
        return None
    for g in subformulae(f):
        if classify_fragment(g) is FragmentClass.UNSUPPORTED:
            return g
    return f


# --------------------------------------------------------------------------
# lasso semantics


def evaluate_batch(f: Formula, alphabet: Alphabet, pre: np.ndarray, per: np.ndarray) -> np.ndarray:
    """Whether each lasso ``pre[n] . per[n]^omega`` satisfies ``f``.

    All lassos share one shape; returns an ``(N,)`` boolean array.
    """
    props = alphabet.props
    missing = atoms(f) - set(props)
    if missing:
        raise AlphabetMismatch(f"propositions {sorted(missing)} not in alphabet {props!r}")
    pre = np.asarray(pre, dtype=np.int64)
    per = np.asarray(per, dtype=np.int64)
    n, p = pre.shape
    letters = np.concatenate([pre, per], axis=1)
    length = letters.shape[1]
    if per.shape[1] < 1:
        raise ValueError("lasso period must be nonempty")
    nxt = np.append(np.arange(1, length), p)
    ones = np.ones((n, length), dtype=bool)
    vals: dict[Formula, np.ndarray] = {}
    for g in subformulae(f):
        if g is TRUE:
            v = ones
        elif g is FALSE:
            v = ~ones
        elif isinstance(g, Atom):
            v = (letters >> props.index(g.name) & 1).astype(bool)
        elif isinstance(g, Not):
            v = ~vals[g.child]
        elif isinstance(g, And):
            v = np.logical_and.reduce([vals[c] for c in g.args])
        elif isinstance(g, Or):
            v = np.logical_or.reduce([vals[c] for c in g.args])
        elif isinstance(g, Next):
            v = vals[g.child][:, nxt]
        elif isinstance(g, Until):
            v = kernels.until(vals[g.left], vals[g.right], p)
        elif isinstance(g, Eventually):
            v = kernels.until(ones, vals[g.child], p)
        elif isinstance(g, Always):
            v = ~kernels.until(ones, ~vals[g.child], p)
        elif isinstance(g, StrictEventually):
            v = kernels.until(ones, vals[g.child], p)[:, nxt]
        elif isinstance(g, StrictAlways):
            v = ~kernels.until(ones, ~vals[g.child], p)[:, nxt]
        else:  # pragma: no cover
            raise TypeError(g)
        vals[g] = v
    return vals[f][:, 0].copy()


def eval_lasso(f: Formula, w: LassoWord) -> bool:
    """Whether the lasso word ``w`` satisfies ``f``."""
    pre = np.array([w.prefix], dtype=np.int64).reshape(1, len(w.prefix))
    per = np.array([w.period], dtype=np.int64)
    return bool(evaluate_batch(f, w.alphabet, pre, per)[0])
