"""Benchmark formulae with reference automaton sizes.

Sizes are written ``s(r)``: ``s`` states and ``r`` Rabin pairs.
"""

from __future__ import annotations

from typing import NamedTuple


class Row(NamedTuple):
    formula: str
    dra: str  # reference size of the Rabin automaton
    tgdra: int | None = None  # reference state count of the generalized automaton


TABLE = [
    Row("G (a | F b)", "3(2)", 2),
    Row("F G a | F G b | G F c", "8(3)", 1),
    Row("F (a | b)", "2(1)", 2),
    Row("G F (a | b)", "2(1)", 1),
    Row("G (a | F a)", "2(1)", 1),
    Row("G (a | b | c)", "2(1)", 2),
    Row("G (a | F (b | c))", "3(2)", 2),
    Row("F a | G b", "3(2)", 3),
    Row("G (a | F (b & c))", "3(2)", 2),
    Row("F G a | G F b", "4(2)", 1),
    Row("G F (a | b) & G F (b | c)", "3(1)", 1),
    Row("(F F a & G !a) | (G G !a & F a)", "1(0)", 1),
    Row("G F a & F G b", "3(1)", 1),
    Row("(G F a & F G b) | (F G !a & G F !b)", "4(2)", 1),
    Row("F G a & G F a", "2(1)", 1),
    Row("G (F a & F b)", "3(1)", 1),
    Row("F a & F !a", "4(1)", 4),
    Row("(G (b | G F a) & G (c | G F !a)) | G b | G c", "12(3)", 4),
    Row("(G (b | F G a) & G (c | F G !a)) | G b | G c", "4(2)", 4),
    Row("(F (b & F G a) | F (c & F G !a)) & F b & F c", "5(2)", 4),
    Row("(F (b & G F a) | F (c & G F !a)) & F b & F c", "5(2)", 4),
    Row("G F (F a | G F b | F G (a | b))", "4(3)", 1),
    Row("F G (F a | G F b | F G (a | b))", "4(3)", 1),
    Row("F G (F a | G F b | F G (a | b) | F G b)", "4(3)", 1),
]

# rows whose Rabin automaton size must be matched exactly
EXACT = {
    "F (a | b)", "G F (a | b)", "G (a | F a)", "F G a & G F a", "G F a & F G b",
    "G (F a & F b)", "F a & F !a", "(F F a & G !a) | (G G !a & F a)", "G (a | F b)", "F a | G b",
}

TGDRA_EXACT = {"G (a | F b)": 2, "G F (a | b)": 1, "F G a | F G b | G F c": 1, "F G a | G F b": 1}


def _conj(parts):
    return " & ".join(f"({p})" for p in parts)


def streett(n: int) -> str:
    """Conjunction of ``GF a_i -> GF b_i`` for ``i = 1..n``."""
    return _conj(f"G F a{i} -> G F b{i}" for i in range(1, n + 1))


def chain(n: int) -> str:
    """Conjunction of ``GF a_i | FG a_{i+1}`` for ``i = 1..n``."""
    return _conj(f"G F a{i} | F G a{i + 1}" for i in range(1, n + 1))


def theta(n: int) -> str:
    fair = " & ".join(f"G F a{i}" for i in range(1, n + 1))
    return f"!(({fair}) -> G (b1 -> F b2))"


def not_theta(n: int) -> str:
    fair = " & ".join(f"G F a{i}" for i in range(1, n + 1))
    return f"({fair}) -> G (b1 -> F b2)"


def until_left(n: int) -> str:
    """``((a1 U a2) U a3) ... U an``."""
    s = "a1"
    for i in range(2, n + 1):
        s = f"({s}) U a{i}"
    return s


def until_right(n: int) -> str:
    """``a1 U (a2 U (... U an))``."""
    s = f"a{n}"
    for i in range(n - 1, 0, -1):
        s = f"a{i} U ({s})"
    return s


STREETT = {1: "4(2)", 2: "18(4)", 3: "166(8)", 4: "7408(16)"}
CHAIN = {1: "4(2)", 2: "10(4)", 3: "36(6)", 4: "178(9)", 5: "1430(14)"}
THETA = {n: f"{n + 2}(1)" for n in range(1, 8)}
THETA_TGDRA = 2
NOT_THETA = {1: "6(3)", 2: "12(4)", 3: "24(5)"}
UNTIL_LEFT = {2: "3(1)", 3: "5(1)", 4: "9(1)", 5: "24(1)"}
UNTIL_RIGHT = {n: f"{n + 1}(1)" for n in range(2, 9)}


class Pattern(NamedTuple):
    index: int  # position in the 55-entry catalogue (pattern-major, scope-minor)
    kind: str
    formula: str
    dra: str | None  # reference size when available


# Specification patterns over p, q, r, s, t, z with ``a W b`` written as
# ``(a U b) | G a``.  Only entries inside the translatable fragment are kept.
PATTERNS = [
    Pattern(1, "absence/globally", "G !p", None),
    Pattern(2, "absence/before", "F r -> (!p U r)", "4(2)"),
    Pattern(3, "absence/after", "G (q -> G !p)", "4(2)"),
    Pattern(6, "existence/globally", "F p", None),
    Pattern(7, "existence/before", "(!r U (p & !r)) | G !r", "4(2)"),
    Pattern(8, "existence/after", "G !q | F (q & F p)", "3(2)"),
    Pattern(11, "bounded-existence/globally",
            "(!p U ((p U ((!p U ((p U G !p) | G p)) | G !p)) | G p)) | G !p", "6(2)"),
    Pattern(12, "bounded-existence/before",
            "F r -> ((!p & !r) U (r | ((p & !r) U (r | ((!p & !r) U (r | ((p & !r) U (r | (!p U r)))))))))",
            "8(2)"),
    Pattern(13, "bounded-existence/after",
            "F q -> (!q U (q & ((!p U ((p U ((!p U ((p U G !p) | G p)) | G !p)) | G p)) | G !p)))",
            "7(3)"),
    Pattern(16, "universality/globally", "G p", None),
    Pattern(17, "universality/before", "F r -> (p U r)", "4(2)"),
    Pattern(18, "universality/after", "G (q -> G p)", "4(2)"),
    Pattern(21, "precedence/globally", "(!p U s) | G !p", "4(2)"),
    Pattern(22, "precedence/before", "F r -> (!p U (s | r))", "4(2)"),
    Pattern(26, "response/globally", "G (p -> F s)", "3(2)"),
    Pattern(27, "response/before", "F r -> ((p -> (!r U (s & !r))) U r)", "4(2)"),
    Pattern(28, "response/after", "G (q -> G (p -> F s))", "6(3)"),
    Pattern(31, "precedence-chain-2-1/globally", "F p -> (!p U (s & !p & X (!p U t)))", "4(2)"),
    Pattern(32, "precedence-chain-2-1/before", "F r -> (!p U (r | (s & !p & X (!p U t))))", "5(2)"),
    Pattern(33, "precedence-chain-2-1/after",
            "G !q | (!q U (q & (F p -> (!p U (s & !p & X (!p U t))))))", "5(2)"),
    Pattern(36, "precedence-chain-1-2/globally", "F (s & X F t) -> (!s U p)", "6(3)"),
    Pattern(38, "precedence-chain-1-2/after", "G !q | (!q U (q & (F (s & X F t) -> (!s U p))))", "7(4)"),
    Pattern(41, "response-chain-2-1/globally", "G ((s & X F t) -> X F (t & F p))", "21(3)"),
    Pattern(46, "response-chain-1-2/globally", "G (p -> F (s & X F t))", "15(3)"),
    Pattern(47, "response-chain-1-2/before",
            "F r -> ((p -> (!r U (s & !r & X (!r U t)))) U r)", "7(2)"),
    Pattern(48, "response-chain-1-2/after", "G (q -> G (p -> (s & X F t)))", "14(3)"),
    Pattern(52, "constrained-chain/before",
            "F r -> ((p -> (!r U (s & !r & !z & X ((!r & !z) U t)))) U r)", "7(2)"),
]


def parametric(max_atoms: int | None = None) -> list[str]:
    """Small instances of every parametric family used by the oracle suite."""
    out = (
        [theta(n) for n in (1, 2, 3)]
        + [not_theta(n) for n in (1, 2, 3)]
        + [until_left(n) for n in (2, 3, 4)]
        + [until_right(n) for n in (2, 3, 4, 5)]
        + [streett(n) for n in (1, 2)]
        + [chain(n) for n in (1, 2, 3)]
    )
    if max_atoms is None:
        return out
    from .ltl import atoms, parse

    return [f for f in out if len(atoms(parse(f))) <= max_atoms]


def all_formulae() -> list[str]:
    return [r.formula for r in TABLE] + parametric() + [p.formula for p in PATTERNS]


def parse_size(size: str) -> tuple[int, int]:
    s, r = size.rstrip(")").split("(")
    return int(s), int(r)
