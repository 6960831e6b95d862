import numpy as np
import pytest
from hypothesis import given, strategies as st

from ltlrabin import corpus, ltl
from ltlrabin.errors import AlphabetMismatch, LTLSyntaxError, NegationNotEliminable
from ltlrabin.ltl import (
    FALSE, TRUE, Always, And, Atom, Eventually, FragmentClass, Next, Not, Or,
    StrictAlways, StrictEventually, Until, classify_fragment, conj, disj, eval_lasso,
    parse, simplify_formula, to_positive_normal_form, to_string,
)
from ltlrabin.oracle import enumerate_lassos, lasso_batches
from ltlrabin.words import Alphabet, LassoWord

from conftest import formulas

a, b, c = Atom("a"), Atom("b"), Atom("c")


def unrolled_eval(f, w: LassoWord) -> bool:
    """Brute-force semantics on an explicitly unrolled lasso.

    The word is expanded to ``|prefix| + 2 * |period| * n`` positions, with
    ``n`` the number of subformulae, which is long enough for every until
    witness and every always counterexample to show up on a finite window.
    """
    n = len(ltl.subformulae(f))
    length = len(w.prefix) + 2 * len(w.period) * (n + 1)
    word = [w.letter_at(i) for i in range(length)]
    alphabet = w.alphabet

    memo = {}

    def holds(g, i):
        # beyond the window positions are periodic; fold back onto the first copy
        p, q = len(w.prefix), len(w.period)
        if i >= p + q:
            i = p + (i - p) % q
        key = (g, i)
        if key in memo:
            return memo[key]
        horizon = range(i, i + len(w.prefix) + len(w.period) * (n + 1))
        if g is TRUE:
            r = True
        elif g is FALSE:
            r = False
        elif isinstance(g, Atom):
            r = bool(word[i] >> alphabet.index(g.name) & 1)
        elif isinstance(g, Not):
            r = not holds(g.child, i)
        elif isinstance(g, And):
            r = all(holds(x, i) for x in g.args)
        elif isinstance(g, Or):
            r = any(holds(x, i) for x in g.args)
        elif isinstance(g, Next):
            r = holds(g.child, i + 1)
        elif isinstance(g, Until):
            r = False
            for j in horizon:
                if holds(g.right, j):
                    r = True
                    break
                if not holds(g.left, j):
                    break
        elif isinstance(g, Eventually):
            r = any(holds(g.child, j) for j in horizon)
        elif isinstance(g, Always):
            r = all(holds(g.child, j) for j in horizon)
        elif isinstance(g, StrictEventually):
            r = any(holds(g.child, j + 1) for j in horizon)
        elif isinstance(g, StrictAlways):
            r = all(holds(g.child, j + 1) for j in horizon)
        else:  # pragma: no cover
            raise TypeError(g)
        memo[key] = r
        return r

    return holds(f, 0)


AB = Alphabet(("a", "b"))
ABC = Alphabet(("a", "b", "c"))


# ---------------------------------------------------------------- parsing


def test_parse_precedence():
    assert parse("a | b & c") is disj(a, conj(b, c))
    assert parse("a U b U c") is Until(a, Until(b, c))
    assert parse("!a U b") is Until(Not(a), b)
    assert parse("F a & b") is conj(Eventually(a), b)
    assert parse("a -> b -> c") is disj(Not(a), Not(b), c)


def test_parse_sugar_and_keywords():
    assert parse("true") is TRUE and parse("tt") is TRUE
    assert parse("false") is FALSE and parse("ff") is FALSE
    assert parse("a <-> b") is conj(disj(a, Not(b)), disj(Not(a), b))
    assert parse("a && b || !c") is disj(conj(a, b), Not(c))
    assert parse("X F a") is StrictEventually(a)
    assert parse("X G a") is StrictAlways(a)
    assert parse("X a") is Next(a)


def test_and_or_canonical():
    assert conj(b, a) is conj(a, b)
    assert conj(a, a) is a
    assert conj(a, conj(b, c)) is conj(a, b, c)
    assert disj() is FALSE and conj() is TRUE
    assert list(conj(c, b, a).args) == sorted(conj(c, b, a).args, key=ltl.sort_key)


@pytest.mark.parametrize("text", ["a U", "(a", "a R b", "a W b", "a $ b", "F", ""])
def test_parse_errors(text):
    with pytest.raises(LTLSyntaxError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(LTLSyntaxError) as e:
        parse("a &\n  & b")
    assert (e.value.line, e.value.column) == (2, 3)


@pytest.mark.parametrize("text", corpus.all_formulae())
def test_print_parse_roundtrip_corpus(text):
    f = parse(text)
    assert parse(to_string(f)) is f


@given(formulas())
def test_print_parse_roundtrip_random(f):
    assert parse(to_string(f)) is f


# ---------------------------------------------------------------- PNF


def test_pnf_examples():
    assert to_positive_normal_form(Not(Always(a))) is Eventually(Not(a))
    assert to_positive_normal_form(Not(StrictEventually(a))) is StrictAlways(Not(a))
    assert to_positive_normal_form(Not(Or(a, Always(b)))) is conj(Not(a), Eventually(Not(b)))
    assert to_positive_normal_form(Not(Not(a))) is a


@pytest.mark.parametrize("text", ["!(a U b)", "!X a", "G !(a U b)"])
def test_pnf_rejects_negated_until_and_next(text):
    with pytest.raises(NegationNotEliminable):
        to_positive_normal_form(parse(text))


def _is_pnf(f):
    return all(isinstance(g.child, Atom) for g in ltl.subformulae(f) if isinstance(g, Not))


def _agree(f, g, alphabet, p=2, q=3):
    for pre, per in lasso_batches(alphabet, p, q):
        if not np.array_equal(ltl.evaluate_batch(f, alphabet, pre, per), ltl.evaluate_batch(g, alphabet, pre, per)):
            return False
    return True


@given(formulas(props=("a", "b")))
def test_pnf_and_simplify_preserve_semantics(f):
    try:
        g = to_positive_normal_form(f)
    except NegationNotEliminable:
        return
    h = simplify_formula(g)
    assert _is_pnf(g) and _is_pnf(h)
    assert _agree(f, g, AB, 1, 3)
    assert _agree(f, h, AB, 1, 3)


@pytest.mark.parametrize("text", [t for t in corpus.all_formulae() if len(ltl.atoms(parse(t))) <= 3])
def test_pnf_and_simplify_preserve_semantics_corpus(text):
    f = parse(text)
    alphabet = Alphabet.of(ltl.atoms(f))
    g = to_positive_normal_form(f)
    assert _agree(f, simplify_formula(g), alphabet)


# ---------------------------------------------------------------- simplification


def test_simplify_examples():
    assert simplify_formula(Always(Eventually(a))) is Always(StrictEventually(a))
    assert simplify_formula(Eventually(Eventually(a))) is Eventually(a)
    assert simplify_formula(Eventually(Always(a))) is Eventually(StrictAlways(a))


def test_simplify_baseline_rules():
    assert simplify_formula(Always(Always(a))) is Always(a)
    assert simplify_formula(StrictEventually(Eventually(a))) is StrictEventually(a)
    assert simplify_formula(StrictAlways(Always(a))) is StrictAlways(a)
    assert simplify_formula(Eventually(TRUE)) is TRUE
    assert simplify_formula(Always(TRUE)) is TRUE
    assert simplify_formula(conj(a, FALSE)) is FALSE
    assert simplify_formula(disj(a, TRUE)) is TRUE


def test_simplify_suspendable():
    gfa = Always(StrictEventually(a))
    # prefix-independent and suffix-closed formulas absorb temporal operators
    assert simplify_formula(Eventually(gfa)) is gfa
    assert simplify_formula(Next(gfa)) is gfa
    assert simplify_formula(Eventually(conj(b, gfa))) is conj(Eventually(b), gfa)
    # G F b is eventual, so F (G F b) is G F b already; F b is eventual too
    assert simplify_formula(Eventually(Eventually(b))) is Eventually(b)


@given(formulas(props=("a", "b")))
def test_simplify_is_idempotent(f):
    try:
        g = simplify_formula(to_positive_normal_form(f))
    except NegationNotEliminable:
        return
    assert simplify_formula(g) is g


@given(formulas(props=("a", "b")))
def test_simplify_rewrites_gf_and_fg(f):
    try:
        g = simplify_formula(to_positive_normal_form(f))
    except NegationNotEliminable:
        return
    for h in ltl.subformulae(g):
        if isinstance(h, Always):
            assert not isinstance(h.child, Eventually)
        if isinstance(h, Eventually):
            assert not isinstance(h.child, Always)


# ---------------------------------------------------------------- fragments


def test_classify_examples():
    assert classify_fragment(Always(conj(StrictEventually(a), StrictEventually(b)))) is FragmentClass.STRICT_FG
    assert classify_fragment(Until(a, Always(b))) is FragmentClass.LIM_FRAGMENT
    assert classify_fragment(Until(Always(Until(a, b)), c)) is FragmentClass.UNSUPPORTED
    assert classify_fragment(Next(a)) is FragmentClass.LIM_FRAGMENT
    assert classify_fragment(Eventually(conj(a, Next(b)))) is FragmentClass.UNSUPPORTED


def test_offending_subformula():
    f = parse("a U (G (b U c))")
    assert ltl.offending_subformula(f) is parse("G (b U c)")
    assert ltl.offending_subformula(parse("G F a")) is None


def _lim_grammar(f):
    """Direct recursive check of the U/X fragment grammar."""
    if classify_fragment(f) is FragmentClass.STRICT_FG:
        return True
    if isinstance(f, (And, Or, Next, Until)):
        return all(_lim_grammar(x) for x in f.args)
    return False


@given(formulas())
def test_classify_monotone(f):
    try:
        g = to_positive_normal_form(f)
    except NegationNotEliminable:
        return
    k = classify_fragment(g)
    if k is not FragmentClass.UNSUPPORTED:
        assert _lim_grammar(g)
    if k is FragmentClass.STRICT_FG:
        assert all(not isinstance(h, (Until, Next)) for h in ltl.subformulae(g))


# ---------------------------------------------------------------- lasso semantics


def test_eval_examples():
    f = disj(Always(conj(StrictEventually(a), StrictEventually(b))), Always(b))
    w = LassoWord.from_sets(AB, [], [{"a"}, set(), {"b"}, {"a", "b"}])
    assert eval_lasso(f, w)
    assert eval_lasso(TRUE, w)
    assert not eval_lasso(Eventually(a), LassoWord.from_sets(AB, [], [set()]))


def test_eval_strict_operators():
    w = LassoWord.from_sets(AB, [{"a"}], [set()])
    assert eval_lasso(Eventually(a), w)
    assert not eval_lasso(StrictEventually(a), w)
    w = LassoWord.from_sets(AB, [set()], [{"a"}])
    assert not eval_lasso(Always(a), w)
    assert eval_lasso(StrictAlways(a), w)


def test_eval_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        eval_lasso(c, LassoWord(AB, (), (0,)))


@given(formulas(props=("a", "b"), max_leaves=6), st.data())
def test_eval_matches_unrolled(f, data):
    pre = data.draw(st.lists(st.integers(0, 3), max_size=3))
    per = data.draw(st.lists(st.integers(0, 3), min_size=1, max_size=3))
    w = LassoWord(AB, tuple(pre), tuple(per))
    assert eval_lasso(f, w) == unrolled_eval(f, w)


@pytest.mark.parametrize("text", [r.formula for r in corpus.TABLE] + [p.formula for p in corpus.PATTERNS[:8]])
def test_eval_matches_unrolled_corpus(text):
    f = parse(text)
    alphabet = Alphabet.of(ltl.atoms(f))
    for w in enumerate_lassos(alphabet, 1, 2):
        assert eval_lasso(f, w) == unrolled_eval(f, w), w.show()
