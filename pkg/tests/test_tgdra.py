import pytest
from hypothesis import given

from ltlrabin import corpus, ltl
from ltlrabin.errors import AlphabetMismatch, ResourceCapExceeded
from ltlrabin.ltl import Always, Atom, Eventually, StrictEventually, conj, disj, parse
from ltlrabin.oracle import compare, enumerate_lassos, formula_checker, tgdra_checker
from ltlrabin.pipeline import Options, run_pipeline
from ltlrabin.tgdra import (
    GenRabinPair, Tgdra, allowed_configurations, allowed_macrotransitions, build_semiautomaton,
    build_tgdra, compute_bounding_sets, run_cycle, simplify_acceptance, simplify_tgdra,
    tgdra_accepts_lasso,
)
from ltlrabin.vwaa import members, normalize_accepting_set, simplify_vwaa, translate_ltl_to_vwaa
from ltlrabin.words import Alphabet, LassoWord

from conftest import fs_gs_formulas

a, b = Atom("a"), Atom("b")
AB = Alphabet(("a", "b"))
E, A, B, AB_ = 0, 1, 2, 3
PSI = conj(StrictEventually(a), StrictEventually(b))
GPSI, GB, FA, FB = Always(PSI), Always(b), Eventually(a), Eventually(b)
EXAMPLE = disj(GPSI, GB)


@pytest.fixture
def example():
    return translate_ltl_to_vwaa(EXAMPLE, AB)


def mask(v, *states):
    return sum(1 << v.index(s) for s in states)


def macro(v, *configs):
    return frozenset(mask(v, *c) for c in configs)


def prepared(text):
    """The automaton the pipeline feeds into the TGDRA construction."""
    return run_pipeline(text, Options(stage="vwaa")).vwaa


# ---------------------------------------------------------------- semiautomaton


def test_example_semiautomaton(example):
    macros, trans, _ = build_semiautomaton(example)
    init = macro(example, [GPSI], [GB])
    both = macro(example, [GPSI, FA, FB], [GB])
    loop = macro(example, [GPSI, FA, FB])
    assert set(macros) == {init, both, loop}
    idx = {m: i for i, m in enumerate(macros)}
    assert macros[0] == init

    def step(m, letter):
        return macros[trans[idx[m]][letter]]

    for letter in (B, AB_):
        assert step(init, letter) == both
        assert step(both, letter) == both
    for letter in (E, A):
        assert step(init, letter) == loop
        assert step(both, letter) == loop
    for letter in range(4):
        assert step(loop, letter) == loop


def test_literal_semiautomaton():
    v = translate_ltl_to_vwaa(a)
    macros, trans, _ = build_semiautomaton(v)
    idx = {m: i for i, m in enumerate(macros)}
    sink, done = idx[frozenset()], idx[frozenset({0})]
    assert macros[0] == frozenset({1})
    assert trans[0] == (sink, done)
    assert trans[sink] == (sink, sink)
    assert trans[done] == (done, done)


def test_dead_configuration_contributes_nothing(example):
    # from {G b} nothing survives a letter without b
    _, _, succ = build_semiautomaton(example)
    assert succ(mask(example, GB), E) == frozenset()
    assert succ(mask(example, GB, GPSI), A) == frozenset()
    assert succ(mask(example, GPSI), A) == frozenset({mask(example, GPSI, FA, FB)})


def test_semiautomaton_cap():
    v = prepared("F a & F b & F c")
    with pytest.raises(ResourceCapExceeded):
        build_semiautomaton(v, cap=3)


# ---------------------------------------------------------------- bounding sets


def test_example_bounding_sets(example):
    zs = compute_bounding_sets(example)
    assert set(zs) == {mask(example, GPSI), mask(example, GPSI, FA, FB), mask(example, GB)}


def test_bounding_sets_of_eventually():
    v = translate_ltl_to_vwaa(Eventually(a))
    assert compute_bounding_sets(v) == [0]


def test_bounding_sets_sorted(example):
    zs = compute_bounding_sets(example)
    keys = [(bin(z).count("1"), list(members(z))) for z in zs]
    assert keys == sorted(keys)


@pytest.mark.parametrize("text", ["a U G b", "a U (b & G F c)", corpus.until_left(3)])
def test_lim_bounding_sets_filtered(text):
    v = prepared(text)
    must = v.must_mask
    for z in compute_bounding_sets(v):
        # every may-state of Z is reachable from a must-state of Z
        reach = 0
        frontier = z & must
        while frontier:
            reach |= frontier
            nxt = 0
            for s in members(frontier):
                nxt |= v.successors[s]
            frontier = nxt & z & ~reach
        assert z & ~must & ~reach == 0


# ---------------------------------------------------------------- allowed transitions


def test_allowed_configurations(example):
    z = mask(example, GPSI, FA, FB)
    got = set(allowed_configurations(example, z))
    assert got == {mask(example, GPSI), mask(example, GPSI, FA), mask(example, GPSI, FB), z}
    assert allowed_configurations(example, 0) == [0]


def test_example_allowed_transitions(example):
    macros, trans, succ = build_semiautomaton(example)
    at, at_f = allowed_macrotransitions(example, macros, trans, succ, mask(example, GPSI))
    assert at == 0 and at_f == {}
    z = mask(example, GPSI, FA, FB)
    at, at_f = allowed_macrotransitions(example, macros, trans, succ, z)
    loop = macros.index(macro(example, [GPSI, FA, FB]))
    e = 1 << (loop * 4 + A)
    assert at & e
    assert at_f[example.index(FA)] & e
    assert not at_f[example.index(FB)] & e
    for f in at_f.values():
        assert f & ~at == 0


def test_empty_bounding_set():
    v = translate_ltl_to_vwaa(Eventually(a))
    macros, trans, succ = build_semiautomaton(v)
    at, at_f = allowed_macrotransitions(v, macros, trans, succ, 0)
    assert at_f == {}
    n = v.alphabet.size
    want = 0
    for s, row in enumerate(trans):
        for letter, t in enumerate(row):
            if 0 in macros[t]:
                want |= 1 << (s * n + letter)
    assert at == want


# ---------------------------------------------------------------- construction


def test_example_tgdra(example):
    t = build_tgdra(example)
    assert t.n_states == 3
    assert [p.z for p in t.pairs] == compute_bounding_sets(example)
    for p in t.pairs:
        assert p.owners == tuple(members(p.z & example.cobuchi_mask))
    w = LassoWord.from_sets(AB, [], [{"a"}, set(), {"b"}, {"a", "b"}])
    assert tgdra_accepts_lasso(t, w)
    assert not tgdra_accepts_lasso(t, LassoWord.from_sets(AB, [], [{"a"}]))


def test_rule1_drops_unsatisfiable_pair(example):
    t = build_tgdra(example)
    gone = [p for p in t.pairs if p.z == mask(example, GPSI)]
    assert gone and gone[0].k == t.all_edges
    s = simplify_acceptance(t)
    assert all(p.z != mask(example, GPSI) for p in s.pairs)


def test_rule2_drops_superset():
    al = Alphabet(("p",))
    # one state, two letters: edge 0 on letter 0, edge 1 on letter 1
    t = Tgdra(al, ((0, 0),), 0, (GenRabinPair(0, (0b01, 0b11)),))
    s = simplify_acceptance(t)
    assert s.pairs[0].ls == (0b01,)


def test_acceptance_fixpoint():
    t = run_pipeline("G (a | F b)", Options(stage="tgdra")).tgdra
    s = simplify_tgdra(t)
    assert (s.trans, s.initial, s.pairs) == (t.trans, t.initial, t.pairs)


def test_no_pairs_rejects_everything():
    t = Tgdra(AB, ((0, 0, 0, 0),), 0, ())
    for w in enumerate_lassos(AB, 1, 2):
        assert not tgdra_accepts_lasso(t, w)


def test_alphabet_mismatch(example):
    t = build_tgdra(example)
    with pytest.raises(AlphabetMismatch):
        tgdra_accepts_lasso(t, LassoWord(Alphabet(("a",)), (), (0,)))


@pytest.mark.parametrize("text,size", sorted(corpus.TGDRA_EXACT.items()))
def test_tgdra_sizes(text, size):
    assert run_pipeline(text, Options(stage="tgdra")).tgdra.n_states == size


# ---------------------------------------------------------------- properties


SMALL = [t for t in corpus.all_formulae() if len(ltl.atoms(parse(t))) <= 3]


def _complete(t):
    return all(len(row) == t.n_letters and all(0 <= x < t.n_states for x in row) for row in t.trans)


@pytest.mark.parametrize("text", SMALL)
def test_semiautomaton_invariants(text):
    v = prepared(text)
    macros, trans, _ = build_semiautomaton(v)
    assert len(set(macros)) == len(macros)
    assert macros[0] == v.initial
    assert all(len(row) == v.alphabet.size for row in trans)
    for m in macros:
        # the empty-configuration collapse
        assert 0 not in m or m == frozenset({0})
    assert len(macros) <= 2 ** (2 ** v.n)


@pytest.mark.parametrize("text", SMALL)
def test_accepted_lassos_stay_in_allowed_transitions(text):
    v = prepared(text)
    t = build_tgdra(v)
    f = ltl.simplify_formula(ltl.to_positive_normal_form(parse(text)))
    at = [p.k ^ t.all_edges for p in t.pairs]
    n = t.n_letters
    for w in enumerate_lassos(v.alphabet, 1, 2):
        if not ltl.eval_lasso(f, w):
            continue
        states, letters = run_cycle(t.trans, t.initial, w)
        cycle = 0
        for s, x in zip(states, letters):
            cycle |= 1 << (s * n + x)
        assert any(cycle & ~allowed == 0 for allowed in at), w.show()


@given(fs_gs_formulas())
def test_random_tgdra_matches_formula(f):
    v = simplify_vwaa(normalize_accepting_set(translate_ltl_to_vwaa(f, AB)))
    raw = build_tgdra(v)
    t = simplify_tgdra(raw)
    assert _complete(t) and t.n_states <= raw.n_states
    rep = compare(str(f), AB, formula_checker(f, AB), {"raw": tgdra_checker(raw), "simplified": tgdra_checker(t)}, 1, 3)
    assert rep.ok, rep.lines()[:3]
