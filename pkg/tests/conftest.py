import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ltlrabin import ltl

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ATOMS = ("a", "b", "c")


def formulas(props=ATOMS, max_leaves=8, temporal=True):
    """Random formulas over ``props`` built through the public constructors."""
    leaves = st.sampled_from([ltl.Atom(p) for p in props] + [ltl.TRUE, ltl.FALSE])
    unary = [ltl.Not]
    if temporal:
        unary += [ltl.Next, ltl.Eventually, ltl.Always, ltl.StrictEventually, ltl.StrictAlways]

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(unary), children).map(lambda t: t[0](t[1])),
            st.lists(children, min_size=2, max_size=3).map(lambda xs: ltl.conj(*xs)),
            st.lists(children, min_size=2, max_size=3).map(lambda xs: ltl.disj(*xs)),
            *(
                [st.tuples(children, children).map(lambda t: ltl.Until(*t))]
                if temporal
                else []
            ),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def fs_gs_formulas(props=("a", "b"), max_leaves=6):
    """PNF formulas of the F/G/Fs/Gs fragment, the MMAA-producing input class."""
    lits = [ltl.Atom(p) for p in props] + [ltl.Not(ltl.Atom(p)) for p in props]
    leaves = st.sampled_from(lits)
    ops = [ltl.Eventually, ltl.Always, ltl.StrictEventually, ltl.StrictAlways]

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(ops), children).map(lambda t: t[0](t[1])),
            st.lists(children, min_size=2, max_size=2).map(lambda xs: ltl.conj(*xs)),
            st.lists(children, min_size=2, max_size=2).map(lambda xs: ltl.disj(*xs)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture(autouse=True)
def _restore_backend():
    from ltlrabin import kernels

    prev = kernels.backend()
    yield
    kernels.set_backend(prev)
