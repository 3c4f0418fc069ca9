import pytest
from hypothesis import given, strategies as st

from oracles import accepts_finite, parse
from treelaw import generators as gen
from treelaw import jsonio
from treelaw.automata import Move, ParityAutomaton, Profile, bounded_by, find_witness, is_empty, membership, profile_of
from treelaw.core import SortError, letter
from treelaw.trees import parse_tree, unravel

seeds = st.integers(0, 2**32)


def load(fixtures, name):
    return jsonio.automaton_from_json(jsonio.load(fixtures / "automata" / f"{name}.json"))


@pytest.mark.parametrize("term,verdict", [
    ("#0=a(#0,#0)", True), ("#0=b(#0,#0)", False), ("b(#0=b(#0,#0),a(c,c))", True), ("c", False),
])
def test_contains_a(fixtures, term, verdict):
    assert membership(load(fixtures, "contains_a"), parse_tree(term)) is verdict


def test_infinite_branches_accepted(fixtures):
    A = load(fixtures, "infbranch")
    assert membership(A, parse_tree("#0=a(#0,#0)"))
    assert find_witness(A) is not None


def test_transitionless_automaton_is_empty(fixtures):
    assert is_empty(load(fixtures, "none"))


def test_no_b_tail(fixtures):
    A = load(fixtures, "no_b_tail")
    assert membership(A, parse_tree("#0=a(#0,#0)"))
    assert not membership(A, parse_tree("#0=b(#0,#0)"))


def test_invalid_automata_rejected():
    with pytest.raises(SortError):
        ParityAutomaton(("q",), "q", {"q": 0}, (Move("q", letter("a", 2), ("q",)),), frozenset(), frozenset())
    with pytest.raises(ValueError):
        ParityAutomaton(("q",), "p", {"q": 0}, (), frozenset(), frozenset())
    with pytest.raises(SortError):
        ParityAutomaton(("q",), "q", {"q": 0}, (), frozenset({("q", 1)}), frozenset({0}))


def test_json_round_trip(fixtures):
    A = load(fixtures, "no_b_tail")
    B = jsonio.automaton_from_json(jsonio.automaton_to_json(A))
    assert B.moves == A.moves and B.var_moves == A.var_moves and B.priority == A.priority


@given(seeds)
def test_membership_matches_run_search_on_finite_trees(seed):
    r = gen.rng(seed)
    A = gen.random_automaton(r)
    for _ in range(10):
        t = gen.random_regular_over(r, variables=(0,), cyclic_prob=0.0)
        assert membership(A, t) == accepts_finite(A, parse(str(unravel(t))))


@given(seeds)
def test_witnesses_are_accepted(seed):
    A = gen.random_automaton(gen.rng(seed))
    w = find_witness(A)
    if w is not None:
        assert membership(A, w)
    else:
        assert not any(membership(A, gen.random_regular_over(gen.rng(seed + i), variables=(0,)))
                       for i in range(20))


def test_profile_of_partial_run():
    q, p = "q", "p"
    A = ParityAutomaton((q, p), q, {q: 2, p: 1},
                        (Move(q, letter("a", 2), (p, q)), Move(p, letter("b", 1), (q,))),
                        frozenset({(q, 0), (q, 1)}), frozenset({0, 1}))
    t = unravel(parse_tree("a(b(x0),x1)"))
    run = {0: q, 1: p, 2: q, 3: q}
    prof = profile_of(A, t, run)
    assert prof.root == q
    assert prof.pairs(0) == {(1, q)}
    assert prof.pairs(1) == {(2, q)}
    assert bounded_by(prof, Profile.of(q, {0: {(1, q), (2, q)}, 1: {(2, q)}}))
    assert not bounded_by(prof, Profile.of(p, {0: {(1, q)}, 1: {(2, q)}}))
    with pytest.raises(ValueError):
        profile_of(A, t, {0: q, 1: q, 2: q, 3: q})
