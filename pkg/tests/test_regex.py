import itertools
import json

import pytest
from hypothesis import assume, given, strategies as st

from oracles import finite_language, parse, show
from treelaw import generators as gen
from treelaw import jsonio
from treelaw.automata import membership
from treelaw.core import SortError
from treelaw.regex import (Empty, Iterate, Letter, OmegaPower, Relabel, Subst, Union, compile_regex, from_automaton,
                           from_json, member, pretty, to_json)
from treelaw.trees import parse_tree

VARS = (0, 1)


def leaf_exprs():
    return st.one_of(
        st.just(Letter("c", ())),
        st.builds(lambda v: Letter("g", (v,)), st.sampled_from(VARS)),
        st.builds(lambda a, b: Letter("f", (a, b)), st.sampled_from(VARS), st.sampled_from(VARS)),
        st.just(Empty()),
    )


def extend(children):
    return st.one_of(
        st.builds(lambda a, b: Union((a, b)), children, children),
        st.builds(Subst, st.sampled_from(VARS), children, children),
        st.builds(lambda m, r: Relabel(tuple((x, m[x]) for x in sorted(r.sort)), r),
                  st.fixed_dictionaries({x: st.sampled_from(VARS) for x in VARS}), children),
    )


finite_exprs = st.recursive(leaf_exprs(), extend, max_leaves=6)


def small_terms(depth):
    """Every term over c, g, f and x0, x1 up to the given depth."""
    if depth == 0:
        return [("c", ()), ("x", 0), ("x", 1)]
    smaller = small_terms(depth - 1)
    out = list(smaller)
    out += [("g", (t,)) for t in smaller]
    out += [("f", (a, b)) for a, b in itertools.product(smaller, repeat=2)]
    return list(dict.fromkeys(out))


PROBES = [t for t in small_terms(2) if t[0] != "x"]


@given(finite_exprs)
def test_compiled_finite_expressions_match_their_language(r):
    lang = finite_language(r)
    assume(len(lang) <= 60)
    aut = compile_regex(r)
    for t in lang | set(PROBES):
        if t[0] == "x":
            continue
        assert membership(aut, parse_tree(show(t))) == (t in lang), (pretty(r), show(t))


@pytest.mark.parametrize("name", ["E", "R", "S"])
def test_example_verdicts(fixtures, name):
    r = jsonio.regex_load(jsonio.load(fixtures / "regex" / f"{name}.json"))
    aut = compile_regex(r)
    table = jsonio.load(fixtures / "regex" / "verdicts.json")
    for label, row in table.items():
        assert membership(aut, parse_tree(row["term"])) is row[name], label


def test_iteration_needs_finitely_many_blocks_per_branch():
    # (g(x0) + c)^{+x0}: finite g-chains ending in c, never the infinite chain
    r = Iterate(0, (Union((Letter("g", (0,)), Letter("c", ()))),))
    assert member(r, parse_tree("g(g(c))"))
    assert member(r, parse_tree("g(x0)"))
    assert not member(r, parse_tree("#0=g(#0)"))


def test_omega_power_allows_infinite_stacking_and_removes_the_variable():
    r = OmegaPower(0, (Union((Letter("g", (0,)), Letter("c", ()))),))
    assert r.sort == frozenset()
    assert member(r, parse_tree("#0=g(#0)"))
    assert member(r, parse_tree("g(c)"))
    assert not member(r, parse_tree("g(x0)"))


def test_sort_errors():
    with pytest.raises(SortError):
        Iterate(1, (Letter("g", (0,)),)).sort
    with pytest.raises(SortError):
        Relabel(((0, 1),), Letter("f", (0, 1))).sort


def test_json_round_trip_with_sharing(fixtures):
    r = jsonio.regex_load(jsonio.load(fixtures / "regex" / "S.json"))
    for share in (True, False):
        back = from_json(json.loads(json.dumps(to_json(r, share))))
        assert pretty(back) == pretty(r)


def test_unknown_operator_rejected():
    with pytest.raises(ValueError):
        from_json({"op": "star", "args": []})


@pytest.mark.parametrize("seed", range(6))
def test_round_trip_on_random_automata(seed):
    r = gen.rng(seed)
    A = gen.random_automaton(r)
    C = compile_regex(from_automaton(A))
    for _ in range(15):
        t = gen.random_regular_over(r, variables=(0,))
        assert membership(C, t) == membership(A, t)
