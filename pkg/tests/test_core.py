import pytest
from hypothesis import given, strategies as st

from treelaw.core import (DISCRETE, UPSET_ORDER, SortError, SortedPoset, Symbol, UpSet, letter, minimal,
                          parse_var, prefix_sort, pt, union_flat, upclose, upset_image, var_name)


def chain_poset():
    c, d, e = letter("c"), letter("d"), letter("e")
    return SortedPoset([c, d, e, letter("f", 1)], [("c", "d"), ("d", "e")])


def test_variable_names_round_trip():
    for k in (0, 3, 17):
        assert parse_var(var_name(k)) == k
    with pytest.raises(ValueError):
        parse_var("y1")


def test_poset_closure_is_transitive():
    P = chain_poset()
    assert P.leq(P["c"], P["e"])
    assert not P.leq(P["e"], P["c"])
    assert P.order_pairs() == [("c", "d"), ("c", "e"), ("d", "e")]


def test_poset_rejects_cycles_and_cross_sort_pairs():
    with pytest.raises(ValueError):
        SortedPoset([letter("c"), letter("d")], [("c", "d"), ("d", "c")])
    with pytest.raises(SortError):
        SortedPoset([letter("c"), letter("f", 1)], [("c", "f")])


def test_upset_equality_uses_minimal_elements():
    P = chain_poset()
    assert upclose([P["c"], P["e"]], P) == pt(P["c"], P)
    assert P["e"] in pt(P["c"], P)
    assert P["c"] not in pt(P["d"], P)


def test_upsets_of_a_sort_are_antichains():
    P = chain_poset()
    ups = P.upsets(frozenset())
    assert len(ups) == 4  # empty, {c..}, {d..}, {e}


def test_mixed_sorts_rejected():
    with pytest.raises(SortError):
        upclose([letter("c"), letter("f", 1)])


def test_union_flat_of_empty_family_is_empty():
    assert union_flat(UpSet(frozenset(), frozenset())).is_empty()


def test_upset_order_is_reversed_inclusion():
    small, big = upclose([letter("c")]), upclose([letter("c"), letter("d")])
    assert UPSET_ORDER.leq(big, small)
    assert not UPSET_ORDER.leq(small, big)


names = st.sampled_from(["c", "d", "e"])


@given(st.lists(names, max_size=3), st.lists(names, max_size=3))
def test_union_flat_is_union_of_members(xs, ys):
    P = chain_poset()
    a, b = upclose([P[n] for n in xs], P, frozenset()), upclose([P[n] for n in ys], P, frozenset())
    fam = upclose([a, b], UPSET_ORDER)
    got = union_flat(fam)
    for n in "cde":
        assert (P[n] in got) == (P[n] in a or P[n] in b)


@given(st.lists(names, max_size=3))
def test_minimal_is_an_antichain(xs):
    P = chain_poset()
    ms = minimal([P[n] for n in xs], P)
    assert all(not P.leq(a, b) for a in ms for b in ms if a != b)


@given(st.lists(names, min_size=1, max_size=3))
def test_image_under_monotone_map(xs):
    P = chain_poset()
    up = upclose([P[n] for n in xs], P)
    top = upset_image(lambda a: P["e"], up, P)
    assert top == pt(P["e"], P)


def test_prefix_sort():
    assert prefix_sort(3) == frozenset({0, 1, 2})
    assert Symbol("a", prefix_sort(2)) == letter("a", 2)
