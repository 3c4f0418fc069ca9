import pytest
from hypothesis import given, strategies as st

from treelaw import generators as gen
from treelaw.core import SortError, letter
from treelaw.trees import (GraphTerm, Var, bisimilar, canonicalize, flat, flat_times, gmap, height,
                           is_linear, merge_variables, parse_tree, sing, tree_text, unravel, unravel_depth)

seeds = st.integers(min_value=0, max_value=2**32)


def test_parse_and_print_finite_tree():
    t = parse_tree("a(b(x0),c)")
    assert tree_text(t) == "a(b(x0),c)"
    assert t.sort == frozenset({0})


def test_cycles_print_with_back_references():
    t = parse_tree("#0=a(#0,c)")
    assert tree_text(t) == "#0=a(#0,c)"
    assert not t.is_acyclic()


def test_bisimilar_unfoldings_share_a_canonical_form():
    assert parse_tree("#0=a(#0,c)") == parse_tree("a(#1=a(#1,c),c)")
    assert parse_tree("#0=a(#0,#0)") == parse_tree("#0=a(a(#0,#0),#0)")


def test_sort_mismatch_is_rejected():
    with pytest.raises(SortError):
        GraphTerm.build(0, {0: letter("a", 2), 1: Var(0)}, {0: {0: 1}})


def test_root_cannot_be_a_variable():
    with pytest.raises(ValueError):
        GraphTerm.build(0, {0: Var(0)}, {})


def test_unravel_duplicates_shared_subtrees():
    t = parse_tree("a(b(c),b(c))")
    u = unravel(t)
    assert u.is_tree() and len(u) == 5
    assert canonicalize(u) == t


def test_height_and_depth_cut():
    t = parse_tree("a(b(c),c)")
    assert height(t) == 3  # levels, not edges
    assert height(unravel_depth(parse_tree("#0=b(#0)"), 3)) == 4


def test_linearity():
    assert is_linear(parse_tree("a(x0,x1)"))
    assert not is_linear(parse_tree("a(x0,x0)"))


def test_merge_variables_gives_one_vertex_per_variable():
    g = GraphTerm.build(0, {0: letter("a", 2), 1: Var(0), 2: Var(0)}, {0: {0: 1, 1: 2}})
    assert len(merge_variables(g)) == 2


@given(seeds)
def test_canonical_form_is_idempotent_and_bisimilar(seed):
    r = gen.rng(seed)
    g = gen.random_regular(r, gen.letters_label(), gen.random_sort(r), 3, cyclic=True)
    c = canonicalize(g)
    assert canonicalize(c) == c
    assert bisimilar(g, c)


@given(seeds)
def test_text_round_trip(seed):
    t = gen.random_regular_over(gen.rng(seed), variables=(0, 1))
    assert parse_tree(tree_text(t)) == t


@given(seeds)
def test_flat_of_singletons_is_identity(seed):
    r = gen.rng(seed)
    t = gen.random_graph(r, gen.letters_label(), gen.random_sort(r), 3)
    assert flat(sing(t)) == t
    assert canonicalize(flat_times(gmap(lambda a: canonicalize(sing(a)), canonicalize(t)))) == canonicalize(t)


@given(seeds)
def test_pointwise_minimal_matches_quadratic_definition(seed):
    from treelaw.core import minimal
    from treelaw.trees import GraphOrder

    r = gen.rng(seed)
    poset = gen.random_poset(r)
    shape = gen.random_tree(r, gen.poset_label(poset), gen.random_sort(r), 2)
    order = GraphOrder(poset)
    graphs = {canonicalize(gmap(lambda a: r.choice(poset.carrier(a.sort)), shape)) for _ in range(12)}
    graphs |= {gen.random_tree(r, gen.poset_label(poset), gen.random_sort(r), 2) for _ in range(4)}
    naive = frozenset(a for a in graphs if not any(b != a and order.leq(b, a) for b in graphs))
    assert minimal(graphs, order) == naive


def test_tree_order_compares_unravellings_not_graphs():
    from treelaw.core import SortedPoset
    from treelaw.trees import GraphOrder, TreeOrder

    P = SortedPoset([letter("c"), letter("d")], [("c", "d")])
    a = letter("a", 2)

    def tree(left, right):
        return canonicalize(GraphTerm.build(0, {0: a, 1: P[left], 2: P[right]}, {0: {0: 1, 1: 2}}))

    shared, split = tree("c", "c"), tree("c", "d")
    assert len(shared) == 2 and len(split) == 3
    assert TreeOrder(P).leq(shared, split)
    assert not TreeOrder(P).leq(split, shared)
    assert not GraphOrder(P).leq(shared, split)
