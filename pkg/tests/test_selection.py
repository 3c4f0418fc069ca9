import pytest

from treelaw.cli import _set_of_trees_label
from treelaw.selection import in_un, kappa_witness, product_hat, sel, un_labels
from treelaw.suites import pihat_reports, sel_reports
from treelaw.trees import canonicalize, gmap, parse_raw, parse_tree, raw_to_graph


def set_tree(text):
    return canonicalize(raw_to_graph(parse_raw(text), _set_of_trees_label))


def names(up):
    return sorted(str(t) for t in up.mins)


def test_product_of_linear_label_chooses_per_position():
    assert names(product_hat(set_tree("{a(x0,x1)}({c,d},{c})"))) == ["a(c,c)", "a(d,c)"]


def test_product_lets_copies_choose_independently():
    assert names(product_hat(set_tree("{a(x0,x0)}({c,d})"))) == ["a(c,c)", "a(c,d)", "a(d,c)", "a(d,d)"]


def test_product_with_empty_label_is_empty():
    assert product_hat(set_tree("{a(x0,x0)}({})")).is_empty()


def test_product_needs_a_finite_tree():
    with pytest.raises(ValueError):
        product_hat(set_tree("#0={a(x0,x0)}(#0)"))


def test_selection_membership_matches_enumeration():
    t = set_tree("{a(x0,x0)}({c,d})")
    selected = sel(un_labels(t))
    assert len(selected) == 4
    for r in selected.mins:
        assert in_un(r.payload, r.mapping, t) is not None
    r = next(iter(selected.mins))
    foreign = canonicalize(gmap(lambda lab: lab if lab.sort else parse_tree("e"), r.payload))
    assert in_un(foreign, r.mapping, t) is None


def test_kappa_is_not_associative():
    left, right = kappa_witness()
    assert names(left) == ["a(c,c)", "a(d,d)", "b(c,c)", "b(d,d)"]
    assert len(right) == 8
    assert left != right


@pytest.mark.parametrize("suite", [sel_reports, pihat_reports])
def test_suites_small(suite):
    reports = suite(15, seed=3)
    assert all(r.passed for r in reports), [r.axiom for r in reports if not r.passed][:3]


def test_shared_construction_matches_direct_flattening():
    from treelaw import generators as gen
    from treelaw.selection import _HashCons, _flattened, _options

    r = gen.rng(17)
    for _ in range(40):
        t = un_labels(canonicalize(gen.random_tree(r, gen.tree_set_label(3, 2), gen.random_sort(r), 2)))
        options = _options(t, 10**5)
        cons = _HashCons()
        assert [cons.tree(cons.node(o)) for o in options] == [_flattened(o) for o in options]
