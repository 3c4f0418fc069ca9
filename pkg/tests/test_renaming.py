import pytest

from treelaw.renaming import UnsupportedTree, comp, inj, is_canonical, re, re0, renamed, un
from treelaw.suites import dun_reports, unre_reports
from treelaw.trees import parse_tree


def test_un_names_leaves_left_to_right():
    r = un(parse_tree("a(x1,b(x0))"))
    assert str(r.payload) == "a(x0,b(x1))"
    assert r.mapping == {0: 1, 1: 0}


def test_un_separates_repeated_variables():
    r = un(parse_tree("a(x0,x0)"))
    assert str(r.payload) == "a(x0,x1)"
    assert r.mapping == {0: 0, 1: 0}
    assert re(r) == parse_tree("a(x0,x0)")


def test_un_keeps_closed_cycles_shared():
    t = parse_tree("a(x0,#0=b(#0))")
    r = un(t)
    assert r.payload == t and r.is_identity()


def test_variable_below_a_cycle_is_unsupported():
    with pytest.raises(UnsupportedTree):
        un(parse_tree("#0=a(#0,x0)"))


def test_canonical_trees():
    assert is_canonical(parse_tree("a(x0,x1)"))
    assert not is_canonical(parse_tree("a(x1,x0)"))
    assert not is_canonical(parse_tree("a(x0,x0)"))
    with pytest.raises(ValueError):
        re0(inj(parse_tree("a(x0,x0)")))


def test_comp_composes_renamings():
    inner = renamed({0: 0, 1: 1}, parse_tree("a(x0,x1)"))
    outer = renamed({0: 2, 1: 2}, inner)
    assert comp(outer) == renamed({0: 2, 1: 2}, parse_tree("a(x0,x1)"))


@pytest.mark.parametrize("suite", [unre_reports, dun_reports])
def test_identity_suites_small(suite):
    reports = suite(40, seed=11)
    assert all(r.passed for r in reports), [r.axiom for r in reports if not r.passed][:3]
