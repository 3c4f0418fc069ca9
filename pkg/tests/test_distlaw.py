import pytest

from treelaw.core import SortedPoset, letter, pt, upclose
from treelaw.distlaw import dist, dist_times, times_witness_pairs
from treelaw.suites import dist_law_reports, monad_law_reports
from treelaw.trees import GraphTerm, parse_raw, raw_to_graph


def label_tree(text, poset):
    def label(head, nargs):
        if isinstance(head, list):
            return upclose([poset[n.head] for n in head], poset, frozenset(range(nargs)))
        return pt(letter(head, nargs))
    return raw_to_graph(parse_raw(text), label)


def test_dist_of_a_tree_of_sets_is_all_choices():
    P = SortedPoset([letter("c"), letter("d")])
    res = dist(label_tree("a({c,d},{c})", P))
    assert sorted(map(str, res.mins)) == ["a(c,c)", "a(d,c)"]


def test_dist_keeps_only_minimal_trees():
    P = SortedPoset([letter("c"), letter("d")], [("c", "d")])
    res = dist(label_tree("a({c,d},{d})", P))
    assert sorted(map(str, res.mins)) == ["a(c,d)"]


def test_dist_with_an_empty_label_is_empty():
    P = SortedPoset([letter("c")])
    assert dist(label_tree("a({},{c})", P)).is_empty()


def test_times_witness_pairs():
    left, right = times_witness_pairs()
    assert left == {("p", "p"), ("p", "q"), ("q", "p"), ("q", "q")}
    assert right == {("p", "p"), ("q", "q")}


@pytest.mark.parametrize("monad", ["R", "T", "Tx", "U"])
def test_monad_laws_small(monad):
    reports = monad_law_reports(monad, 30, seed=5)
    assert reports and all(r.passed for r in reports)


@pytest.mark.parametrize("monad", ["R", "T"])
def test_dist_law_small(monad):
    reports = dist_law_reports(monad, 30, seed=5)
    assert reports and all(r.passed for r in reports)


def test_dist_law_fails_for_non_linear_trees():
    reports = dist_law_reports("Tx", 5, seed=5)
    assert any(not r.passed and r.axiom == "dist.mult" for r in reports)
