"""The distributive law of tree monads over upward-closed sets, and law checks.

``dist`` turns a tree of label sets into the set of trees obtained by
picking one member of every label set.  For linear trees and for plain
graphs this satisfies the four distributive-law equations; for non-linear
regular trees the multiplication equation fails, because a position that is
duplicated by flattening receives one choice before flattening but
independent choices after it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .config import size_cap
from .core import (DISCRETE, UPSET_ORDER, SizeCapExceeded, Symbol, UpSet, letter, pt, render, union_flat,
                   upclose, upset_image)
from .trees import GraphOrder, GraphTerm, TreeOrder, Var, canonicalize, flat, flat_times, gmap, sing, unravel


def _lift(order, monad_name: str = "R"):
    if order is DISCRETE:
        return DISCRETE
    return TreeOrder(order) if monad_name == "Tx" else GraphOrder(order)


def _label_order(t: GraphTerm):
    for lab in t.labels:
        if isinstance(lab, UpSet):
            return lab.order
    return DISCRETE


def dist(t: GraphTerm, cap: int | None = None) -> UpSet:
    """Every same-shaped relabelling picking a member of each label set."""
    cap = size_cap() if cap is None else cap
    slots = [v for v, lab in enumerate(t.labels) if not isinstance(lab, Var)]
    choices = [list(t.labels[v]) for v in slots]
    total = 1
    for c in choices:
        total *= len(c)
        if total > cap:
            raise SizeCapExceeded(f"dist would produce more than {cap} graphs")
    out = set()
    for pick in itertools.product(*choices):
        labels = list(t.labels)
        for v, a in zip(slots, pick):
            labels[v] = a
        out.add(GraphTerm(tuple(labels), t.succ))
    # picks from antichains on one fixed shape are pairwise incomparable
    return UpSet(frozenset(out), t.sort, _lift(_label_order(t)))


def dist_times(t: GraphTerm, cap: int | None = None) -> UpSet:
    """The same construction for regular trees, taken on the finite unravelling."""
    res = dist(unravel(t, cap), cap)
    # canonical forms keep the unravellings, so the antichain stays an antichain
    return UpSet(frozenset(canonicalize(s) for s in res.mins), res.sort, _lift(_label_order(t), "Tx"))


# -- monads -------------------------------------------------------------

@dataclass(frozen=True)
class Monad:
    name: str
    unit: Callable[[Any], Any]
    mult: Callable[[Any], Any]
    fmap: Callable[[Callable, Any], Any]


def _times_fmap(f, t):
    return canonicalize(gmap(f, t))


GRAPHS = Monad("R", sing, flat, gmap)
LINEAR = Monad("T", sing, flat, gmap)
TREES = Monad("Tx", lambda a: canonicalize(sing(a)), flat_times, _times_fmap)
UPSETS = Monad("U", lambda a: pt(a, UPSET_ORDER if isinstance(a, UpSet) else DISCRETE),
               union_flat, lambda f, up: upset_image(f, up, UPSET_ORDER))
MONADS = {m.name: m for m in (GRAPHS, LINEAR, TREES, UPSETS)}
DISTS = {"R": dist, "T": dist, "Tx": dist_times}


@dataclass
class LawReport:
    axiom: str
    sample_index: int
    passed: bool
    left: Any
    right: Any

    def to_json(self) -> str:
        return json.dumps({"axiom": self.axiom, "sampleIndex": self.sample_index,
                           "pass": self.passed, "left": render(self.left),
                           "right": render(self.right)}, ensure_ascii=False, sort_keys=True)


def check_monad_laws(monad: Monad, units: Iterable[Any], triples: Iterable[Any]) -> list[LawReport]:
    """Unit laws on ``units`` (values of M A) and associativity on ``triples`` (values of M M M A)."""
    out = []
    for i, x in enumerate(units):
        left = monad.mult(monad.unit(x))
        out.append(LawReport("mult.unit=id", i, left == x, left, x))
        right = monad.mult(monad.fmap(monad.unit, x))
        out.append(LawReport("mult.map(unit)=id", i, right == x, right, x))
    for i, x in enumerate(triples):
        left = monad.mult(monad.mult(x))
        right = monad.mult(monad.fmap(monad.mult, x))
        out.append(LawReport("mult.mult=mult.map(mult)", i, left == right, left, right))
    return out


def dist_axiom_sides(monad_name: str, axiom: str, x: Any, base=DISCRETE,
                     delta: Callable | None = None) -> tuple[Any, Any]:
    """Left and right side of one distributive-law equation at the sample ``x``.

    ``mult`` takes a tree of trees of label sets, ``unit`` a label set,
    ``union`` a tree of label sets of label sets and ``pt`` a tree of labels.
    """
    m = MONADS[monad_name]
    delta = delta or DISTS[monad_name]
    lifted = _lift(base, monad_name)
    if axiom == "mult":
        left = delta(m.mult(x))
        right = upset_image(m.mult, delta(m.fmap(delta, x)), lifted)
    elif axiom == "unit":
        left = delta(m.unit(x))
        right = upset_image(m.unit, x, lifted)
    elif axiom == "union":
        left = delta(m.fmap(union_flat, x))
        right = union_flat(upset_image(delta, delta(x), UPSET_ORDER))
    elif axiom == "pt":
        left = delta(m.fmap(lambda a: pt(a, base), x))
        right = pt(x, lifted)
    else:
        raise ValueError(f"unknown axiom {axiom!r}")
    return left, right


AXIOMS = ("mult", "unit", "union", "pt")


def check_dist_law(monad_name: str, samples: dict[str, Iterable[Any]], base=DISCRETE,
                   delta: Callable | None = None) -> list[LawReport]:
    out = []
    for axiom in AXIOMS:
        for i, x in enumerate(samples.get(axiom, ())):
            left, right = dist_axiom_sides(monad_name, axiom, x, base, delta)
            out.append(LawReport(f"dist.{axiom}", i, left == right, left, right))
    return out


# -- the failure witness for regular trees ---------------------------------

def times_witness() -> GraphTerm:
    """Tree of trees of label sets whose flattening duplicates a label set {p, q}.

    The outer root carries f(x0, x0) and its x0-child carries the single label set.
    """
    f, p, q = letter("f", 2), letter("p"), letter("q")
    inner = GraphTerm.build("r", {"r": pt(f), "a": Var(0), "b": Var(0)},
                            {"r": {0: "a", 1: "b"}})
    leaf = canonicalize(sing(upclose({p, q})))
    return GraphTerm.build(0, {0: canonicalize(inner), 1: leaf}, {0: {0: 1}})


def leaf_pairs(trees: UpSet) -> set[tuple[str, str]]:
    """Project trees of shape f(u, v) to the pair of their leaf labels."""
    pairs = set()
    for t in trees.mins:
        u = unravel(t)
        kids = [render(u.labels[c]) for _, c in u.succ[0]]
        pairs.add(tuple(kids))
    return pairs


def times_witness_pairs() -> tuple[set, set]:
    s = times_witness()
    left, right = dist_axiom_sides("Tx", "mult", s)
    return leaf_pairs(left), leaf_pairs(right)
