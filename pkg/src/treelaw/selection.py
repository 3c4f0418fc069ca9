"""Selection of trees from trees of upward-closed label sets.

``sel`` enumerates every canonical tree that can be read off a tree of
label sets by choosing, independently at each position of the unravelling,
a renamed label from the set found there.  The renaming chosen at a vertex
routes the new vertex's children to the old vertex's children, so children
may be merged or duplicated.  ``product_hat`` builds the partial product on
sets of trees from it and ``kappa_naive`` is the pointwise extension used to
show that no associative product of that shape exists.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable

from .config import size_cap
from .core import DISCRETE, SizeCapExceeded, UpSet, letter, sort_of, upclose, upset_image
from .renaming import Renamed, RenamedOrder, position_key, re0, renamed, un
from .trees import GraphTerm, TreeOrder, Var, canonicalize, flat_times, gmap, relabel_vars, sing_times, unravel


@dataclass(frozen=True)
class GraphHom:
    source: GraphTerm
    target: GraphTerm
    mapping: tuple  # target vertex per source vertex
    edge_maps: tuple | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        s, t, phi = self.source, self.target, self.mapping
        if len(phi) != len(s):
            raise ValueError("mapping must cover every source vertex")
        if phi[0] != 0:
            raise ValueError("homomorphism must map root to root")
        for v in range(len(s)):
            w = phi[v]
            if s.is_var(v) != t.is_var(w):
                raise ValueError(f"vertex {v} and its image disagree on being a variable")
            if s.is_var(v):
                continue
            images = {phi[u] for _, u in s.succ[v]}
            if images != {u for _, u in t.succ[w]}:
                raise ValueError(f"successors of {v} are not mapped onto successors of {w}")

    def is_surjective(self) -> bool:
        return set(self.mapping) == set(range(len(self.target)))


def successor_map(hom: GraphHom, v: int) -> dict[int, int]:
    """Edge-label map at ``v``: child ``x`` of ``v`` lands on the ``map[x]``-child of its image."""
    if hom.source.is_var(v):
        raise ValueError("variable vertices have no successor map")
    if hom.edge_maps is not None and hom.edge_maps[v] is not None:
        return dict(hom.edge_maps[v])
    w = hom.mapping[v]
    out = {}
    for x, u in hom.source.succ[v]:
        hits = [z for z, c in hom.target.succ[w] if c == hom.mapping[u]]
        if len(hits) != 1:
            raise ValueError(f"successor map at {v} is ambiguous; supply edge maps")
        out[x] = hits[0]
    return out


@dataclass(frozen=True)
class SelWitness:
    hom: GraphHom
    sigma: dict
    tree: GraphTerm


# -- enumeration --------------------------------------------------------

def selection_size(t: GraphTerm, cap: int | None = None) -> int:
    """Number of selection choices (before deduplication), saturating at ``cap + 1``."""
    cap = size_cap() if cap is None else cap
    if not t.is_acyclic():
        raise ValueError("selection needs a finite tree")
    counts: dict[int, int] = {}

    def count(w: int) -> int:
        if w not in counts:
            lab = t.labels[w]
            if isinstance(lab, Var):
                counts[w] = 1
            else:
                total = 0
                for r in lab.mins:
                    prod = 1
                    for x in sorted(sort_of(r.payload)):
                        prod = min(prod * count(t.child(w, r.mapping[x])), cap + 1)
                    total += prod
                counts[w] = min(total, cap + 1)
        return counts[w]

    return count(0)


def _options(t: GraphTerm, cap: int) -> list:
    if selection_size(t, cap) > cap:
        raise SizeCapExceeded(f"selection would produce more than {cap} trees")
    memo: dict[int, list] = {}

    def opts(w: int) -> list:
        if w in memo:
            return memo[w]
        lab = t.labels[w]
        if isinstance(lab, Var):
            out = [("v", lab.index)]
        else:
            out = []
            for r in lab:
                xs = sorted(sort_of(r.payload))
                kids = [opts(t.child(w, r.mapping[x])) for x in xs]
                for combo in itertools.product(*kids):
                    out.append(("n", r.payload, tuple(zip(xs, combo))))
        memo[w] = out
        return out

    return opts(0)


def _materialize(option) -> Renamed:
    labels: dict = {}
    succ: dict = {}
    leaves: list = []

    def build(opt, path):
        if opt[0] == "v":
            leaves.append((path, opt[1]))
            return path
        labels[path] = opt[1]
        succ[path] = {x: build(child, path + (x,)) for x, child in opt[2]}
        return path

    build(option, ())
    leaves.sort(key=lambda item: position_key(item[0]))
    sigma = {}
    for i, (path, z) in enumerate(leaves):
        labels[path] = Var(i)
        sigma[i] = z
    return renamed(sigma, canonicalize(GraphTerm.build((), labels, succ)))


def sel(t: GraphTerm, label_order=DISCRETE, cap: int | None = None) -> UpSet:
    """All renamed canonical trees selectable from a finite tree of label sets."""
    cap = size_cap() if cap is None else cap
    results = {_materialize(o) for o in _options(t, cap)}
    order = DISCRETE if label_order is DISCRETE else RenamedOrder(TreeOrder(label_order))
    return upclose(results, order, t.sort)


def in_sel(s: GraphTerm, sigma: dict[int, int], t: GraphTerm,
           label_order=DISCRETE) -> SelWitness | None:
    """Search for a homomorphism witnessing that ``⟨sigma, s⟩`` is selectable from ``t``.

    The homomorphism is built on the unravelling of ``s``, since canonical
    payloads share closed subtrees whose copies may land on different vertices.
    """
    canonical = s
    s = unravel(s)
    memo: dict[tuple[int, int], Any] = {}

    def match(v: int, w: int):
        key = (v, w)
        if key in memo:
            return memo[key]
        memo[key] = None
        a, lab = s.labels[v], t.labels[w]
        result = None
        if isinstance(a, Var) or isinstance(lab, Var):
            if isinstance(a, Var) and isinstance(lab, Var) and sigma.get(a.index) == lab.index:
                result = ()
        else:
            for r in lab:
                if sort_of(r.payload) != sort_of(a) or not label_order.leq(r.payload, a):
                    continue
                kids = []
                for x, u in s.succ[v]:
                    if match(u, t.child(w, r.mapping[x])) is None:
                        break
                    kids.append((u, t.child(w, r.mapping[x])))
                else:
                    result = (r.mapping, tuple(kids))
                    break
        memo[key] = result
        return result

    if match(0, 0) is None:
        return None
    phi = [None] * len(s)
    edge_maps: list = [None] * len(s)
    todo = [(0, 0)]
    while todo:
        v, w = todo.pop()
        phi[v] = w
        found = memo[(v, w)]
        if found:
            edge_maps[v] = tuple(sorted(found[0].items()))
            todo.extend(found[1])
    hom = GraphHom(s, t, tuple(phi), tuple(edge_maps))
    return SelWitness(hom, dict(sigma), canonical)


def un_labels(t: GraphTerm) -> GraphTerm:
    """Replace each label set of trees by the set of their renaming splits."""
    return gmap(lambda up: UpSet(frozenset(un(x) for x in up.mins), up.sort), t)


def in_un(s: GraphTerm, sigma: dict[int, int], t: GraphTerm) -> SelWitness | None:
    return in_sel(s, sigma, un_labels(t))


def product_hat(t: GraphTerm, cap: int | None = None) -> UpSet:
    """Partial product on finite trees of finite sets of trees over a discrete alphabet."""
    cap = size_cap() if cap is None else cap
    options = _options(un_labels(t), cap)
    if all(r.payload.is_acyclic() for lab in un_labels(t).labels if not isinstance(lab, Var) for r in lab.mins):
        cons = _HashCons()
        return upclose({cons.tree(cons.node(o)) for o in options}, DISCRETE, t.sort)
    return upclose({_flattened(o) for o in options}, DISCRETE, t.sort)


class _HashCons:
    """Finite flattened trees as shared nodes; equal subtrees get equal ids."""

    def __init__(self) -> None:
        self.ids: dict = {}
        self.keys: list = []
        self.by_option: dict = {}
        self.trees: dict = {}

    def intern(self, key) -> int:
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.keys)
            self.keys.append(key)
        return i

    def node(self, opt) -> int:
        i = self.by_option.get(id(opt))
        if i is not None:
            return i
        if opt[0] == "v":
            i = self.intern((Var(opt[1]), ()))
        else:
            payload = opt[1]
            below = {x: self.node(child) for x, child in opt[2]}
            memo: dict[int, int] = {}

            def walk(v: int) -> int:
                if v not in memo:
                    lab = payload.labels[v]
                    if isinstance(lab, Var):
                        memo[v] = below[lab.index]
                    else:
                        memo[v] = self.intern((lab, tuple((x, walk(u)) for x, u in payload.succ[v])))
                return memo[v]

            i = walk(0)
        self.by_option[id(opt)] = i
        return i

    def tree(self, root: int) -> GraphTerm:
        """Normal form as produced by ``canonicalize``: breadth-first, children in variable order."""
        if root not in self.trees:
            order, index = [root], {root: 0}
            for i in order:
                for _, u in self.keys[i][1]:
                    if u not in index:
                        index[u] = len(order)
                        order.append(u)
            labels = tuple(self.keys[i][0] for i in order)
            succ = tuple(tuple((x, index[u]) for x, u in self.keys[i][1]) for i in order)
            self.trees[root] = GraphTerm(labels, succ)
        return self.trees[root]


def _flattened(option) -> GraphTerm:
    """The flattening of the renamed selection ``option`` describes, built in one pass.

    Equal to ``flat_times(re(_materialize(option)))``; sub-options shared in the
    enumeration memo become shared vertices.
    """
    labels: dict = {}
    succ: dict = {}
    roots: dict[int, Any] = {}

    def build(opt):
        key = id(opt)
        if key in roots:
            return roots[key]
        if opt[0] == "v":
            roots[key] = ("v", opt[1])
            labels[("v", opt[1])] = Var(opt[1])
            return roots[key]
        payload = opt[1]
        roots[key] = (key, 0)
        below = {x: build(child) for x, child in opt[2]}
        for i, lab in enumerate(payload.labels):
            if isinstance(lab, Var):
                continue
            labels[(key, i)] = lab
            succ[(key, i)] = {x: below[payload.labels[j].index] if isinstance(payload.labels[j], Var)
                              else (key, j) for x, j in payload.succ[i]}
        return roots[key]

    return canonicalize(GraphTerm.build(build(option), labels, succ))


def kappa_naive(family: Iterable[GraphTerm], cap: int | None = None) -> UpSet:
    members = list(family.mins if isinstance(family, UpSet) else family)
    out: set = set()
    sort = None
    for t in members:
        res = product_hat(t, cap)
        out |= res.mins
        sort = t.sort
    return upclose(out, DISCRETE, sort)


def upset_of_trees(trees: Iterable[GraphTerm], sort: frozenset | None = None) -> UpSet:
    return upclose(set(trees), DISCRETE, sort)


def selection_identity_sides(t: GraphTerm) -> tuple[UpSet, UpSet]:
    """Both sides of the selection/flattening compatibility for a tree of trees of label sets."""
    left = sel(flat_times(t))
    inner = gmap(sel, t)
    right = upset_image(lambda r: Renamed(r.sigma, flat_times(r.payload)), sel(inner))
    return left, right


def kappa_witness() -> tuple[UpSet, UpSet]:
    """Both sides of associativity for the naive union-of-products on the two-level witness.

    The witness is the single tree whose root carries {I, J} as trees and whose
    child carries {C, D}, with I = {a(x0,x0)}, J = {b(x0,x0)}, C = {c}, D = {d}.
    """
    a, b, c, d = letter("a", 2), letter("b", 2), letter("c"), letter("d")

    def diagonal(f) -> GraphTerm:
        return canonicalize(GraphTerm.build("r", {"r": f, "u": Var(0), "v": Var(0)},
                                            {"r": {0: "u", 1: "v"}}))

    I, J = upset_of_trees([diagonal(a)]), upset_of_trees([diagonal(b)])
    C, D = upset_of_trees([sing_times(c)]), upset_of_trees([sing_times(d)])
    K = upset_of_trees([sing_times(I), sing_times(J)])
    E = upset_of_trees([sing_times(C), sing_times(D)])
    top = canonicalize(GraphTerm.build(0, {0: K, 1: E}, {0: {0: 1}}))
    family = upset_of_trees([top])
    left = kappa_naive(kappa_naive(family))
    right = kappa_naive(upset_image(lambda t: canonicalize(gmap(kappa_naive, t)), family))
    return left, right
