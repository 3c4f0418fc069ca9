"""Seeded random generators for every property suite and experiment.

All randomness in the package flows through ``random.Random`` instances
created by ``rng(seed)``, so a seed fully determines every sample.

Vertex sorts are always initial segments {x0..x_{k-1}}; the free variables
of a generated tree are drawn from a small pool and need not be an initial
segment.
"""
from __future__ import annotations

import itertools
import random
from typing import Any, Callable

from .automata import Move, ParityAutomaton
from .core import DISCRETE, UPSET_ORDER, SortedPoset, Symbol, UpSet, letter, prefix_sort, upclose
from .renaming import Renamed, UnsupportedTree, renamed, un
from .trees import GraphTerm, Var, canonicalize, merge_variables

LabelFn = Callable[[random.Random, frozenset], Any]

VAR_POOL = (0, 1, 2)


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def alphabet(max_arity: int = 2) -> dict[int, list[Symbol]]:
    names = {0: ["c", "d"], 1: ["g", "h"], 2: ["a", "b"], 3: ["e"]}
    return {k: [letter(n, k) for n in names[k]] for k in range(max_arity + 1)}


def letters_label(max_arity: int = 2) -> LabelFn:
    table = alphabet(max_arity)

    def pick(r: random.Random, sort: frozenset):
        return r.choice(table[len(sort)])

    return pick


def random_sort(r: random.Random, pool=VAR_POOL, max_size: int = 2) -> frozenset:
    k = r.randint(0, min(max_size, len(pool)))
    return frozenset(r.sample(pool, k))


def random_surjection(r: random.Random, domain: frozenset, target_size: int | None = None,
                      pool=VAR_POOL) -> dict[int, int]:
    dom = sorted(domain)
    if not dom:
        return {}
    k = target_size if target_size is not None else r.randint(1, min(len(dom), len(pool)))
    image = r.sample(pool, k) if k <= len(pool) else list(range(k))
    values = image + [r.choice(image) for _ in range(len(dom) - k)]
    r.shuffle(values)
    return dict(zip(dom, values))


# -- trees and graphs ---------------------------------------------------------

def _skeleton(r: random.Random, depth: int, max_arity: int, leaf_bias: float):
    """Nested (arity, children) shape; ``None`` marks a leaf slot."""
    if depth <= 0 or r.random() < leaf_bias:
        return None
    k = r.randint(0, max_arity)
    return (k, [_skeleton(r, depth - 1, max_arity, leaf_bias) for _ in range(k)])


def random_tree(r: random.Random, label_fn: LabelFn, sort: frozenset, depth: int = 3,
                linear: bool = False, max_arity: int = 2, leaf_bias: float = 0.3,
                var_bias: float = 0.5) -> GraphTerm:
    """Random finite tree of the given sort whose labels come from ``label_fn``."""
    needed = sorted(sort)
    for _ in range(1000):
        k = r.randint(1 if needed else 0, max_arity) if depth > 1 else 0
        shape = (k, [_skeleton(r, depth - 1, max_arity, leaf_bias) for _ in range(k)])
        slots = []
        _collect_slots(shape, (), slots)
        if len(slots) < len(needed):
            continue
        order = list(range(len(slots)))
        r.shuffle(order)
        assign: dict[tuple, Any] = {}
        for i, x in zip(order, needed):
            assign[slots[i]] = Var(x)
        for i in order[len(needed):]:
            if not linear and needed and r.random() < var_bias:
                assign[slots[i]] = Var(r.choice(needed))
            else:
                assign[slots[i]] = None
        return _build_tree(r, shape, assign, label_fn)
    raise RuntimeError("could not generate a tree of the requested sort")


def _collect_slots(shape, path, out):
    if shape is None:
        out.append(path)
        return
    for i, child in enumerate(shape[1]):
        _collect_slots(child, path + (i,), out)


def _build_tree(r, shape, assign, label_fn) -> GraphTerm:
    labels: dict = {}
    succ: dict = {}

    def build(node, path):
        if node is None:
            v = assign[path]
            if isinstance(v, Var):
                labels[path] = v
                return path
            node = (0, [])
        k, kids = node
        labels[path] = label_fn(r, prefix_sort(k))
        succ[path] = {i: build(child, path + (i,)) for i, child in enumerate(kids)}
        return path

    build(shape, ())
    return GraphTerm.build((), labels, succ)


def random_graph(r: random.Random, label_fn: LabelFn, sort: frozenset, depth: int = 3,
                 extra_edges: int = 2, max_arity: int = 2) -> GraphTerm:
    """Random rooted graph: a random tree with some edges redirected (sharing and cycles).

    Each variable labels exactly one vertex.
    """
    base = random_tree(r, label_fn, sort, depth, max_arity=max_arity)
    labels = list(base.labels)
    succ = [dict(out) for out in base.succ]
    for _ in range(extra_edges):
        sources = [v for v in range(len(labels)) if succ[v]]
        if not sources:
            break
        v = r.choice(sources)
        x = r.choice(sorted(succ[v]))
        old = succ[v][x]
        succ[v][x] = r.randrange(len(labels))
        try:
            g = GraphTerm.build(0, dict(enumerate(labels)), dict(enumerate(succ)))
        except ValueError:
            succ[v][x] = old
            continue
        if g.sort != base.sort:
            succ[v][x] = old
    return merge_variables(GraphTerm.build(0, dict(enumerate(labels)), dict(enumerate(succ))))


def random_regular(r: random.Random, label_fn: LabelFn, sort: frozenset, depth: int = 3,
                   cyclic: bool = True, unravelable: bool = True) -> GraphTerm:
    """Canonical regular tree; with ``unravelable`` no variable sits below a cycle."""
    for _ in range(1000):
        g = random_graph(r, label_fn, sort, depth, extra_edges=2 if cyclic else 0)
        t = canonicalize(g)
        if unravelable:
            try:
                un(t)
            except UnsupportedTree:
                continue
        return t
    raise RuntimeError("could not generate an unravelable regular tree")


def closed_cyclic_tree(r: random.Random, label_fn: LabelFn, sort: frozenset,
                       depth: int = 3) -> GraphTerm:
    """Regular tree that is guaranteed to contain a cycle below a variable-free part."""
    for _ in range(1000):
        t = random_regular(r, label_fn, sort, depth, cyclic=True)
        if not t.is_acyclic():
            return t
    raise RuntimeError("could not generate a cyclic tree")


# -- label generators -----------------------------------------------------

def random_poset(r: random.Random, sorts=(0, 1, 2), max_elems: int = 4) -> SortedPoset:
    elems = []
    pairs = []
    for k in sorts:
        n = r.randint(1, max_elems)
        names = [f"e{k}_{i}" for i in range(n)]
        elems += [Symbol(nm, prefix_sort(k)) for nm in names]
        for i in range(n):
            for j in range(i + 1, n):
                if r.random() < 0.35:
                    pairs.append((names[i], names[j]))
    return SortedPoset(elems, pairs)


def random_upset(r: random.Random, poset: SortedPoset, sort: frozenset, max_pick: int = 3) -> UpSet:
    carrier = poset.carrier(sort)
    pick = r.sample(carrier, r.randint(0, min(max_pick, len(carrier))))
    return upclose(pick, poset, sort)


def upset_label(poset: SortedPoset, nonempty: bool = False) -> LabelFn:
    def pick(r: random.Random, sort: frozenset):
        while True:
            up = random_upset(r, poset, sort)
            if up.mins or not nonempty:
                return up

    return pick


def poset_label(poset: SortedPoset) -> LabelFn:
    return lambda r, sort: r.choice(poset.carrier(sort))


def random_upset_of_upsets(r: random.Random, poset: SortedPoset, sort: frozenset,
                           max_pick: int = 3) -> UpSet:
    pool = poset.upsets(sort)
    pick = r.sample(pool, r.randint(0, min(max_pick, len(pool))))
    return upclose(pick, UPSET_ORDER, sort)


def upset_of_upsets_label(poset: SortedPoset) -> LabelFn:
    return lambda r, sort: random_upset_of_upsets(r, poset, sort)


def graph_label(inner: LabelFn, kind: str = "tree", depth: int = 2, linear: bool = False) -> LabelFn:
    """Labels that are themselves random graphs/trees of the vertex sort."""

    def pick(r: random.Random, sort: frozenset):
        if kind == "graph":
            return random_graph(r, inner, sort, depth)
        if kind == "regular":
            return random_regular(r, inner, sort, depth)
        return random_tree(r, inner, sort, depth, linear=linear)

    return pick


def renamed_label(max_arity: int = 3) -> LabelFn:
    """Renamed letters ⟨σ, a⟩ whose image is the requested vertex sort."""
    table = alphabet(max_arity)

    def pick(r: random.Random, sort: frozenset):
        k = len(sort)
        m = 0 if k == 0 else r.randint(max(k, 1), max_arity)
        a = r.choice(table[m])
        targets = sorted(sort)
        values = targets + [r.choice(targets) for _ in range(m - k)] if k else []
        r.shuffle(values)
        return renamed(dict(zip(range(m), values)), a)

    return pick


def random_renamed_set(r: random.Random, sort: frozenset, max_size: int = 3,
                       max_arity: int = 3) -> UpSet:
    lab = renamed_label(max_arity)
    items = {lab(r, sort) for _ in range(r.randint(0, max_size))}
    return upclose(items, DISCRETE, sort)


def renamed_set_label(max_size: int = 2, max_arity: int = 3, nonempty: bool = True) -> LabelFn:
    def pick(r: random.Random, sort: frozenset):
        while True:
            up = random_renamed_set(r, sort, max_size, max_arity)
            if up.mins or not nonempty:
                return up

    return pick


def tree_set_label(max_size: int = 3, depth: int = 2, nonempty: bool = True,
                   cyclic: bool = False) -> LabelFn:
    """Finite sets of trees over the letter alphabet, as label sets."""
    letters = letters_label()

    def pick(r: random.Random, sort: frozenset):
        while True:
            n = r.randint(0 if not nonempty else 1, max_size)
            items = set()
            for _ in range(n):
                if cyclic and r.random() < 0.3:
                    items.add(random_regular(r, letters, sort, depth))
                else:
                    items.add(canonicalize(random_tree(r, letters, sort, depth)))
            if items or not nonempty:
                return upclose(items, DISCRETE, sort)

    return pick


def random_renamed(r: random.Random, payload: Any) -> Renamed:
    return renamed(random_surjection(r, payload.sort), payload)


def random_regular_over(r: random.Random, binary=("a", "b"), nullary=("c",), variables=(),
                        max_vertices: int = 6, leaf_prob: float = 0.35,
                        cyclic_prob: float = 0.6) -> GraphTerm:
    """Canonical regular tree over binary and nullary letters, optionally with variable leaves."""
    n = r.randint(1, max_vertices)
    cyclic = r.random() < cyclic_prob
    labels: dict = {}
    succ: dict = {}
    for v in range(n):
        later = list(range(v + 1, n))
        pool = list(range(n)) if cyclic else later
        if not pool or (v > 0 and r.random() < leaf_prob):
            if variables and v > 0 and r.random() < 0.5:
                labels[v] = Var(r.choice(variables))
            else:
                labels[v] = letter(r.choice(nullary), 0)
            continue
        labels[v] = letter(r.choice(binary), 2)
        succ[v] = {0: r.choice(pool), 1: r.choice(pool)}
    return canonicalize(GraphTerm.build(0, labels, succ))


def random_automaton(r: random.Random, max_states: int = 3, max_priority: int = 3,
                     binary=("a", "b"), nullary=("c",), move_prob: float = 0.25,
                     var_prob: float = 0.3):
    """Small parity automaton over binary and nullary letters with input sort {x0}."""
    states = [f"s{i}" for i in range(r.randint(1, max_states))]
    priority = {q: r.randint(0, max_priority) for q in states}
    moves = []
    for q in states:
        for name in binary:
            for kids in itertools.product(states, repeat=2):
                if r.random() < move_prob:
                    moves.append(Move(q, letter(name, 2), kids))
        for name in nullary:
            if r.random() < 0.5:
                moves.append(Move(q, letter(name), ()))
    var_moves = frozenset((q, 0) for q in states if r.random() < var_prob)
    return ParityAutomaton(tuple(states), states[0], priority, tuple(moves), var_moves, frozenset({0}))
