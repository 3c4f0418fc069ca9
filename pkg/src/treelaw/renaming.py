"""Variable renamings and the unravelling operations.

A ``Renamed`` value pairs a surjection of sorts with a payload whose sort is
the surjection's domain.  ``un`` splits a regular tree into such a pair with
a canonical payload: every variable occurrence gets its own name, numbered in
lexicographic order of the occurrence's root path, and the
surjection remembers the original names.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .core import SortError, render, sort_of, var_name
from .trees import GraphTerm, Var, canonicalize, flat_times, gmap, relabel_vars, sing


class UnsupportedTree(ValueError):
    """A variable is reachable from a cycle, so infinitely many names would be needed."""


@dataclass(frozen=True)
class Renamed:
    sigma: tuple  # sorted (source, target) pairs
    payload: Any

    def __post_init__(self) -> None:
        dom = frozenset(s for s, _ in self.sigma)
        if len(dom) != len(self.sigma):
            raise ValueError("renaming is not a function")
        if dom != sort_of(self.payload):
            raise SortError(
                f"renaming domain {sorted(dom)} differs from payload sort {sorted(sort_of(self.payload))}")

    @property
    def sort(self) -> frozenset:
        return frozenset(t for _, t in self.sigma)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.sigma)

    def is_identity(self) -> bool:
        return all(s == t for s, t in self.sigma)

    def __str__(self) -> str:
        sig = ",".join(f"{var_name(s)}↦{var_name(t)}" for s, t in self.sigma)
        return f"⟨{{{sig}}},{render(self.payload)}⟩"


def renamed(mapping: Mapping[int, int], payload: Any) -> Renamed:
    return Renamed(tuple(sorted(mapping.items())), payload)


def identity(sort) -> dict[int, int]:
    return {x: x for x in sort}


def inj(a: Any) -> Renamed:
    return renamed(identity(sort_of(a)), a)


def comp(r: Renamed) -> Renamed:
    inner = r.payload
    if not isinstance(inner, Renamed):
        raise TypeError("comp expects a renaming of a renaming")
    outer = r.mapping
    return renamed({s: outer[t] for s, t in inner.sigma}, inner.payload)


def xmap(f: Callable[[Any], Any], r: Renamed) -> Renamed:
    return Renamed(r.sigma, f(r.payload))


class RenamedOrder:
    """Compare payloads only when the renamings agree."""

    def __init__(self, base):
        self.base = base

    def leq(self, a: Renamed, b: Renamed) -> bool:
        return a.sigma == b.sigma and self.base.leq(a.payload, b.payload)


def _var_reaching(g: GraphTerm) -> set[int]:
    preds: list[list[int]] = [[] for _ in g.labels]
    for v, out in enumerate(g.succ):
        for _, u in out:
            preds[u].append(v)
    todo = [v for v, l in enumerate(g.labels) if isinstance(l, Var)]
    seen = set(todo)
    while todo:
        v = todo.pop()
        for p in preds[v]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def position_key(path: tuple) -> tuple:
    """Order on variable positions: lexicographic on edge-label paths.

    Left-to-right order survives substitution into variable positions, which
    keeps flattened canonical trees canonical; positions are finite in number
    so this is a well-order on them.
    """
    return path


def un(t: GraphTerm) -> Renamed:
    """Canonical renaming split of a regular tree."""
    reach = _var_reaching(t)
    sub = {v: [u for _, u in t.succ[v] if u in reach] for v in reach}
    state: dict[int, int] = {}
    for start in reach:
        if state.get(start):
            continue
        state[start] = 1
        stack = [(start, iter(sub[start]))]
        while stack:
            v, it = stack[-1]
            u = next(it, None)
            if u is None:
                state[v] = 2
                stack.pop()
            elif state.get(u) == 1:
                raise UnsupportedTree("a variable is reachable from a cycle")
            elif not state.get(u):
                state[u] = 1
                stack.append((u, iter(sub[u])))

    labels: dict = {}
    succ: dict = {}
    leaves: list[tuple[tuple, int]] = []

    def shared(v: int):
        key = ("s", v)
        if key not in labels:
            labels[key] = t.labels[v]
            succ[key] = {}
            succ[key] = {x: shared(u) for x, u in t.succ[v]}
        return key

    def walk(v: int, path: tuple):
        lab = t.labels[v]
        if isinstance(lab, Var):
            leaves.append((path, lab.index))
            return ("p", path)
        labels[("p", path)] = lab
        succ[("p", path)] = {
            x: (walk(u, path + (x,)) if u in reach else shared(u)) for x, u in t.succ[v]}
        return ("p", path)

    root = walk(0, ()) if 0 in reach else shared(0)
    leaves.sort(key=lambda item: position_key(item[0]))
    sigma = {}
    for i, (path, orig) in enumerate(leaves):
        labels[("p", path)] = Var(i)
        sigma[i] = orig
    return renamed(sigma, canonicalize(GraphTerm.build(root, labels, succ)))


def is_canonical(t: GraphTerm) -> bool:
    try:
        r = un(t)
    except UnsupportedTree:
        return False
    return r.is_identity() and r.payload == t


def re(r: Renamed) -> GraphTerm:
    """Rename the payload's variables along the surjection."""
    return canonicalize(relabel_vars(r.payload, r.mapping))


def re0(r: Renamed) -> GraphTerm:
    if not is_canonical(r.payload):
        raise ValueError(f"payload {r.payload} is not canonical")
    return re(r)


def un_plus(t: GraphTerm) -> Renamed:
    """Strong unravelling of a tree whose labels are renamed elements."""
    return un(flat_times(gmap(lambda r: re0(xmap(sing, r)), t)))


def dun(t: GraphTerm) -> Renamed:
    """Deep unravelling of a tree whose labels are trees."""
    return un_plus(gmap(un, t))
