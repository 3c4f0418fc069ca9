"""Inside-out and outside-in substitution, and the io matching solver.

A substitution maps each substitution letter (a letter of the variable
alphabet, with a sort) to a finite set of trees of that sort.  Inside-out
application picks one replacement per vertex of the source tree and only
then flattens, so copies made by a non-linear replacement agree.
Outside-in application lets every copy choose on its own.

Target languages of finite trees are given by a deterministic bottom-up
algebra.  A tree with free variables evaluates to the function it induces
on states, which is what the solver compares.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .core import DISCRETE, SortError, Symbol, UpSet, render, sort_of, sorted_values, upclose, upset_image
from .distlaw import dist
from .selection import product_hat
from .trees import GraphTerm, Var, canonicalize, flat_times, gmap, sing, unravel

Substitution = dict  # Symbol -> UpSet of trees


def make_substitution(values: Mapping[Symbol, Iterable[GraphTerm]]) -> Substitution:
    out = {}
    for x, trees in values.items():
        trees = [canonicalize(t) for t in trees]
        for t in trees:
            if t.sort != x.sort:
                raise SortError(f"{x.name} has sort {sorted(x.sort)} but {t} has sort {sorted(t.sort)}")
        out[x] = upclose(trees, DISCRETE, x.sort)
    return out


def _lookup(sub: Substitution, x: Any) -> UpSet:
    try:
        return sub[x]
    except KeyError as exc:
        raise KeyError(f"substitution has no value for {render(x)}") from exc


def apply_inside_out(sub: Substitution, t: GraphTerm) -> UpSet:
    outer = gmap(lambda x: _lookup(sub, x), unravel(t))
    return upset_image(flat_times, dist(outer), DISCRETE)


def apply_outside_in(sub: Substitution, t: GraphTerm) -> UpSet:
    return product_hat(canonicalize(gmap(lambda x: _lookup(sub, x), t)))


def substitution_leq(a: Substitution, b: Substitution) -> bool:
    return all(a[x].issubset(b.get(x, UpSet(frozenset(), x.sort))) for x in a)


# -- finite algebras --------------------------------------------------------

Value = tuple  # (variables tuple, results tuple over all state assignments)


@dataclass
class FinitaryAlgebra:
    """Deterministic bottom-up algebra on finite trees.

    ``table`` maps (letter name, child states in sort order) to a state.
    Missing entries fall back to ``default`` when one is given.
    """

    states: tuple
    table: dict
    accepting: frozenset
    alphabet: dict = field(default_factory=dict)
    default: str | None = None

    def __post_init__(self) -> None:
        self.states = tuple(self.states)
        known = set(self.states)
        if not self.accepting <= known:
            raise ValueError("accepting states must be states")
        for (name, args), q in self.table.items():
            if q not in known or not set(args) <= known:
                raise ValueError(f"table entry for {name} mentions an unknown state")
        if self.default is not None and self.default not in known:
            raise ValueError("default must be a state")

    def step(self, name: str, args: tuple) -> str:
        try:
            return self.table[(name, args)]
        except KeyError:
            if self.default is None:
                raise KeyError(f"no table entry for {name}{args}") from None
            return self.default

    def run(self, t: GraphTerm, env: Mapping[int, str]) -> str:
        memo: dict[int, str] = {}

        def go(v: int) -> str:
            if v not in memo:
                lab = t.labels[v]
                if isinstance(lab, Var):
                    memo[v] = env[lab.index]
                else:
                    memo[v] = self.step(lab.name, tuple(go(u) for _, u in t.succ[v]))
            return memo[v]

        if not t.is_acyclic():
            raise ValueError("algebra evaluation needs a finite tree")
        return go(0)

    def value(self, t: GraphTerm) -> Value:
        xs = tuple(sorted(t.sort))
        results = tuple(self.run(t, dict(zip(xs, qs)))
                        for qs in itertools.product(self.states, repeat=len(xs)))
        return (xs, results)

    def apply(self, value: Value, args: tuple) -> str:
        xs, results = value
        index = 0
        n = len(self.states)
        pos = {q: i for i, q in enumerate(self.states)}
        for q in args:
            index = index * n + pos[q]
        return results[index]

    def accepts(self, t: GraphTerm) -> bool:
        return self.run(t, {}) in self.accepting


def saturate(rho: Substitution, alg: FinitaryAlgebra) -> dict[Symbol, frozenset]:
    """Symbolic saturation: the algebra values reached by each substitution entry."""
    return {x: frozenset(alg.value(t) for t in trees.mins) for x, trees in rho.items()}


def restrict(values: frozenset, trees: Iterable[GraphTerm], alg: FinitaryAlgebra) -> frozenset:
    """The trees among ``trees`` whose value lies in ``values``."""
    return frozenset(t for t in trees if alg.value(t) in values)


def io_states(t: GraphTerm, values: Mapping[Symbol, frozenset], alg: FinitaryAlgebra) -> set[str]:
    """States reachable by inside-out substitution of value sets into a closed tree."""
    memo: dict[int, set] = {}

    def go(v: int) -> set:
        if v in memo:
            return memo[v]
        lab = t.labels[v]
        if isinstance(lab, Var):
            raise ValueError("io_states expects a closed tree")
        kids = [go(u) for _, u in t.succ[v]]
        out = set()
        for f in values.get(lab, frozenset()):
            for args in itertools.product(*kids):
                out.add(alg.apply(f, args))
        memo[v] = out
        return out

    return go(0)


def io_contained(L: Iterable[GraphTerm], values: Mapping[Symbol, frozenset],
                 alg: FinitaryAlgebra) -> bool:
    return all(io_states(t, values, alg) <= alg.accepting for t in L)


def solve_matching(L: Iterable[GraphTerm], alg: FinitaryAlgebra, sigma: Substitution,
                   tau: Substitution) -> list[Substitution]:
    """All maximal substitutions between ``sigma`` and ``tau`` whose io image of ``L`` is accepted.

    Candidates are saturations intersected with ``tau``: for each letter a set
    of algebra values is chosen and ``tau`` is filtered by it.  Only values
    actually realised by ``tau`` can change the filtered set, so the choice
    ranges over subsets of those.
    """
    L = [unravel(t) for t in L]
    letters = sorted(tau, key=lambda x: x.name)
    for x in sigma:
        if not sigma[x].issubset(tau.get(x, UpSet(frozenset(), x.sort))):
            raise ValueError(f"lower bound exceeds upper bound at {x.name}")
    realised = {x: sorted({alg.value(t) for t in tau[x].mins}) for x in letters}
    by_value = {x: {v: frozenset(t for t in tau[x].mins if alg.value(t) == v) for v in realised[x]}
                for x in letters}
    found: dict[tuple, Substitution] = {}
    for pick in itertools.product(*(_subsets(realised[x]) for x in letters)):
        chosen = dict(zip(letters, pick))
        candidate = {x: frozenset().union(*(by_value[x][v] for v in chosen[x])) for x in letters}
        if any(not sigma[x].mins <= candidate[x] for x in sigma):
            continue
        if not io_contained(L, {x: frozenset(chosen[x]) for x in letters}, alg):
            continue
        key = tuple(sorted((x.name, tuple(sorted(map(str, candidate[x])))) for x in letters))
        found[key] = {x: upclose(candidate[x], DISCRETE, x.sort) for x in letters}
    sols = list(found.values())
    maximal = [s for s in sols
               if not any(o is not s and substitution_leq(s, o) and o != s for o in sols)]
    return sorted(maximal, key=substitution_key)


def _subsets(items: list) -> Iterable[tuple]:
    return itertools.chain.from_iterable(itertools.combinations(items, k)
                                         for k in range(len(items) + 1))


def substitution_key(sub: Substitution) -> tuple:
    return tuple(sorted((x.name, tuple(str(t) for t in sorted_values(sub[x].mins))) for x in sub))


def render_substitution(sub: Substitution) -> dict[str, list[str]]:
    return {x.name: [str(t) for t in sorted_values(sub[x].mins)] for x in sorted(sub, key=lambda y: y.name)}


def morphism_sides(apply, sub: Substitution, t: GraphTerm) -> tuple[UpSet, UpSet]:
    """Applying ``sub`` after flattening versus applying it inside and combining with the product."""
    left = apply(sub, flat_times(t))
    right = product_hat(canonicalize(gmap(lambda s: apply(sub, s), t)))
    return left, right


def split_letters(t: GraphTerm) -> GraphTerm:
    """The tree of single-letter trees whose flattening is ``t``."""
    return canonicalize(gmap(lambda a: canonicalize(sing(a)), t))
