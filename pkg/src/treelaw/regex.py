"""Regular expressions for regular infinite trees.

An expression of sort ξ denotes a set of trees whose variables lie in ξ.
Substitution ``L ·_x R`` replaces every ``x``-leaf of a tree from ``L``
by its own, independently chosen tree from ``R``.  Iteration stacks blocks
through ``x`` with finitely many blocks on every branch; the ω-power allows
infinitely many and leaves no ``x``-leaf behind.  Other variables of the
blocks pass through unchanged.

Semantics is given by compilation to parity automata.  ``from_automaton``
goes the other way, by induction over the states ordered by descending
priority.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterable, Mapping

from .automata import Move, ParityAutomaton, membership
from .core import SortError, letter, parse_var, render_sort, var_name
from .trees import GraphTerm


class Regex:
    __slots__ = ("_sort",)

    @property
    def sort(self) -> frozenset:
        cached = getattr(self, "_sort", None)
        if cached is None:
            cached = self._compute_sort()
            object.__setattr__(self, "_sort", cached)
        return cached

    def _compute_sort(self) -> frozenset:
        raise NotImplementedError

    def children(self) -> tuple["Regex", ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, eq=False)
class Letter(Regex):
    name: str
    vars: tuple[int, ...]

    def _compute_sort(self):
        return frozenset(self.vars)

    @property
    def symbol(self):
        return letter(self.name, len(self.vars))


@dataclass(frozen=True, eq=False)
class Subst(Regex):
    var: int
    left: Regex
    right: Regex

    def _compute_sort(self):
        ls = self.left.sort
        if self.var not in ls:
            return ls
        return (ls - {self.var}) | self.right.sort

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Relabel(Regex):
    mapping: tuple[tuple[int, int], ...]
    inner: Regex

    def _compute_sort(self):
        m = dict(self.mapping)
        missing = self.inner.sort - set(m)
        if missing:
            raise SortError(f"relabelling misses {render_sort(missing)}")
        return frozenset(m[x] for x in self.inner.sort)

    def children(self):
        return (self.inner,)


@dataclass(frozen=True, eq=False)
class Union(Regex):
    args: tuple[Regex, ...]

    def _compute_sort(self):
        return frozenset().union(*(a.sort for a in self.args))

    def children(self):
        return self.args


@dataclass(frozen=True, eq=False)
class Empty(Regex):
    declared: frozenset = frozenset()

    def _compute_sort(self):
        return frozenset(self.declared)


@dataclass(frozen=True, eq=False)
class Iterate(Regex):
    var: int
    args: tuple[Regex, ...]

    def _compute_sort(self):
        inner = frozenset().union(*(a.sort for a in self.args))
        if self.var not in inner:
            raise SortError(f"iteration variable {var_name(self.var)} is not in {render_sort(inner)}")
        return inner

    def children(self):
        return self.args


@dataclass(frozen=True, eq=False)
class OmegaPower(Regex):
    var: int
    args: tuple[Regex, ...]

    def _compute_sort(self):
        inner = frozenset().union(*(a.sort for a in self.args))
        if self.var not in inner:
            raise SortError(f"ω-power variable {var_name(self.var)} is not in {render_sort(inner)}")
        return inner - {self.var}

    def children(self):
        return self.args


def subst_chain(first: Regex, *steps: tuple[int, Regex]) -> Regex:
    """Left-associated substitutions ``first ·_x1 r1 ·_x2 r2 ...``."""
    out = first
    for x, r in steps:
        out = Subst(x, out, r)
    return out


def walk(r: Regex) -> list[Regex]:
    """Distinct nodes in post-order."""
    seen: set[int] = set()
    order: list[Regex] = []
    stack = [(r, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(node.children()):
            if id(c) not in seen:
                stack.append((c, False))
    return order


def validate(r: Regex) -> frozenset:
    for node in walk(r):
        node.sort
    return r.sort


def dag_size(r: Regex) -> int:
    return len(walk(r))


def tree_size(r: Regex) -> int:
    sizes: dict[int, int] = {}
    for node in walk(r):
        sizes[id(node)] = 1 + sum(sizes[id(c)] for c in node.children())
    return sizes[id(r)]


# -- pretty printing ------------------------------------------------------------

def pretty(r: Regex, limit: int = 20000) -> str:
    out = _pretty(r)
    return out if len(out) <= limit else out[:limit] + "…"


def _pretty(r: Regex) -> str:
    if isinstance(r, Letter):
        return r.name if not r.vars else f"{r.name}({','.join(var_name(x) for x in r.vars)})"
    if isinstance(r, Empty):
        return "∅"
    if isinstance(r, Union):
        return "(" + " + ".join(_pretty(a) for a in r.args) + ")"
    if isinstance(r, Subst):
        return f"({_pretty(r.left)} ·_{var_name(r.var)} {_pretty(r.right)})"
    if isinstance(r, Relabel):
        m = ",".join(f"{var_name(a)}↦{var_name(b)}" for a, b in r.mapping)
        return f"^{{{m}}}{_pretty(r.inner)}"
    if isinstance(r, (Iterate, OmegaPower)):
        mark = "+" if isinstance(r, Iterate) else "ω"
        body = " + ".join(_pretty(a) for a in r.args)
        return f"({body})^{{{mark}{var_name(r.var)}}}"
    raise TypeError(f"not a regex node: {r!r}")


# -- JSON -------------------------------------------------------------------

def to_json(r: Regex, share: bool = True) -> dict:
    """Prefix JSON; with ``share``, nodes used more than once become named definitions."""
    uses: dict[int, int] = {}
    order = walk(r)
    for node in order:
        for c in node.children():
            uses[id(c)] = uses.get(id(c), 0) + 1
    names: dict[int, str] = {}
    defs: dict[str, dict] = {}

    def enc(node: Regex, top: bool = False) -> dict:
        if id(node) in names and not top:
            return {"ref": names[id(node)]}
        if isinstance(node, Letter):
            return {"op": "letter", "name": node.name, "args": [var_name(x) for x in node.vars]}
        if isinstance(node, Empty):
            return {"op": "empty", "sort": [var_name(x) for x in sorted(node.declared)]}
        if isinstance(node, Union):
            return {"op": "union", "args": [enc(a) for a in node.args]}
        if isinstance(node, Subst):
            return {"op": "subst", "var": var_name(node.var), "args": [enc(node.left), enc(node.right)]}
        if isinstance(node, Relabel):
            return {"op": "relabel", "map": {var_name(a): var_name(b) for a, b in node.mapping},
                    "args": [enc(node.inner)]}
        op = "iter" if isinstance(node, Iterate) else "omega"
        return {"op": op, "var": var_name(node.var), "args": [enc(a) for a in node.args]}

    if share:
        for node in order:
            if uses.get(id(node), 0) > 1 and not isinstance(node, (Letter, Empty)):
                body = enc(node, top=True)
                names[id(node)] = f"n{len(names)}"
                defs[names[id(node)]] = body
    body = enc(r)
    return {"defs": defs, "root": body} if defs else body


def from_json(data: Mapping) -> Regex:
    defs_raw = data.get("defs", {}) if "root" in data else {}
    root = data["root"] if "root" in data else data
    built: dict[str, Regex] = {}

    def dec(node: Mapping) -> Regex:
        if "ref" in node:
            name = node["ref"]
            if name not in built:
                if name not in defs_raw:
                    raise ValueError(f"undefined regex reference {name!r}")
                built[name] = dec(defs_raw[name])
            return built[name]
        op = node.get("op")
        args = node.get("args", [])
        if op == "letter":
            return Letter(node["name"], tuple(parse_var(x) for x in args))
        if op == "empty":
            return Empty(frozenset(parse_var(x) for x in node.get("sort", [])))
        if op == "union":
            return Union(tuple(dec(a) for a in args))
        if op == "subst":
            if len(args) != 2:
                raise ValueError("subst takes exactly two arguments")
            return Subst(parse_var(node["var"]), dec(args[0]), dec(args[1]))
        if op == "relabel":
            if len(args) != 1:
                raise ValueError("relabel takes exactly one argument")
            m = tuple(sorted((parse_var(a), parse_var(b)) for a, b in node["map"].items()))
            return Relabel(m, dec(args[0]))
        if op in ("iter", "omega"):
            if not args:
                raise ValueError(f"{op} needs at least one summand")
            cls = Iterate if op == "iter" else OmegaPower
            return cls(parse_var(node["var"]), tuple(dec(a) for a in args))
        raise ValueError(f"unknown regex op {op!r}")

    r = dec(root)
    validate(r)
    return r


# -- compilation ------------------------------------------------------------

class _Builder:
    def __init__(self) -> None:
        self.priority: list[int] = []
        self.moves: list[set] = []
        self.vars: list[set] = []

    def state(self, priority: int = 0) -> int:
        self.priority.append(priority)
        self.moves.append(set())
        self.vars.append(set())
        return len(self.priority) - 1


@dataclass
class _Fragment:
    initial: int
    states: list[int]


def _union_into(b: _Builder, frags: list[_Fragment]) -> _Fragment:
    i = b.state(0)
    states = [i]
    for f in frags:
        b.moves[i] |= b.moves[f.initial]
        b.vars[i] |= b.vars[f.initial]
        states += f.states
    return _Fragment(i, states)


def _compile_into(b: _Builder, r: Regex) -> _Fragment:
    if isinstance(r, Letter):
        i = b.state(0)
        kids = []
        for x in r.vars:
            leaf = b.state(0)
            b.vars[leaf].add(x)
            kids.append(leaf)
        b.moves[i].add((r.symbol, tuple(kids)))
        return _Fragment(i, [i] + kids)
    if isinstance(r, Empty):
        i = b.state(0)
        return _Fragment(i, [i])
    if isinstance(r, Union):
        return _union_into(b, [_compile_into(b, a) for a in r.args])
    if isinstance(r, Relabel):
        f = _compile_into(b, r.inner)
        m = dict(r.mapping)
        for q in f.states:
            b.vars[q] = {m[x] for x in b.vars[q]}
        return f
    if isinstance(r, Subst):
        left = _compile_into(b, r.left)
        if r.var not in r.left.sort:
            return left
        right = _compile_into(b, r.right)
        entry_moves = b.moves[right.initial]
        entry_vars = b.vars[right.initial]
        for q in left.states:
            if r.var in b.vars[q]:
                b.vars[q].discard(r.var)
                b.moves[q] |= entry_moves
                b.vars[q] |= entry_vars
        return _Fragment(left.initial, left.states + right.states)
    if isinstance(r, (Iterate, OmegaPower)):
        body = _union_into(b, [_compile_into(b, a) for a in r.args])
        for q in body.states:
            b.priority[q] += 2
        reentry = b.state(1 if isinstance(r, Iterate) else 0)
        b.moves[reentry] |= b.moves[body.initial]
        states = body.states + [reentry]
        exits = {q for q in states if r.var in b.vars[q]}
        for q in states:
            extra = set()
            for sym, kids in b.moves[q]:
                slots = [j for j, c in enumerate(kids) if c in exits]
                for k in range(1, len(slots) + 1):
                    for chosen in itertools.combinations(slots, k):
                        new = list(kids)
                        for j in chosen:
                            new[j] = reentry
                        extra.add((sym, tuple(new)))
            b.moves[q] |= extra
        if isinstance(r, OmegaPower):
            for q in exits:
                b.vars[q].discard(r.var)
        return _Fragment(body.initial, states)
    raise TypeError(f"not a regex node: {r!r}")


def compile_regex(r: Regex) -> ParityAutomaton:
    """Parity automaton accepting exactly the trees denoted by ``r``, trimmed to reachable states."""
    sort = validate(r)
    b = _Builder()
    f = _compile_into(b, r)
    moves = tuple(Move(q, sym, kids) for q in f.states for sym, kids in sorted(b.moves[q], key=_move_key))
    var_moves = frozenset((q, x) for q in f.states for x in b.vars[q])
    used = frozenset(x for _, x in var_moves)
    aut = ParityAutomaton(tuple(f.states), f.initial, {q: b.priority[q] for q in f.states},
                          moves, var_moves, sort | used).trimmed()
    extra = {x for _, x in aut.var_moves} - sort
    if extra:
        raise SortError(f"compiled automaton uses variables {render_sort(extra)} outside the sort")
    return replace(aut, input_sort=sort)


def _move_key(m):
    sym, kids = m
    return (sym.name, len(kids), kids)


def member(r: Regex, t: GraphTerm, compiled: ParityAutomaton | None = None) -> bool:
    return membership(compiled or compile_regex(r), t)


# -- automaton to regex ---------------------------------------------------------

def _union(parts: list[Regex]) -> Regex:
    parts = [p for p in parts if not isinstance(p, Empty)]
    if not parts:
        return Empty()
    if len(parts) == 1:
        return parts[0]
    return Union(tuple(parts))


def from_automaton(aut: ParityAutomaton) -> Regex:
    """A regular expression denoting the language of ``aut``.

    ``R(k, p, S)`` denotes the trees carrying a partial run with root state
    ``p``, inner states among the first ``k`` states in descending priority
    order, and each ``z``-leaf in a state of ``S[z]``.  Level ``k`` cuts the
    tree at the topmost inner occurrences of the next state, marking the cut
    points with a fresh variable ``y_k`` and substituting trees that revisit
    that state finitely often (odd priority) or arbitrarily often (even).
    """
    order = sorted(aut.states, key=lambda q: -aut.priority[q])
    fresh_base = max(aut.input_sort, default=-1) + 1
    memo: dict = {}

    def fresh(k: int) -> int:
        return fresh_base + k

    def base(p, S: frozenset) -> Regex:
        allowed = dict(S)
        parts = []
        for m in aut.moves_from(p):
            options = [sorted(z for z, qs in allowed.items() if c in qs) for c in m.children]
            for zs in itertools.product(*options):
                parts.append(Letter(m.letter.name, tuple(zs)))
        return _union(parts)

    def with_cut(S: frozenset, y: int, q) -> frozenset:
        return S | {(y, frozenset({q}))}

    def R(k: int, p, S: frozenset) -> Regex:
        key = ("R", k, p, S)
        if key in memo:
            return memo[key]
        if k == 0:
            out = base(p, S)
        else:
            j = k - 1
            q, y = order[j], fresh(j)
            parts = [R(j, p, S)]
            top = R(j, p, with_cut(S, y, q))
            if y in top.sort:
                below = T_hat(j, S) if aut.priority[q] % 2 == 0 else T(j, S)
                if not isinstance(below, Empty):
                    parts.append(Subst(y, top, below))
            out = _union(parts)
        memo[key] = out
        return out

    def T(j: int, S: frozenset) -> Regex:
        key = ("T", j, S)
        if key in memo:
            return memo[key]
        q, y = order[j], fresh(j)
        closed = R(j, q, S)
        block = R(j, q, with_cut(S, y, q))
        parts = [closed]
        if y in block.sort and not isinstance(closed, Empty):
            parts.append(Subst(y, Iterate(y, (block,)), closed))
        memo[key] = out = _union(parts)
        return out

    def T_hat(j: int, S: frozenset) -> Regex:
        key = ("That", j, S)
        if key in memo:
            return memo[key]
        q, y = order[j], fresh(j)
        block = R(j, q, with_cut(S, y, q))
        parts = [T(j, S)]
        if y in block.sort:
            parts.append(OmegaPower(y, (block,)))
        memo[key] = out = _union(parts)
        return out

    leaves = frozenset((z, frozenset(q for q in aut.states if aut.accepts_var(q, z)))
                       for z in sorted(aut.input_sort))
    leaves = frozenset((z, qs) for z, qs in leaves if qs)
    out = R(len(order), aut.initial, leaves)
    if isinstance(out, Empty):
        return Empty(frozenset(aut.input_sort))
    return out
