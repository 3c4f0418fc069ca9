"""Parity tree automata on regular trees.

Transitions come in two kinds: letter moves ``(q, a, (q_0, ..., q_{n-1}))``
whose children follow the variable order of the letter's sort, and
variable moves ``(q, z)`` that accept a leaf labelled ``z`` in state ``q``.
Acceptance uses min-parity: the least priority seen infinitely often on
each branch must be even.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping

from .core import SortError, Symbol, render_sort, var_name
from .parity import AUTOMATON, PATHFINDER, GameBuilder, solve
from .trees import GraphTerm, Var, canonicalize


@dataclass(frozen=True)
class Move:
    state: Hashable
    letter: Symbol
    children: tuple


@dataclass(frozen=True)
class ParityAutomaton:
    states: tuple
    initial: Hashable
    priority: Mapping[Hashable, int]
    moves: tuple[Move, ...]
    var_moves: frozenset  # of (state, variable index)
    input_sort: frozenset
    _by_state: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        if self.initial not in known:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        for q in self.states:
            p = self.priority.get(q)
            if not isinstance(p, int) or p < 0:
                raise ValueError(f"state {q!r} needs a non-negative integer priority")
        by_state: dict = {q: [] for q in self.states}
        for m in self.moves:
            if m.state not in known or not set(m.children) <= known:
                raise ValueError(f"move {m} mentions an unknown state")
            if len(m.children) != len(m.letter.sort):
                raise SortError(f"letter {m.letter.name} of sort {render_sort(m.letter.sort)} "
                                f"needs {len(m.letter.sort)} child states, got {len(m.children)}")
            by_state[m.state].append(m)
        for q, z in self.var_moves:
            if q not in known:
                raise ValueError(f"variable move from unknown state {q!r}")
            if z not in self.input_sort:
                raise SortError(f"variable {var_name(z)} is outside the input sort")
        object.__setattr__(self, "_by_state", by_state)

    def moves_from(self, q: Hashable) -> list[Move]:
        return self._by_state[q]

    def accepts_var(self, q: Hashable, z: int) -> bool:
        return (q, z) in self.var_moves

    @property
    def priorities(self) -> set[int]:
        return set(self.priority[q] for q in self.states)

    @property
    def alphabet(self) -> set[Symbol]:
        return {m.letter for m in self.moves}

    def size(self) -> dict[str, int]:
        return {"states": len(self.states), "letterMoves": len(self.moves),
                "varMoves": len(self.var_moves)}

    def trimmed(self) -> "ParityAutomaton":
        """Restriction to the states reachable from the initial state, renamed q0, q1, ..."""
        order = [self.initial]
        seen = {self.initial}
        for q in order:
            for m in self.moves_from(q):
                for c in m.children:
                    if c not in seen:
                        seen.add(c)
                        order.append(c)
        name = {q: f"q{i}" for i, q in enumerate(order)}
        return ParityAutomaton(
            tuple(name[q] for q in order), name[self.initial],
            {name[q]: self.priority[q] for q in order},
            tuple(Move(name[m.state], m.letter, tuple(name[c] for c in m.children))
                  for m in self.moves if m.state in seen),
            frozenset((name[q], z) for q, z in self.var_moves if q in seen),
            self.input_sort)


def _neutral(aut: ParityAutomaton) -> int:
    return max(aut.priorities, default=0)


def membership(aut: ParityAutomaton, t: GraphTerm) -> bool:
    """Whether the unravelling of ``t`` has an accepting run."""
    b = GameBuilder()
    win, _ = b.node("win", AUTOMATON, 0)
    b.edge(win, win)
    neutral = _neutral(aut)
    root, _ = b.node(("s", 0, aut.initial), AUTOMATON, aut.priority[aut.initial])
    stack = [(0, aut.initial, root)]
    while stack:
        v, q, node = stack.pop()
        lab = t.labels[v]
        if isinstance(lab, Var):
            if aut.accepts_var(q, lab.index):
                b.edge(node, win)
            continue
        kids = [u for _, u in t.succ[v]]
        for m in aut.moves_from(q):
            if m.letter != lab:
                continue
            choice, fresh = b.node(("c", v, m.children), PATHFINDER, neutral)
            b.edge(node, choice)
            if not fresh:
                continue
            for u, qc in zip(kids, m.children):
                nxt, new = b.node(("s", u, qc), AUTOMATON, aut.priority[qc])
                b.edge(choice, nxt)
                if new:
                    stack.append((u, qc, nxt))
    return solve(b.build()).winner[root] == AUTOMATON


def _emptiness_game(aut: ParityAutomaton):
    b = GameBuilder()
    win, _ = b.node("win", AUTOMATON, 0)
    b.edge(win, win)
    neutral = _neutral(aut)
    root, _ = b.node("root", AUTOMATON, aut.priority[aut.initial])
    for i, m in enumerate(aut.moves_from(aut.initial)):
        b.edge(root, _move_node(aut, b, m, win, neutral))
    return b, root, win


def _move_node(aut, b: GameBuilder, m: Move, win: int, neutral: int) -> int:
    node, fresh = b.node(("m", m), PATHFINDER, neutral)
    if not fresh:
        return node
    if not m.children:
        b.edge(node, win)
    for qc in m.children:
        b.edge(node, _state_node(aut, b, qc, win, neutral))
    return node


def _state_node(aut, b: GameBuilder, q, win: int, neutral: int) -> int:
    node, fresh = b.node(("q", q), AUTOMATON, aut.priority[q])
    if not fresh:
        return node
    if any(aut.accepts_var(q, z) for z in aut.input_sort):
        b.edge(node, win)
    for m in aut.moves_from(q):
        b.edge(node, _move_node(aut, b, m, win, neutral))
    return node


def find_witness(aut: ParityAutomaton) -> GraphTerm | None:
    """An accepted regular tree built from a winning strategy, or None when the language is empty."""
    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        b, root, win = _emptiness_game(aut)
    finally:
        sys.setrecursionlimit(limit)
    game = b.build()
    sol = solve(game)
    if sol.winner[root] != AUTOMATON:
        return None
    labels: dict = {}
    succ: dict = {}
    todo = [root]
    while todo:
        node = todo.pop()
        if node in labels:
            continue
        target = sol.strategy[node]
        name = game.names[node]
        if target == win:
            q = name[1]
            labels[node] = Var(min(z for z in aut.input_sort if aut.accepts_var(q, z)))
            continue
        m: Move = game.names[target][1]
        labels[node] = m.letter
        kids = [b.index[("q", qc)] for qc in m.children]
        succ[node] = dict(zip(sorted(m.letter.sort), kids))
        todo.extend(kids)
    return canonicalize(GraphTerm.build(root, labels, succ))


def is_empty(aut: ParityAutomaton) -> bool:
    return find_witness(aut) is None


# -- profiles -------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    root: Hashable
    leaves: tuple  # sorted ((z, frozenset of (priority, state)), ...)

    @classmethod
    def of(cls, root: Hashable, leaves: Mapping[int, Iterable[tuple[int, Hashable]]]) -> "Profile":
        return cls(root, tuple(sorted((z, frozenset(u)) for z, u in leaves.items() if u)))

    def pairs(self, z: int) -> frozenset:
        return dict(self.leaves).get(z, frozenset())

    @property
    def sort(self) -> frozenset:
        return frozenset(z for z, _ in self.leaves)


def bounded_by(a: Profile, b: Profile) -> bool:
    """``a`` has the same root state as ``b`` and each leaf set of ``a`` is inside that of ``b``."""
    return a.root == b.root and all(u <= b.pairs(z) for z, u in a.leaves)


def profile_of(aut: ParityAutomaton, t: GraphTerm, run: Mapping[int, Hashable]) -> Profile:
    """Profile of a partial run on a finite tree, given as a state per vertex."""
    if not t.is_acyclic():
        raise ValueError("profiles are computed on finite trees")
    for v, lab in enumerate(t.labels):
        if v not in run:
            raise ValueError(f"run has no state for vertex {v}")
        if isinstance(lab, Var):
            continue
        kids = tuple(run[u] for _, u in t.succ[v])
        if Move(run[v], lab, kids) not in aut.moves_from(run[v]):
            raise ValueError(f"run is inconsistent at vertex {v}: no move {run[v]} {lab.name} {kids}")
    leaves: dict[int, set] = {}
    stack = [(0, aut.priority[run[0]])]
    while stack:
        v, low = stack.pop()
        lab = t.labels[v]
        if isinstance(lab, Var):
            leaves.setdefault(lab.index, set()).add((low, run[v]))
            continue
        for _, u in t.succ[v]:
            stack.append((u, min(low, aut.priority[run[u]])))
    return Profile.of(run[0], leaves)
