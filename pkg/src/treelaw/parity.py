"""Parity games with the min-parity, liminf-even convention.

Player 0 (the Automaton) wins a play when the least priority seen
infinitely often is even; player 1 (the Pathfinder) wins otherwise.
Solving uses the recursive attractor algorithm and returns positional
strategies for both players.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

AUTOMATON, PATHFINDER = 0, 1


@dataclass
class ParityGame:
    owner: list[int]
    priority: list[int]
    edges: list[list[int]]
    names: list[Hashable] = field(default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.owner)
        if len(self.priority) != n or len(self.edges) != n:
            raise ValueError("owner, priority and edges must have equal length")
        for out in self.edges:
            for u in out:
                if not 0 <= u < n:
                    raise ValueError(f"edge to unknown node {u}")

    def __len__(self) -> int:
        return len(self.owner)

    def normalized(self) -> tuple["ParityGame", int, int]:
        """Copy in which every dead end moves to a sink won by the other player.

        Returns the game and the indices of the sinks won by player 0 and 1.
        """
        n = len(self.owner)
        win0, win1 = n, n + 1
        edges = [list(out) if out else [win1 if self.owner[v] == AUTOMATON else win0]
                 for v, out in enumerate(self.edges)]
        edges += [[win0], [win1]]
        names = list(self.names) + ["⊤", "⊥"] if self.names else []
        game = ParityGame(self.owner + [AUTOMATON, PATHFINDER], self.priority + [0, 1], edges, names)
        return game, win0, win1


@dataclass
class Solution:
    winner: list[int]
    strategy: dict[int, int]  # positional move for the owner, on the owner's winning region

    def region(self, player: int) -> set[int]:
        return {v for v, w in enumerate(self.winner) if w == player}


class GameBuilder:
    """Incremental construction keyed by hashable node names."""

    def __init__(self) -> None:
        self.index: dict[Hashable, int] = {}
        self.owner: list[int] = []
        self.priority: list[int] = []
        self.edges: list[list[int]] = []
        self.names: list[Hashable] = []

    def node(self, name: Hashable, owner: int, priority: int) -> tuple[int, bool]:
        if name in self.index:
            return self.index[name], False
        i = len(self.owner)
        self.index[name] = i
        self.owner.append(owner)
        self.priority.append(priority)
        self.edges.append([])
        self.names.append(name)
        return i, True

    def edge(self, a: int, b: int) -> None:
        self.edges[a].append(b)

    def build(self) -> ParityGame:
        return ParityGame(self.owner, self.priority, self.edges, self.names)


def _predecessors(game: ParityGame) -> list[list[int]]:
    preds: list[list[int]] = [[] for _ in game.owner]
    for v, out in enumerate(game.edges):
        for u in out:
            preds[u].append(v)
    return preds


def attractor(game: ParityGame, preds, alive: set[int], target: set[int],
              player: int) -> tuple[set[int], dict[int, int]]:
    attr = set(target)
    strat: dict[int, int] = {}
    remaining: dict[int, int] = {}
    queue = list(target)
    while queue:
        u = queue.pop()
        for p in preds[u]:
            if p not in alive or p in attr:
                continue
            if game.owner[p] == player:
                attr.add(p)
                strat[p] = u
                queue.append(p)
            else:
                if p not in remaining:
                    remaining[p] = sum(1 for w in game.edges[p] if w in alive)
                remaining[p] -= 1
                if remaining[p] == 0:
                    attr.add(p)
                    queue.append(p)
    return attr, strat


def _zielonka(game: ParityGame, preds, alive: set[int]):
    if not alive:
        return (set(), set()), ({}, {})
    p = min(game.priority[v] for v in alive)
    i = p % 2
    top = {v for v in alive if game.priority[v] == p}
    attr, attr_strat = attractor(game, preds, alive, top, i)
    (w_sub, strat_sub) = _zielonka(game, preds, alive - attr)
    if not w_sub[1 - i]:
        wins = [set(), set()]
        wins[i] = set(alive)
        strats: list[dict] = [{}, {}]
        strats[i] = dict(strat_sub[i])
        strats[i].update(attr_strat)
        for v in top:
            if game.owner[v] == i:
                strats[i][v] = next(u for u in game.edges[v] if u in alive)
        return (wins[0], wins[1]), (strats[0], strats[1])
    back, back_strat = attractor(game, preds, alive, w_sub[1 - i], 1 - i)
    (w_rest, strat_rest) = _zielonka(game, preds, alive - back)
    wins = [set(), set()]
    strats = [{}, {}]
    wins[1 - i] = w_rest[1 - i] | back
    strats[1 - i] = dict(strat_rest[1 - i])
    strats[1 - i].update({v: u for v, u in strat_sub[1 - i].items() if v in w_sub[1 - i]})
    strats[1 - i].update(back_strat)
    wins[i] = w_rest[i]
    strats[i] = dict(strat_rest[i])
    return (wins[0], wins[1]), (strats[0], strats[1])


def solve(game: ParityGame) -> Solution:
    """Winning regions and positional strategies; dead ends lose for their owner."""
    full, _, _ = game.normalized()
    preds = _predecessors(full)
    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10000))
    try:
        (w0, w1), (s0, s1) = _zielonka(full, preds, set(range(len(full))))
    finally:
        sys.setrecursionlimit(limit)
    n = len(game)
    winner = [AUTOMATON if v in w0 else PATHFINDER for v in range(n)]
    strategy = {}
    for v in range(n):
        s = s0 if winner[v] == AUTOMATON else s1
        if game.owner[v] == winner[v] and v in s and s[v] < n:
            strategy[v] = s[v]
    return Solution(winner, strategy)
