"""Slow, obviously-correct reference implementations used by the tests."""
from __future__ import annotations

import itertools


# -- parity games ---------------------------------------------------------------

def naive_parity_winners(owner, priority, edges):
    """Winner of every node by enumerating all positional strategies of player 0.

    Player 1 beats a fixed player-0 strategy from ``v`` iff they can reach a
    dead end of player 0, or a node ``u`` of odd priority ``p`` lying on a
    cycle through nodes of priority at least ``p``.  Positional determinacy
    makes this exact.
    """
    n = len(owner)
    zero_nodes = [v for v in range(n) if owner[v] == 0 and edges[v]]
    choices = [edges[v] for v in zero_nodes]
    won = [False] * n
    for pick in itertools.product(*choices):
        strat = dict(zip(zero_nodes, pick))
        succ = [[strat[v]] if v in strat else list(edges[v]) for v in range(n)]
        bad = set(v for v in range(n) if owner[v] == 0 and not edges[v])
        for u in range(n):
            p = priority[u]
            if p % 2 == 1 and _on_cycle(u, succ, lambda w: priority[w] >= p):
                bad.add(u)
        for v in range(n):
            if not won[v] and not (_reach(v, succ) & bad):
                won[v] = True
    return [0 if w else 1 for w in won]


def _reach(v, succ, allowed=lambda w: True):
    seen = {v}
    stack = [v]
    while stack:
        w = stack.pop()
        for u in succ[w]:
            if u not in seen and allowed(u):
                seen.add(u)
                stack.append(u)
    return seen


def _on_cycle(u, succ, allowed):
    stack = [w for w in succ[u] if allowed(w)]
    seen = set(stack)
    while stack:
        w = stack.pop()
        if w == u:
            return True
        for x in succ[w]:
            if x not in seen and allowed(x):
                seen.add(x)
                stack.append(x)
    return False


# -- finite terms as nested tuples -------------------------------------------------
#
# A term is ("x", k) for a variable leaf or (name, (child, ...)) for a letter.

def parse(text: str):
    pos = 0

    def term():
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        head = text[start:pos].strip()
        if head.startswith("x") and head[1:].isdigit():
            return ("x", int(head[1:]))
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                kids.append(term())
                pos += 1
                if text[pos - 1] == ")":
                    break
        return (head, tuple(kids))

    out = term()
    assert pos == len(text), text
    return out


def show(t) -> str:
    if t[0] == "x":
        return f"x{t[1]}"
    name, kids = t
    return name if not kids else f"{name}({','.join(show(k) for k in kids)})"


def plug(t, choose):
    """Replace each variable leaf ``k`` by ``choose(k)``, independently per leaf."""
    if t[0] == "x":
        return choose(t[1])
    return (t[0], tuple(plug(k, choose) for k in t[1]))


def variables(t) -> set[int]:
    if t[0] == "x":
        return {t[1]}
    return set().union(*(variables(k) for k in t[1])) if t[1] else set()


def all_plugs(t, images: dict[int, set]) -> set:
    """Every way of replacing each variable leaf independently by a tree from ``images``."""
    if t[0] == "x":
        return set(images[t[1]]) if t[1] in images else {t}
    options = [all_plugs(k, images) for k in t[1]]
    return {(t[0], combo) for combo in itertools.product(*options)}


# -- inside-out substitution and matching -------------------------------------------

def io_image(t, rho: dict[str, list]) -> set:
    """Inside-out image: one replacement per position, then copies agree."""
    name, kids = t
    kid_images = [io_image(k, rho) for k in kids]
    out = set()
    for s in rho.get(name, []):
        for combo in itertools.product(*kid_images):
            out.add(plug(s, lambda k: combo[k]))
    return out


def evaluate(t, table: dict, default):
    name, kids = t
    args = tuple(evaluate(k, table, default) for k in kids)
    return table.get((name, args), default)


def brute_force_matching(language: list[str], algebra: dict, sigma: dict, tau: dict) -> list[dict]:
    """All maximal rho with sigma <= rho <= tau whose io image of the language is accepted."""
    table = {(name, tuple(args)): q for name, args, q in algebra["table"]}
    default = algebra.get("default")
    accepting = set(algebra["accepting"])
    letters = sorted(tau)
    pools = {x: [parse(s) for s in tau[x]] for x in letters}
    lower = {x: {parse(s) for s in sigma.get(x, [])} for x in letters}
    terms = [parse(s) for s in language]
    feasible = []
    subsets = [[frozenset(c) for k in range(len(pools[x]) + 1) for c in itertools.combinations(pools[x], k)
                if lower[x] <= set(c)] for x in letters]
    for pick in itertools.product(*subsets):
        rho = dict(zip(letters, pick))
        if all(evaluate(u, table, default) in accepting
               for t in terms for u in io_image(t, {x: list(v) for x, v in rho.items()})):
            feasible.append(rho)
    maximal = [a for a in feasible
               if not any(b != a and all(a[x] <= b[x] for x in letters) for b in feasible)]
    return [{x: frozenset(show(t) for t in rho[x]) for x in letters} for rho in maximal]


# -- finite regular-expression languages -------------------------------------------------

def finite_language(r) -> set:
    """Language of an expression without iteration, as a set of terms."""
    from treelaw.regex import Empty, Letter, Relabel, Subst, Union

    if isinstance(r, Letter):
        return {(r.name, tuple(("x", k) for k in r.vars))}
    if isinstance(r, Empty):
        return set()
    if isinstance(r, Union):
        return set().union(*(finite_language(a) for a in r.args))
    if isinstance(r, Relabel):
        m = dict(r.mapping)
        return {plug(t, lambda k: ("x", m[k])) for t in finite_language(r.inner)}
    if isinstance(r, Subst):
        right = finite_language(r.right)
        out = set()
        for t in finite_language(r.left):
            out |= all_plugs(t, {r.var: right})
        return out
    raise TypeError(f"not a finite expression: {type(r).__name__}")


# -- runs of automata on finite trees --------------------------------------------------

def accepts_finite(aut, t, q=None) -> bool:
    """Run existence on a finite term; parity plays no role without infinite branches."""
    q = aut.initial if q is None else q
    if t[0] == "x":
        return (q, t[1]) in aut.var_moves
    name, kids = t
    return any(m.letter.name == name and len(m.children) == len(kids)
               and all(accepts_finite(aut, k, c) for k, c in zip(kids, m.children))
               for m in aut.moves_from(q))
